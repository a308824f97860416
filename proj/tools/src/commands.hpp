#pragma once

#include "config.hpp"

#include <string>

namespace tcmdp::cli {

struct Context {
    ExperimentConfig config;
    std::string out_dir;
    unsigned jobs = 1;
};

int cmd_simulate(const Context& ctx);
int cmd_estimate(const Context& ctx);
int cmd_cost_opt(const Context& ctx);
int cmd_ope(const Context& ctx);
int cmd_shift(const Context& ctx);
int cmd_reproduce_table1(const Context& ctx);

} // namespace tcmdp::cli

#pragma once

#include "tcmdp/cost_control.hpp"
#include "tcmdp/experiments.hpp"
#include "tcmdp/mdp_sim.hpp"
#include "tcmdp/model_classes.hpp"
#include "tcmdp/ope_shift.hpp"
#include "tcmdp/selector.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tcmdp::cli {

struct PolicyBlock {
    double control = 0.0;
    double beta = 0.9;
    //! "identity" (r(x) = x) or "constant".
    std::string reward = "identity";
    double reward_value = 1.0;
    std::size_t grid = 64;

    PolicySpec spec() const;
};

struct CostBlock {
    //! constant, threshold, quadratic, threshold_control, table or minimax.
    std::string name = "quadratic";
    CostSpec spec;
    //! Contexts at which controls are chosen; empty means every observed context.
    std::vector<double> contexts;
    CostOptions options;
    //! Divide each density slice by its mass over y before integrating costs.
    bool normalise = false;
};

struct ShiftBlock {
    SimModel test_model;
    std::size_t m = 1000;
    ShiftConfig config;
};

struct RunBlock {
    std::size_t n = 1000;
    std::size_t replications = 1;
    std::uint64_t seed = 1;
    //! Optional CSV trajectory; the model is simulated when empty.
    std::string trajectory;
};

//! Everything a subcommand needs, parsed from one INI file.
struct ExperimentConfig {
    RunBlock run;
    SimModel model;
    ClassConfig classes;
    SelectorConfig selector;
    CostBlock cost;
    PolicyBlock policy;
    ShiftBlock shift;
    Table1Config table1;
    MinimaxInstance minimax;
    std::size_t minimax_path_length = 5000;
    //! FNV-1a of the config text and the effective seed, as 16 hex digits.
    std::string hash;
};

struct Overrides {
    std::optional<std::uint64_t> seed;
    unsigned jobs = 1;
};

//! Throws ConfigError for unreadable files, unknown keys and invalid values.
ExperimentConfig load_config(const std::string& path, const Overrides& overrides);

std::string fnv1a_hex(const std::string& text);

} // namespace tcmdp::cli

#include "commands.hpp"
#include "config.hpp"

#include "tcmdp/error.hpp"

#include <CLI11.hpp>

#include <functional>
#include <iostream>
#include <map>

namespace {

constexpr int exit_config = 2;
constexpr int exit_numeric = 3;

} // namespace

int main(int argc, char** argv) {
    using namespace tcmdp;

    CLI::App app{"tcmdp: model selection, cost optimisation and policy evaluation for contextual MDPs"};
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed = 0;
    unsigned jobs = 1;
    std::string out_dir = "out";
    const std::vector<std::pair<std::string, std::function<int(const cli::Context&)>>> commands{
        {"simulate", cli::cmd_simulate},
        {"estimate", cli::cmd_estimate},
        {"cost-opt", cli::cmd_cost_opt},
        {"ope", cli::cmd_ope},
        {"shift", cli::cmd_shift},
        {"reproduce-table1", cli::cmd_reproduce_table1},
    };
    const std::map<std::string, std::string> help{
        {"simulate", "Simulate a trajectory and write it as CSV"},
        {"estimate", "Select a transition density and write the selection report"},
        {"cost-opt", "Choose controls under a cost with the selected density"},
        {"ope", "Evaluate a policy with the selected density"},
        {"shift", "Risk report under a shifted test model"},
        {"reproduce-table1", "Fixed-complexity risk curves for the simulated models"},
    };
    std::vector<CLI::App*> subs;
    for (const auto& [name, fn] : commands) {
        auto* sub = app.add_subcommand(name, help.at(name));
        sub->add_option("--config", config_path, "INI configuration file")->required();
        sub->add_option("--seed", seed, "Override [run] seed");
        sub->add_option("--jobs", jobs, "Worker threads (0 = hardware concurrency)");
        sub->add_option("--out", out_dir, "Output directory")->capture_default_str();
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_config;
    }

    try {
        for (std::size_t i = 0; i < subs.size(); ++i) {
            if (!subs[i]->parsed()) {
                continue;
            }
            cli::Overrides ov;
            if (subs[i]->count("--seed") > 0) {
                ov.seed = seed;
            }
            ov.jobs = jobs;
            cli::Context ctx{cli::load_config(config_path, ov), out_dir, jobs};
            return commands[i].second(ctx);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const CellBudgetError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const Error& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return exit_numeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

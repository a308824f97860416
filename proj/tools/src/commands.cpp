#include "commands.hpp"

#include "tcmdp/error.hpp"
#include "tcmdp/losses.hpp"

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>

namespace tcmdp::cli {

namespace {

using nlohmann::json;

std::filesystem::path output_path(const Context& ctx, const std::string& name) {
    std::error_code ec;
    std::filesystem::create_directories(ctx.out_dir, ec);
    if (ec) {
        throw ConfigError("cannot create output directory " + ctx.out_dir + ": " + ec.message());
    }
    return std::filesystem::path(ctx.out_dir) / name;
}

void write_file(const Context& ctx, const std::string& name, const std::string& body) {
    const auto p = output_path(ctx, name);
    std::ofstream out(p, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot write " + p.string());
    }
    out << body;
    std::cout << "wrote " << p.string() << '\n';
}

void write_csv(const Context& ctx, const std::string& name, const std::string& body) {
    write_file(ctx, name, "# config-hash: " + ctx.config.hash + "\n" + body);
}

void write_json(const Context& ctx, const std::string& name, json j) {
    j["config_hash"] = ctx.config.hash;
    write_file(ctx, name, j.dump(2) + "\n");
}

struct Data {
    std::shared_ptr<const Trajectory> trajectory;
    //! Known only when the trajectory was simulated from the model.
    std::shared_ptr<const TrueDensity> truth;
};

Data load_or_simulate(const ExperimentConfig& cfg) {
    Data d;
    if (!cfg.run.trajectory.empty()) {
        d.trajectory = std::make_shared<const Trajectory>(Trajectory::read_csv(cfg.run.trajectory));
    } else {
        d.trajectory = std::make_shared<const Trajectory>(simulate(cfg.model, cfg.run.n, cfg.run.seed));
        d.truth = true_density(cfg.model);
    }
    return d;
}

struct Estimate {
    CandidateList candidates;
    SelectionResult selection;
};

Estimate estimate(const Data& d, const ExperimentConfig& cfg, unsigned jobs) {
    Estimate e;
    e.candidates = enumerate_candidates(*d.trajectory, cfg.classes, jobs);
    const EmpiricalMeasure m(d.trajectory, quadrature_for(e.candidates));
    e.selection = select(e.candidates, m, cfg.selector);
    return e;
}

std::vector<double> observed_contexts(const Trajectory& t) {
    std::vector<double> g;
    for (const auto& s : t.samples()) {
        g.push_back(s.g);
    }
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    return g;
}

int minimax_report(const Context& ctx) {
    const auto& cfg = ctx.config;
    const auto m1 = minimax_instance(cfg.minimax, 1);
    const auto m2 = minimax_instance(cfg.minimax, 2);
    std::size_t control2 = 0;
    std::vector<double> per_mistake;
    json reps = json::array();
    for (std::size_t r = 0; r < cfg.run.replications; ++r) {
        const auto path = simulate_finite_chain(m2, cfg.minimax_path_length, derive_seed(cfg.run.seed, r));
        const auto c = minimax_select_control(path, m1, m2);
        control2 += c.control == 2 ? 1 : 0;
        const double pm = minimax_regret_per_mistake(path, m1, m2);
        per_mistake.push_back(pm);
        reps.push_back({{"control", c.control}, {"cost1", c.cost1}, {"cost2", c.cost2},
                        {"tie", c.tie}, {"regret_per_mistake", pm}});
    }
    json j;
    j["cost"] = "minimax";
    j["d"] = cfg.minimax.d;
    j["p_star1"] = cfg.minimax.p_star1;
    j["p_star2"] = cfg.minimax.p_star2();
    j["epsilon"] = cfg.minimax.epsilon;
    j["replications"] = cfg.run.replications;
    j["control2_frequency"] =
        static_cast<double>(control2) / static_cast<double>(cfg.run.replications);
    j["mean_regret_per_mistake"] = mean(per_mistake);
    j["replication_reports"] = reps;
    std::cout << "control 2 chosen in " << control2 << "/" << cfg.run.replications << " paths\n";
    write_json(ctx, "cost_opt.json", j);
    return 0;
}

} // namespace

int cmd_simulate(const Context& ctx) {
    const auto& cfg = ctx.config;
    const auto t = simulate(cfg.model, cfg.run.n, cfg.run.seed);
    std::ostringstream out;
    t.write_csv(out);
    write_csv(ctx, "trajectory.csv", out.str());
    return 0;
}

int cmd_estimate(const Context& ctx) {
    const auto& cfg = ctx.config;
    const auto d = load_or_simulate(cfg);
    const auto e = estimate(d, cfg, ctx.jobs);
    json j = json::parse(e.selection.to_json());
    j["n"] = d.trajectory->size();
    j["candidates"] = e.candidates.size();
    j["penalty_weight"] = cfg.selector.penalty_weight;
    if (d.truth) {
        const EmpiricalMeasure m(d.trajectory, quadrature_for(e.candidates));
        const auto g = oracle_gap_report(e.candidates, e.selection, m, cfg.selector, *d.truth);
        j["oracle_gap"] = {{"risk", g.risk},
                           {"oracle", g.oracle},
                           {"ratio", g.ratio},
                           {"oracle_candidate", e.selection.labels[g.oracle_index]}};
    }
    std::cout << "selected " << e.selection.selected->label() << " among " << e.candidates.size()
              << " candidates\n";
    write_json(ctx, "estimate.json", j);
    return 0;
}

int cmd_cost_opt(const Context& ctx) {
    const auto& cfg = ctx.config;
    if (cfg.cost.name == "minimax") {
        return minimax_report(ctx);
    }
    const auto d = load_or_simulate(cfg);
    const auto e = estimate(d, cfg, ctx.jobs);
    auto contexts = cfg.cost.contexts;
    if (contexts.empty()) {
        contexts = observed_contexts(*d.trajectory);
        if (contexts.size() > 64) {
            throw ConfigError("more than 64 distinct contexts observed; list them in [cost] contexts");
        }
    }
    const EmpiricalMeasure m(d.trajectory, Quadrature::midpoint(256));
    const auto kernel = [&](std::shared_ptr<const Density> s) -> std::shared_ptr<const Density> {
        if (!cfg.cost.normalise) {
            return s;
        }
        return std::make_shared<NormalisedDensity>(std::move(s), m.quadrature().nodes(), m.quadrature().weights());
    };
    const auto est = kernel(e.selection.selected);
    const auto truth = d.truth ? kernel(d.truth) : nullptr;
    json per = json::array();
    for (double g : contexts) {
        const auto c = select_control(*est, cfg.cost.spec, g, m, cfg.cost.options, ctx.jobs);
        json row{{"context", g}, {"a_hat", c.a_hat}, {"value", c.value}, {"ties", c.ties},
                 {"full_grid_tie", c.ties.size() == cfg.cost.spec.control_grid.size()}};
        if (d.truth) {
            const auto t = select_control(*truth, cfg.cost.spec, g, m, cfg.cost.options, ctx.jobs);
            row["a_star"] = t.a_hat;
        }
        per.push_back(row);
    }
    json j;
    j["cost"] = cfg.cost.spec.name;
    j["estimator"] = e.selection.selected->label();
    j["normalised"] = cfg.cost.normalise;
    j["controls"] = cfg.cost.spec.control_grid;
    j["contexts"] = per;
    if (d.truth) {
        j["regret"] = regret(*truth, *est, cfg.cost.spec, m, cfg.cost.options, ctx.jobs);
    }
    write_json(ctx, "cost_opt.json", j);
    return 0;
}

int cmd_ope(const Context& ctx) {
    const auto& cfg = ctx.config;
    const auto d = load_or_simulate(cfg);
    const auto e = estimate(d, cfg, ctx.jobs);
    const auto policy = cfg.policy.spec();
    const auto grid = StateGrid::uniform(cfg.policy.grid);
    Eigen::VectorXd r(static_cast<Eigen::Index>(grid.size()));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        r(static_cast<Eigen::Index>(i)) = policy.reward(grid.nodes[i]);
    }
    const auto op_hat = transition_operator(*e.selection.selected, policy, *d.trajectory, grid, true, ctx.jobs);
    const auto v_hat = solve_value(op_hat, r, policy.beta);
    std::optional<ValueSolution> v_true;
    json j;
    j["estimator"] = e.selection.selected->label();
    j["beta"] = policy.beta;
    j["grid"] = grid.size();
    j["residual"] = v_hat.residual;
    if (d.truth) {
        const auto op = transition_operator(*d.truth, policy, *d.trajectory, grid, true, ctx.jobs);
        v_true = solve_value(op, r, policy.beta);
        const auto b = ope_error_bound_check(*d.truth, *e.selection.selected, policy, *d.trajectory, grid,
                                             1e-8, ctx.jobs);
        j["bound"] = {{"lhs", b.lhs}, {"rhs", b.rhs}, {"hellinger", b.hellinger}, {"holds", b.holds}};
    }
    std::ostringstream csv;
    csv << "state,v_hat" << (v_true ? ",v_true" : "") << '\n'
        << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        csv << grid.nodes[i] << ',' << v_hat.values(k);
        if (v_true) {
            csv << ',' << v_true->values(k);
        }
        csv << '\n';
    }
    write_csv(ctx, "values.csv", csv.str());
    write_json(ctx, "ope.json", j);
    return 0;
}

int cmd_shift(const Context& ctx) {
    const auto& cfg = ctx.config;
    const auto [train, test] = simulate_shifted(cfg.model, cfg.shift.test_model, cfg.run.n, cfg.shift.m,
                                                cfg.run.seed);
    const auto cands = enumerate_candidates(train, cfg.classes, ctx.jobs);
    const auto r = shift_risk_report(train, test, cands, cfg.selector, *true_density(cfg.model),
                                     *true_density(cfg.shift.test_model), cfg.shift.config);
    json j = json::parse(r.to_json());
    j["constant"] = cfg.shift.config.constant;
    j["train_model"] = model_name(cfg.model.kind);
    j["test_model"] = model_name(cfg.shift.test_model.kind);
    std::cout << "shift gap " << r.gap << ", bound " << (r.holds ? "holds" : "fails") << '\n';
    write_json(ctx, "shift.json", j);
    return 0;
}

int cmd_reproduce_table1(const Context& ctx) {
    const auto res = reproduce_table1(ctx.config.table1);
    write_csv(ctx, "table1.csv", table1_csv(res));
    write_csv(ctx, "table1_selection.csv", table1_selection_csv(res));
    return 0;
}

} // namespace tcmdp::cli

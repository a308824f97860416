#include "test_support.hpp"

#include "tcmdp/error.hpp"
#include "tcmdp/losses.hpp"
#include "tcmdp/mdp_sim.hpp"
#include "tcmdp/ope_shift.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <numbers>

using namespace tcmdp;

namespace {

struct Ramp : Density {
    double eval(double, double, double, double y) const override { return std::min(2 * y, 1.0); }
    double eval_kernel(double, double, double, double y) const override { return 2 * y; }
};

//! 2 on [lo, lo + 1/2), 0 elsewhere.
struct HalfBlock : Density {
    double lo = 0.0;
    double eval(double, double, double, double) const override { return 1.0; }
    double eval_kernel(double, double, double, double y) const override {
        return y >= lo && y < lo + 0.5 ? 2.0 : 0.0;
    }
};

struct Wavy : Density {
    double eval(double x, double a, double g, double y) const override {
        return std::min(1.0, eval_kernel(x, a, g, y));
    }
    double eval_kernel(double x, double, double g, double y) const override {
        return 1.0 + 0.6 * std::cos(2 * std::numbers::pi * (y - x)) * (0.5 + g);
    }
};

PolicySpec identity_reward(double beta) {
    return constant_policy(0.0, beta, [](double x) { return x; }, 1.0);
}

} // namespace

TEST_CASE("state grid") {
    const auto g = StateGrid::uniform(4);
    CHECK(g.nodes == std::vector<double>{0.125, 0.375, 0.625, 0.875});
    CHECK(g.cell(0.0) == 0);
    CHECK(g.cell(0.26) == 1);
    CHECK(g.cell(1.0) == 3);
    CHECK_THROWS_AS(StateGrid::uniform(0), ConfigError);
}

TEST_CASE("policy validation") {
    auto p = identity_reward(0.9);
    CHECK_NOTHROW(p.validate());
    p.beta = 1.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("transition operator rows") {
    const auto t = test::random_trajectory(30, 1);
    const auto grid = StateGrid::uniform(4);
    const auto u = uniform_density();
    const auto op = transition_operator(*u, identity_reward(0.5), t, grid);
    CHECK((op.matrix.array() - 0.25).abs().maxCoeff() < 1e-15);
    for (double m : op.row_mass) {
        CHECK(m == doctest::Approx(1.0));
    }
    const Ramp ramp;
    const auto r = transition_operator(ramp, identity_reward(0.5), t, grid);
    for (int i = 0; i < 4; ++i) {
        CHECK(r.matrix(i, 0) == doctest::Approx(1.0 / 16));
        CHECK(r.matrix(i, 3) == doctest::Approx(7.0 / 16));
        CHECK(r.matrix.row(i).sum() == doctest::Approx(1.0));
    }
    const Wavy wavy;
    const auto w = transition_operator(wavy, identity_reward(0.5), t, StateGrid::uniform(16), true, 3);
    const auto w1 = transition_operator(wavy, identity_reward(0.5), t, StateGrid::uniform(16), true, 1);
    CHECK(w.matrix == w1.matrix);
    CHECK((w.matrix.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-14);
}

TEST_CASE("value solve closed forms") {
    const auto t = test::random_trajectory(30, 2);
    const auto grid = StateGrid::uniform(8);
    const Wavy wavy;
    const auto op = transition_operator(wavy, identity_reward(0.7), t, grid);
    const Eigen::VectorXd c = Eigen::VectorXd::Constant(8, 0.3);
    const auto v = solve_value(op, c, 0.7);
    CHECK((v.values.array() - 0.3 / 0.3).abs().maxCoeff() < 1e-12);
    Eigen::VectorXd r(8);
    for (int i = 0; i < 8; ++i) {
        r(i) = grid.nodes[i];
    }
    const auto v0 = solve_value(op, r, 0.0);
    CHECK((v0.values - r).cwiseAbs().maxCoeff() < 1e-15);
    CHECK_THROWS_AS(solve_value(op, r, 1.0), DomainError);

    // value iteration oracle
    Eigen::VectorXd it = Eigen::VectorXd::Zero(8);
    for (int k = 0; k < 10000; ++k) {
        it = r + 0.9 * op.matrix * it;
    }
    const auto v9 = solve_value(op, r, 0.9);
    CHECK((v9.values - it).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(v9.residual < 1e-12);
}

TEST_CASE("value interpolation") {
    ValueSolution s;
    s.grid = {0.25, 0.75};
    s.values = Eigen::Vector2d(1.0, 3.0);
    CHECK(s.at(0.0) == 1.0);
    CHECK(s.at(0.5) == doctest::Approx(2.0));
    CHECK(s.at(1.0) == 3.0);
}

TEST_CASE("ope bound check") {
    SimModel model;
    const auto truth = true_density(model);
    const auto t = simulate(model, 300, 3);
    const auto policy = constant_policy(0.0, 0.9, [](double x) { return x; }, 1.0);
    const auto grid = StateGrid::uniform(32);
    const auto same = ope_error_bound_check(*truth, *truth, policy, t, grid);
    CHECK(same.lhs == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(same.hellinger == 0.0);
    CHECK(same.holds);

    const auto est = fit_histogram(t, {1, 0, 1, 3});
    const auto r = ope_error_bound_check(*truth, est, policy, t, grid);
    CHECK(r.lhs > 0.0);
    CHECK(r.hellinger > 0.0);
    CHECK(r.rhs == doctest::Approx(2 * std::sqrt(2.0) * 0.9 / 0.01 * r.hellinger));
    CHECK(r.holds == (r.lhs <= r.rhs + 1e-8));
}

TEST_CASE("hellinger shift gap") {
    const auto t = test::random_trajectory(20, 4);
    const auto w = occupation_weights(t);
    double mass = 0.0;
    for (const auto& p : w) {
        mass += p.weight;
    }
    CHECK(mass == doctest::Approx(1.0));
    const Wavy wavy;
    CHECK(hellinger_shift_gap(wavy, wavy, w) == 0.0);
    HalfBlock left;
    HalfBlock right;
    right.lo = 0.5;
    CHECK(hellinger_shift_gap(left, right, w) == doctest::Approx(2.0).epsilon(1e-14));
    const auto u = uniform_density();
    CHECK(hellinger_shift_gap(wavy, *u, w) == doctest::Approx(hellinger_shift_gap(*u, wavy, w)).epsilon(1e-14));
    auto bad = w;
    bad[0].weight = -1.0;
    CHECK_THROWS_AS(hellinger_shift_gap(wavy, *u, bad), DomainError);
    bad = w;
    bad[0].weight += 0.5;
    CHECK_THROWS_AS(hellinger_shift_gap(wavy, *u, bad), DomainError);
}

TEST_CASE("state histogram and total variation") {
    const Trajectory t({{0.1, 0, 0, 0.2}, {0.2, 0, 0, 0.3}, {0.9, 0, 0, 0.1}, {0.6, 0, 0, 0.5}});
    const auto h = state_histogram(t, StateGrid::uniform(2));
    CHECK(h == std::vector<double>{0.5, 0.5});
    const std::vector<double> p{0.5, 0.5, 0.0};
    const std::vector<double> q{0.0, 0.5, 0.5};
    CHECK(tv_distance(p, q) == doctest::Approx(0.5));
    CHECK(tv_distance(p, p) == 0.0);
    CHECK_THROWS_AS(tv_distance(p, std::vector<double>{1.0}), DomainError);
}

TEST_CASE("shift report without a shift") {
    SimModel model;
    const auto truth = true_density(model);
    const auto t = simulate(model, 400, 5);
    ClassConfig cfg;
    cfg.x = {1, 1};
    cfg.g = {1, 1};
    cfg.y = {1, 4};
    const auto cands = enumerate_candidates(t, cfg);
    const auto r = shift_risk_report(t, t, cands, SelectorConfig{}, *truth, *truth);
    CHECK(r.gap == 0.0);
    CHECK(r.tv == 0.0);
    CHECK(r.lhs == doctest::Approx(0.25 * r.risk));
    CHECK(r.implied_constant == doctest::Approx(r.rhs / r.risk));
    const auto j = nlohmann::json::parse(r.to_json());
    CHECK(j["selected"] == r.selected);
    CHECK(j["holds"] == r.holds);

    SimModel shifted = model;
    shifted.kind = ModelKind::model_ii;
    const auto [train, test] = simulate_shifted(model, shifted, 400, 400, 6);
    const auto cands2 = enumerate_candidates(train, cfg);
    const auto s = shift_risk_report(train, test, cands2, SelectorConfig{}, *truth,
                                     *true_density(shifted));
    CHECK(s.gap > 0.0);
    CHECK(s.tv > 0.0);
    ShiftConfig bad;
    bad.constant = 0.0;
    CHECK_THROWS_AS(shift_risk_report(t, t, cands, SelectorConfig{}, *truth, *truth, bad),
                    ConfigError);
}

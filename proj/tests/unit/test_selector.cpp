#include "test_support.hpp"

#include "tcmdp/error.hpp"
#include "tcmdp/losses.hpp"
#include "tcmdp/mdp_sim.hpp"
#include "tcmdp/selector.hpp"

#include <doctest.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>

using namespace tcmdp;

namespace {

CandidateList random_candidates(Rng& rng, std::size_t k) {
    CandidateList out;
    for (std::size_t i = 0; i < k; ++i) {
        out.push_back(test::random_histogram(test::random_partition(rng), rng));
    }
    return out;
}

} // namespace

TEST_CASE("config validation") {
    SelectorConfig cfg;
    CHECK(cfg.alpha == doctest::Approx((std::sqrt(2.0) - 1) / (2 * std::sqrt(2.0))));
    CHECK_NOTHROW(cfg.validate());
    cfg.penalty_weight = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.penalty_weight = 0.5;
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("single candidate") {
    const auto t = test::random_trajectory(30, 1);
    const EmpiricalMeasure m(t, Quadrature::exact_piecewise(3));
    Rng rng(1);
    const CandidateList one{test::random_histogram({1, 0, 0, 3}, rng)};
    const auto r = select(one, m);
    CHECK(r.selected_index == 0);
    CHECK(r.contrast_values[0] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(contrast(*one[0], one, m, SelectorConfig{}) == doctest::Approx(0.0));
}

TEST_CASE("two candidates against a hand-assembled contrast") {
    const auto t = test::random_trajectory(40, 2);
    const EmpiricalMeasure m(t, Quadrature::exact_piecewise(2));
    Rng rng(2);
    const CandidateList c{test::random_histogram({0, 0, 1, 2}, rng),
                          test::random_histogram({1, 0, 0, 1}, rng)};
    SelectorConfig cfg;
    cfg.penalty_weight = 2.0;
    const double n = 40.0;
    const double h = hellinger_sq(*c[0], *c[1], m);
    const double t01 = t_functional(*c[0], *c[1], m);
    const double p0 = cfg.penalty_weight * c[0]->penalty() / n;
    const double p1 = cfg.penalty_weight * c[1]->penalty() / n;
    const double theta0 = std::max(-p0, cfg.alpha * h + t01 - p1) + p0;
    const double theta1 = std::max(-p1, cfg.alpha * h - t01 - p0) + p1;
    const auto r = select(c, m, cfg);
    CHECK(r.contrast_values[0] == doctest::Approx(theta0).epsilon(1e-12));
    CHECK(r.contrast_values[1] == doctest::Approx(theta1).epsilon(1e-12));
    CHECK(contrast(*c[1], c, m, cfg) == doctest::Approx(theta1).epsilon(1e-12));
    CHECK(r.selected_index == (theta0 <= theta1 ? 0u : 1u));
}

TEST_CASE("large penalties: the sup is decided by Hellinger and T") {
    // with n large the penalty terms vanish and theta(f) -> max_f' [alpha H^2 + T]
    const auto t = test::random_trajectory(50, 3);
    const EmpiricalMeasure big(std::make_shared<Trajectory>(t), Quadrature::exact_piecewise(2));
    Rng rng(3);
    const auto c = random_candidates(rng, 4);
    SelectorConfig cfg;
    cfg.penalty_weight = 10.0;
    const auto table = pairwise_table(c, big);
    for (std::size_t i = 0; i < c.size(); ++i) {
        double sup = 0.0;
        for (std::size_t j = 0; j < c.size(); ++j) {
            sup = std::max(sup, cfg.alpha * table.hellinger(i, j) + table.comparison(i, j));
        }
        const double limit = contrast(i, table, c, std::size_t{1} << 50, cfg);
        CHECK(limit == doctest::Approx(sup).epsilon(1e-9));
    }
}

TEST_CASE("pairwise table matches direct evaluation") {
    const auto t = test::random_trajectory(150, 4);
    const EmpiricalMeasure m(t, Quadrature::exact_piecewise(2));
    Rng rng(4);
    const auto c = random_candidates(rng, 6);
    const auto table = pairwise_table(c, m, 1);
    const auto table3 = pairwise_table(c, m, 3);
    for (std::size_t i = 0; i < c.size(); ++i) {
        for (std::size_t j = 0; j < c.size(); ++j) {
            CHECK(table.hellinger(i, j) == doctest::Approx(hellinger_sq(*c[i], *c[j], m)).epsilon(1e-12));
            CHECK(table.comparison(i, j) == doctest::Approx(t_functional(*c[i], *c[j], m)).epsilon(1e-12));
            CHECK(std::abs(table.comparison(i, j) + table.comparison(j, i)) <= 1e-12);
            CHECK(table.hellinger(i, j) == table3.hellinger(i, j));
            CHECK(table.comparison(i, j) == table3.comparison(i, j));
        }
    }
}

TEST_CASE("contrast invariants") {
    Rng rng(5);
    const auto t = test::random_trajectory(80, 5);
    const EmpiricalMeasure m(t, Quadrature::exact_piecewise(2));
    for (int rep = 0; rep < 20; ++rep) {
        auto c = random_candidates(rng, 5);
        const auto r = select(c, m);
        for (double v : r.contrast_values) {
            CHECK(v >= -1e-12);
        }
        // a superset never lowers any contrast
        auto more = c;
        more.push_back(test::random_histogram(test::random_partition(rng), rng));
        const auto r2 = select(more, m);
        for (std::size_t i = 0; i < c.size(); ++i) {
            CHECK(r2.contrast_values[i] >= r.contrast_values[i] - 1e-15);
        }
        // relabelling does not change the selected candidate
        auto perm = c;
        std::reverse(perm.begin(), perm.end());
        CHECK(select(perm, m).selected == r.selected);
        CHECK(std::find(r.ties.begin(), r.ties.end(), r.selected_index) != r.ties.end());
    }
}

TEST_CASE("ties prefer the smaller penalty then the label") {
    const auto t = test::random_trajectory(20, 6);
    const EmpiricalMeasure m(t, Quadrature::exact_piecewise(1));
    const DyadicPartition p{0, 0, 0, 1};
    const CandidateList c{std::make_shared<HistogramDensity>(p, std::vector<double>{0.5, 0.5}),
                          std::make_shared<HistogramDensity>(p, std::vector<double>{0.5, 0.5})};
    const auto r = select(c, m);
    CHECK(r.ties.size() == 2);
    CHECK(r.selected_index == 0);
    const auto json = nlohmann::json::parse(r.to_json());
    CHECK(json["selected"] == "hist(0,0,0,1)");
    CHECK(json["ties"].size() == 2);
    CHECK(json["contrast"].size() == 2);
}

TEST_CASE("true density beats a corrupted copy at n = 10^4") {
    SimModel model;
    SimModel shifted = model;
    shifted.kind = ModelKind::custom;
    shifted.custom_mean = [](double x, double, double g) { return 0.5 * x + (1 + g) / 4 + 0.08; };
    const CandidateList c{true_density(model), true_density(shifted)};
    int wins = 0;
    for (int seed = 0; seed < 50; ++seed) {
        const auto t = simulate(model, 10000, derive_seed(99, seed));
        const EmpiricalMeasure m(t, Quadrature::midpoint(128));
        wins += select(c, m).selected_index == 0 ? 1 : 0;
    }
    CHECK(wins >= 48);
}

TEST_CASE("oracle gap report") {
    SimModel model;
    const auto s = true_density(model);
    const auto t = simulate(model, 500, 3);
    const EmpiricalMeasure m(t);
    const CandidateList only{s};
    const auto g = oracle_gap_report(only, m, SelectorConfig{}, *s);
    CHECK(g.risk == 0.0);
    CHECK(g.ratio <= 1.0);

    ClassConfig cfg;
    cfg.x = {1, 1};
    cfg.g = {1, 1};
    cfg.y = {1, 6};
    const auto cands = enumerate_candidates(t, cfg);
    const EmpiricalMeasure hm(t, quadrature_for(cands));
    const auto r = oracle_gap_report(cands, hm, SelectorConfig{}, *s);
    CHECK(r.risk > 0.0);
    CHECK(r.oracle > 0.0);
    CHECK(r.ratio == doctest::Approx(r.risk / r.oracle));
    CHECK(r.oracle_index < cands.size());
}

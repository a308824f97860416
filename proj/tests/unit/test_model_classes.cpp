#include "test_support.hpp"

#include "tcmdp/empirical_measure.hpp"
#include "tcmdp/error.hpp"
#include "tcmdp/mdp_sim.hpp"
#include "tcmdp/model_classes.hpp"

#include <Eigen/Dense>
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace tcmdp;

TEST_CASE("dyadic partition layout") {
    const DyadicPartition p{1, 2, 0, 3};
    CHECK(p.cell_count() == 64);
    CHECK(p.slab_count() == 8);
    CHECK(p.slab(0.6, 0.8, 0.1) == (1u << 2 | 3u));
    CHECK(p.y_cell(1.0) == 7);
    CHECK(p.y_cell(0.0) == 0);
    CHECK(p.label() == "hist(1,2,0,3)");
    // every probe lands in exactly one cell and cells tile the cube
    std::vector<int> hit(p.cell_count(), 0);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 8; ++k) {
                const double x = (i + 0.5) / 2, a = (j + 0.5) / 4, y = (k + 0.5) / 8;
                ++hit[(p.slab(x, a, 0.3) << p.dy) | p.y_cell(y)];
            }
    CHECK(std::all_of(hit.begin(), hit.end(), [](int h) { return h == 1; }));
    CHECK_THROWS_AS((DyadicPartition{-1, 0, 0, 0}.validate()), DomainError);
}

TEST_CASE("penalties") {
    CHECK(histogram_penalty(1) == doctest::Approx(1.0 - std::log(3.0) / 2.0));
    CHECK(spline_penalty(3) == doctest::Approx(3.0 + std::log(2.0 / (std::exp(1.0) - 2.0))));
    CHECK(spline_penalty(1) > 0.0);
}

TEST_CASE("fit_histogram count-and-normalize") {
    const Trajectory all_low({{0.1, 0, 0, 0.1}, {0.1, 0, 0, 0.2}, {0.2, 0, 0, 0.3}, {0.3, 0, 0, 0.4}});
    const auto h = fit_histogram(all_low, {0, 0, 0, 1});
    CHECK(h.heights()[0] == 1.0);
    CHECK(h.heights()[1] == doctest::Approx(0.25));
    CHECK(h.dim() == 2);
    CHECK(h.penalty() == doctest::Approx(2.0 - std::log(3.0) / 2.0));

    const auto u = fit_histogram(test::random_trajectory(100, 1), {0, 0, 0, 0});
    CHECK(u.heights()[0] == 1.0);

    // slab 0: one sample in the low y cell; slab 1: one low, two high
    const Trajectory four({{0.1, 0, 0, 0.3}, {0.7, 0, 0, 0.6}, {0.9, 0, 0, 0.9}, {0.6, 0, 0, 0.2}});
    const auto f = fit_histogram(four, {1, 0, 0, 1});
    REQUIRE(f.heights().size() == 4);
    CHECK(f.heights()[0] == 1.0);                         // 2 clipped to 1
    CHECK(f.heights()[1] == 0.25);                        // 0 raised to 1/n
    CHECK(f.heights()[2] == doctest::Approx(2.0 / 3.0));  // 1/3 * 2
    CHECK(f.heights()[3] == 1.0);                         // 4/3 clipped

    // empty slabs are uniform
    const auto e = fit_histogram(all_low, {1, 0, 0, 1});
    CHECK(e.heights()[2] == 1.0);
    CHECK(e.heights()[3] == 1.0);

    CHECK_THROWS_AS(fit_histogram(all_low, {4, 4, 4, 4}, 1000), CellBudgetError);
}

TEST_CASE("fit_histogram is permutation invariant") {
    auto t = test::random_trajectory(300, 5);
    auto samples = t.samples();
    Rng rng(2);
    std::shuffle(samples.begin(), samples.end(), rng);
    const Trajectory shuffled(samples);
    const DyadicPartition p{2, 1, 1, 3};
    CHECK(fit_histogram(t, p).heights() == fit_histogram(shuffled, p).heights());
}

TEST_CASE("shifted legendre is orthonormal") {
    const int deg = 8;
    const auto q = Quadrature::midpoint(20000);
    std::vector<double> p(deg + 1);
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(deg + 1, deg + 1);
    for (std::size_t i = 0; i < q.size(); ++i) {
        shifted_legendre(q.nodes()[i], deg, p);
        for (int j = 0; j <= deg; ++j)
            for (int k = 0; k <= deg; ++k)
                gram(j, k) += q.weights()[i] * p[j] * p[k];
    }
    CHECK((gram - Eigen::MatrixXd::Identity(deg + 1, deg + 1)).cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("kernel moments") {
    // interior kernel: zeroth moment 1, first moment sqrt3 (2c - 1) by symmetry
    const auto m = kernel_moments(0.4, 3, 1.0 / 128);
    CHECK(m[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(m[1] == doctest::Approx(std::sqrt(3.0) * (2 * 0.4 - 1)).epsilon(1e-12));
    // truncated at the boundary: compare with a fine midpoint oracle
    const double c = 0.002, h = 1.0 / 128;
    double mass = 0.0, first = 0.0;
    for (int i = 0; i < 200000; ++i) {
        const double y = (i + 0.5) / 200000 * (c + h);
        const double k = std::max(0.0, 1 - std::abs(y - c) / h);
        mass += k;
        first += k * std::sqrt(3.0) * (2 * y - 1);
    }
    const auto b = kernel_moments(c, 1, h);
    CHECK(b[0] == doctest::Approx(1.0));
    CHECK(b[1] == doctest::Approx(first / mass).epsilon(1e-8));
}

TEST_CASE("fit_spline degree 0 and uniform data") {
    const auto t = test::random_trajectory(20000, 12);
    SplineOptions opt;
    const auto s0 = fit_spline(t, 0, opt);
    CHECK(s0.dim() == 1);
    CHECK(s0.eval(0.3, 0.3, 0.3, 0.3) == doctest::Approx(std::min(1.0, 1.0 / (1.0 + opt.ridge))));
    const auto s3 = fit_spline(t, 3, opt);
    for (const auto& term : s3.terms()) {
        const bool constant = term.y_degree == 0 && term.context_degrees == std::array<int, 3>{0, 0, 0};
        if (constant) {
            CHECK(term.coefficient == doctest::Approx(1.0).epsilon(1e-3));
        } else {
            CHECK(std::abs(term.coefficient) < 0.05);
        }
    }
    CHECK_THROWS_AS(fit_spline(t, 25, opt), CellBudgetError);
}

TEST_CASE("fit_spline matches an independent projection oracle") {
    SimModel model;
    const auto t = simulate(model, 400, 31);
    SplineOptions opt;
    opt.context_axes = {true, false, true};
    const int deg = 2;
    const auto fit = fit_spline(t, deg, opt);

    // oracle: enumerate the basis by brute force, integrate the kernel with a
    // fine midpoint rule and solve each block with a QR factorisation
    std::vector<std::array<int, 2>> ctx;
    for (int i = 0; i <= deg; ++i)
        for (int j = 0; i + j <= deg; ++j)
            ctx.push_back({i, j});
    auto leg = [](int k, double v) {
        std::vector<double> p(k + 1);
        shifted_legendre(v, k, p);
        return p[k];
    };
    const double h = opt.kernel_halfwidth;
    for (int k = 0; k <= deg; ++k) {
        std::vector<std::array<int, 2>> cols;
        for (auto c : ctx)
            if (c[0] + c[1] + k <= deg) cols.push_back(c);
        const auto m = static_cast<Eigen::Index>(cols.size());
        Eigen::MatrixXd g = Eigen::MatrixXd::Zero(m, m);
        Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
        for (const auto& s : t.samples()) {
            Eigen::VectorXd f(m);
            for (Eigen::Index r = 0; r < m; ++r) f(r) = leg(cols[r][0], s.x) * leg(cols[r][1], s.g);
            g += f * f.transpose() / static_cast<double>(t.size());
            if (s.y == 0.0 || s.y == 1.0) continue;
            double mass = 0.0, mom = 0.0;
            const double lo = std::max(0.0, s.y - h), hi = std::min(1.0, s.y + h);
            for (int q = 0; q < 4000; ++q) {
                const double y = lo + (q + 0.5) / 4000 * (hi - lo);
                const double kv = 1 - std::abs(y - s.y) / h;
                mass += kv;
                mom += kv * leg(k, y);
            }
            b += f * (mom / mass) / static_cast<double>(t.size());
        }
        g += opt.ridge * Eigen::MatrixXd::Identity(m, m);
        const Eigen::VectorXd sol = g.colPivHouseholderQr().solve(b);
        for (Eigen::Index r = 0; r < m; ++r) {
            bool found = false;
            for (const auto& term : fit.terms()) {
                if (term.y_degree == k && term.context_degrees[0] == cols[r][0] &&
                    term.context_degrees[1] == 0 && term.context_degrees[2] == cols[r][1]) {
                    CHECK(term.coefficient == doctest::Approx(sol(r)).epsilon(1e-6));
                    found = true;
                }
            }
            CHECK(found);
        }
    }
}

TEST_CASE("enumerate_candidates counts and ranges") {
    const auto t = simulate(SimModel{}, 300, 4);
    ClassConfig only_y;
    only_y.y = {0, 3};
    CHECK(enumerate_candidates(t, only_y).size() == 4);

    ClassConfig table_hist;
    table_hist.x = {1, 1};
    table_hist.g = {1, 1};
    table_hist.y = {1, 10};
    const auto hist = enumerate_candidates(t, table_hist, 2);
    CHECK(hist.size() == 10);

    ClassConfig table_spline;
    table_spline.histograms = false;
    table_spline.splines = true;
    table_spline.degree = {1, 10};
    table_spline.spline.context_axes = {true, false, true};
    table_spline.spline.context_degree_cap = 2;
    const auto spl = enumerate_candidates(t, table_spline, 2);
    CHECK(spl.size() == 10);

    ClassConfig tied;
    tied.x = {0, 3};
    tied.g = {0, 3};
    tied.y = {0, 6};
    tied.tie_xg = true;
    CHECK(histogram_partitions(tied).size() == 28);

    ClassConfig none;
    none.histograms = false;
    CHECK_THROWS_AS(enumerate_candidates(t, none), ConfigError);

    // every candidate stays in [0, 1] at random probes
    Rng rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    CandidateList all = hist;
    all.insert(all.end(), spl.begin(), spl.end());
    bool in_range = true;
    for (int i = 0; i < 100000; ++i) {
        const auto& c = all[i % all.size()];
        const double v = c->eval(u(rng), u(rng), u(rng), u(rng));
        in_range = in_range && v >= 0.0 && v <= 1.0;
    }
    CHECK(in_range);

    // histograms integrate to at most one against lambda_n on the exact rule
    const EmpiricalMeasure m(t, Quadrature::exact_piecewise(10));
    for (const auto& c : hist) {
        const double mass =
            integrate_lambda_n([&](double x, double a, double g, double y) { return c->eval(x, a, g, y); }, m);
        CHECK(mass > 0.0);
        CHECK(mass <= 1.0 + 1e-12);
    }
}

TEST_CASE("penalty summability") {
    const auto spline = check_penalty_summability(PenaltyClass::spline, 20);
    REQUIRE(spline.size() == 20);
    for (int h = 1; h <= 20; ++h) {
        // closed form of the geometric sum: 1 - (2/e)^h
        CHECK(spline[h - 1] == doctest::Approx(1.0 - std::pow(2.0 / std::exp(1.0), h)).epsilon(1e-12));
        CHECK(spline[h - 1] <= 1.0);
        if (h > 1) CHECK(spline[h - 1] >= spline[h - 2]);
    }
    const auto dyadic = check_penalty_summability(PenaltyClass::dyadic, 20);
    const double r3 = std::sqrt(3.0);
    const double oracle3 = r3 * (std::exp(-1.0) + std::exp(-16.0) + 16.0 * std::exp(-31.0) +
                                 376.0 * std::exp(-46.0));
    CHECK(dyadic[2] == doctest::Approx(oracle3).epsilon(1e-12));
    for (std::size_t i = 0; i < dyadic.size(); ++i) {
        CHECK(dyadic[i] <= 1.0);
        if (i > 0) CHECK(dyadic[i] >= dyadic[i - 1]);
    }
    const double single[] = {0.5};
    CHECK(penalty_partial_sums(single)[0] == doctest::Approx(std::exp(-0.5)));
    CHECK_THROWS_AS(check_penalty_summability(PenaltyClass::spline, 0), DomainError);
}

#include "test_support.hpp"

#include "tcmdp/error.hpp"
#include "tcmdp/losses.hpp"
#include "tcmdp/mdp_sim.hpp"

#include <doctest.h>

#include <cmath>

using namespace tcmdp;

namespace {

// Unclipped density given by a callable, for oracles outside [0, 1].
struct RawDensity : Density {
    PointFn fn;
    explicit RawDensity(PointFn f) : fn(std::move(f)) {}
    double eval(double x, double a, double g, double y) const override { return fn(x, a, g, y); }
};

} // namespace

TEST_CASE("psi values") {
    CHECK(psi(0.3, 0.3) == 0.0);
    CHECK(psi(0.0, 0.0) == 0.0);
    CHECK(psi(0.0, 1.0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(psi(1.0, 4.0) == doctest::Approx(1.0 / (std::sqrt(2.0) * std::sqrt(5.0))).epsilon(1e-15));
    CHECK(psi(1.0, 4.0) == doctest::Approx(0.3162278).epsilon(1e-7));
    CHECK_THROWS_AS(psi(-0.1, 1.0), DomainError);
    // phi is half of sqrt2 * psi
    CHECK(phi(1.0, 4.0) == doctest::Approx(psi(1.0, 4.0) / std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("psi antisymmetric and bounded") {
    Rng rng(1);
    std::exponential_distribution<double> e(1.0);
    for (int i = 0; i < 10000; ++i) {
        const double a = e(rng), b = i % 7 == 0 ? 0.0 : e(rng);
        CHECK(psi(a, b) == -psi(b, a));
        CHECK(std::abs(psi(a, b)) <= 1.0 / std::sqrt(2.0) + 1e-15);
    }
}

TEST_CASE("hellinger_sq closed forms") {
    const auto t = test::random_trajectory(5, 4);
    const EmpiricalMeasure m(t);
    const RawDensity one([](double, double, double, double) { return 1.0; });
    const RawDensity zero([](double, double, double, double) { return 0.0; });
    CHECK(hellinger_sq(one, one, m) == 0.0);
    CHECK(hellinger_sq(one, zero, m) == doctest::Approx(0.5).epsilon(1e-14));
    const RawDensity two_cell([](double, double, double, double y) { return y < 0.5 ? 1.6 : 0.4; });
    const double oracle = 0.5 * (0.5 * std::pow(std::sqrt(1.6) - 1.0, 2) +
                                 0.5 * std::pow(std::sqrt(0.4) - 1.0, 2));
    CHECK(hellinger_sq(two_cell, one, m) == doctest::Approx(oracle).epsilon(1e-14));
}

TEST_CASE("t_functional against a term-by-term oracle") {
    // two 2-cell histograms in y, constant in (x, a, g)
    const DyadicPartition p{0, 0, 0, 1};
    const HistogramDensity f1(p, {0.9, 0.3});
    const HistogramDensity f2(p, {0.2, 0.7});
    const Trajectory t({{0.1, 0.0, 0.0, 0.2}, {0.2, 0.0, 0.0, 0.7}, {0.7, 0.0, 0.0, 0.4}}, true);
    const EmpiricalMeasure m(t, Quadrature::exact_piecewise(1));
    const double h1[2] = {0.9, 0.3}, h2[2] = {0.2, 0.7};
    auto cell = [](double y) { return y < 0.5 ? 0 : 1; };
    double a = 0.0;
    for (double y : {0.2, 0.7, 0.4}) {
        const double c1 = h1[cell(y)], c2 = h2[cell(y)];
        a += (std::sqrt(c2) - std::sqrt(c1)) / std::sqrt(2.0 * (c1 + c2)) / 3.0;
    }
    double b = 0.0, c = 0.0;
    for (int k = 0; k < 2; ++k) {
        b += 0.5 * std::sqrt((h1[k] + h2[k]) / 2.0) * (std::sqrt(h2[k]) - std::sqrt(h1[k]));
        c += 0.5 * (h1[k] - h2[k]);
    }
    const auto tc = t_components(f1, f2, m);
    CHECK(tc.a == doctest::Approx(a).epsilon(1e-14));
    CHECK(tc.b == doctest::Approx(b).epsilon(1e-14));
    CHECK(tc.c == doctest::Approx(c).epsilon(1e-14));
    CHECK(t_functional(f1, f2, m) == doctest::Approx(a + 0.5 * (b + c)).epsilon(1e-14));
    CHECK(t_functional(f1, f1, m) == 0.0);
}

TEST_CASE("t antisymmetry and metric axioms on random candidates") {
    Rng rng(7);
    const auto t = test::random_trajectory(20, 8);
    const EmpiricalMeasure m(t, Quadrature::exact_piecewise(2));
    for (int i = 0; i < 100; ++i) {
        const auto f1 = test::random_histogram(test::random_partition(rng), rng);
        const auto f2 = test::random_histogram(test::random_partition(rng), rng);
        const auto f3 = test::random_histogram(test::random_partition(rng), rng);
        CHECK(std::abs(t_functional(*f1, *f2, m) + t_functional(*f2, *f1, m)) <= 1e-12);
        CHECK(t_functional(*f1, *f1, m) == 0.0);
        const double h12 = hellinger_sq(*f1, *f2, m), h21 = hellinger_sq(*f2, *f1, m);
        CHECK(std::abs(h12 - h21) <= 1e-14);
        const double h23 = hellinger_sq(*f2, *f3, m), h13 = hellinger_sq(*f1, *f3, m);
        CHECK(std::sqrt(h13) <= std::sqrt(h12) + std::sqrt(h23) + 1e-10);
        const double mass = integrate_lambda_n(
            [&](double x, double a, double g, double y) {
                return f1->eval(x, a, g, y) + f2->eval(x, a, g, y);
            },
            m);
        CHECK(h12 <= 0.5 * mass + 1e-14);
    }
}

TEST_CASE("l2_sqrt_distance_sq") {
    const RawDensity one([](double, double, double, double) { return 1.0; });
    const RawDensity zero([](double, double, double, double) { return 0.0; });
    const ProductQuadrature q(Quadrature::exact_piecewise(2));
    CHECK(l2_sqrt_distance_sq(one, one, q) == 0.0);
    CHECK(l2_sqrt_distance_sq(one, zero, q) == doctest::Approx(1.0).epsilon(1e-14));
    Rng rng(3);
    const DyadicPartition p{1, 0, 1, 2};
    const auto f1 = test::random_histogram(p, rng);
    const auto f2 = test::random_histogram(p, rng);
    double oracle = 0.0;
    for (std::size_t c = 0; c < p.cell_count(); ++c) {
        const double d = std::sqrt(f1->heights()[c]) - std::sqrt(f2->heights()[c]);
        oracle += d * d / static_cast<double>(p.cell_count());
    }
    CHECK(l2_sqrt_distance_sq(*f1, *f2, q) == doctest::Approx(oracle).epsilon(1e-13));
}

TEST_CASE("bernstein variance bound") {
    Rng rng(5);
    const auto t = test::random_trajectory(15, 6);
    const EmpiricalMeasure m(t, Quadrature::exact_piecewise(2));
    const auto s = test::random_histogram({1, 0, 0, 2}, rng);
    const auto f = test::random_histogram({0, 0, 1, 1}, rng);
    auto same = check_bernstein_var_bound(*s, *f, *f, m);
    CHECK(same.lhs == 0.0);
    CHECK(same.holds);
    auto first = check_bernstein_var_bound(*s, *s, *f, m);
    CHECK(first.rhs == doctest::Approx(3.0 * hellinger_sq(*s, *f, m)).epsilon(1e-14));
    CHECK(first.holds);
    for (int i = 0; i < 100; ++i) {
        const auto ss = test::random_histogram(test::random_partition(rng), rng);
        const auto f1 = test::random_histogram(test::random_partition(rng), rng);
        const auto f2 = test::random_histogram(test::random_partition(rng), rng);
        CHECK(check_bernstein_var_bound(*ss, *f1, *f2, m).holds);
    }
}

TEST_CASE("mb-eb bound") {
    Rng rng(9);
    SimModel model;
    const auto s = true_density(model);
    const auto t = simulate(model, 200, 17);
    const EmpiricalMeasure m(t, Quadrature::midpoint(256));
    auto diag = check_mb_eb_bound(*s, *s, *s, m, *s);
    CHECK(diag.holds);
    CHECK(std::abs(diag.lhs) <= 1e-14);
    for (int i = 0; i < 100; ++i) {
        const auto f1 = test::random_histogram(test::random_partition(rng, 3), rng);
        const auto f2 = test::random_histogram(test::random_partition(rng, 3), rng);
        CHECK(check_mb_eb_bound(*s, *s, *f2, m, *s).holds);
        CHECK(check_mb_eb_bound(*s, *f1, *f2, m, *s).holds);
    }
}

TEST_CASE("mb-eb centring matches a direct quadrature oracle") {
    // with f1 = s the inequality reads (1 - 1/sqrt2) H^2(s, f2) + T(s, f2) <= Zbar
    SimModel model;
    const auto s = true_density(model);
    const auto t = simulate(model, 50, 23);
    const EmpiricalMeasure m(t, Quadrature::midpoint(256));
    Rng rng(4);
    const auto f2 = test::random_histogram({1, 0, 1, 3}, rng);
    const auto r = check_mb_eb_bound(*s, *s, *f2, m, *s);
    double centre = 0.0;
    for (const auto& smp : t.samples()) {
        double acc = 0.0;
        for (int q = 0; q < 4096; ++q) {
            const double y = (q + 0.5) / 4096.0;
            const double sv = s->eval(smp.x, smp.a, smp.g, y);
            acc += psi(sv, f2->eval(smp.x, smp.a, smp.g, y)) * sv / 4096.0;
        }
        centre += acc / static_cast<double>(t.size());
    }
    const double zbar = t_components(*s, *f2, m).a - centre;
    CHECK(r.rhs == doctest::Approx(zbar).epsilon(1e-3));
    CHECK(r.holds);
}

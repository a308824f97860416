#include "tcmdp/losses.hpp"

#include "tcmdp/error.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace tcmdp {

double psi(double c1, double c2) {
    if (c1 < 0.0 || c2 < 0.0 || std::isnan(c1) || std::isnan(c2)) {
        throw DomainError("psi needs nonnegative arguments");
    }
    const double sum = c1 + c2;
    if (sum == 0.0) {
        return 0.0;
    }
    return (std::sqrt(c2) - std::sqrt(c1)) / (std::sqrt(2.0) * std::sqrt(sum));
}

double phi(double x, double y) {
    if (x < 0.0 || y < 0.0 || std::isnan(x) || std::isnan(y)) {
        throw DomainError("phi needs nonnegative arguments");
    }
    const double sum = x + y;
    if (sum == 0.0) {
        return 0.0;
    }
    return (std::sqrt(y) - std::sqrt(x)) / (2.0 * std::sqrt(sum));
}

namespace {

void check_finite(std::span<const double> v, std::size_t sample) {
    for (double x : v) {
        if (!std::isfinite(x) || x < 0.0) {
            throw EvaluationError("candidate value invalid at sample " + std::to_string(sample));
        }
    }
}

// Calls body(i, v1, v2) with the two y-slices of sample i.
template <class Body>
void for_each_slice(const Density& f1, const Density& f2, const EmpiricalMeasure& m, Body&& body) {
    const auto& t = m.trajectory();
    const auto& ys = m.quadrature().nodes();
    std::vector<double> v1(ys.size()), v2(ys.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        const auto& s = t[i];
        f1.eval_slice(s.x, s.a, s.g, ys, v1);
        f2.eval_slice(s.x, s.a, s.g, ys, v2);
        check_finite(v1, i);
        check_finite(v2, i);
        body(i, v1, v2);
    }
}

} // namespace

double hellinger_sq(const Density& f1, const Density& f2, const EmpiricalMeasure& m) {
    const auto& w = m.quadrature().weights();
    double total = 0.0;
    for_each_slice(f1, f2, m, [&](std::size_t, const std::vector<double>& v1,
                                  const std::vector<double>& v2) {
        double acc = 0.0;
        for (std::size_t q = 0; q < w.size(); ++q) {
            const double d = std::sqrt(v1[q]) - std::sqrt(v2[q]);
            acc += w[q] * d * d;
        }
        total += acc;
    });
    return 0.5 * total / static_cast<double>(m.n());
}

TComponents t_components(const Density& f1, const Density& f2, const EmpiricalMeasure& m) {
    const auto& t = m.trajectory();
    const auto& w = m.quadrature().weights();
    TComponents out;
    for_each_slice(f1, f2, m, [&](std::size_t i, const std::vector<double>& v1,
                                  const std::vector<double>& v2) {
        const auto& s = t[i];
        const double o1 = f1.eval(s.x, s.a, s.g, s.y);
        const double o2 = f2.eval(s.x, s.a, s.g, s.y);
        if (!std::isfinite(o1) || !std::isfinite(o2)) {
            throw EvaluationError("candidate value non-finite at sample " + std::to_string(i));
        }
        out.a += psi(o1, o2);
        double b = 0.0, c = 0.0;
        for (std::size_t q = 0; q < w.size(); ++q) {
            const double r1 = std::sqrt(v1[q]);
            const double r2 = std::sqrt(v2[q]);
            b += w[q] * std::sqrt(0.5 * (v1[q] + v2[q])) * (r2 - r1);
            c += w[q] * (v1[q] - v2[q]);
        }
        out.b += b;
        out.c += c;
    });
    const double n = static_cast<double>(m.n());
    out.a /= n;
    out.b /= n;
    out.c /= n;
    return out;
}

double t_functional(const Density& f1, const Density& f2, const EmpiricalMeasure& m) {
    return t_components(f1, f2, m).total();
}

double l2_sqrt_distance_sq(const Density& f1, const Density& f2, const ProductQuadrature& q) {
    const auto& qx = q.axis(0);
    const auto& qa = q.axis(1);
    const auto& qg = q.axis(2);
    const auto& qy = q.axis(3);
    std::vector<double> v1(qy.size()), v2(qy.size());
    double total = 0.0;
    for (std::size_t ix = 0; ix < qx.size(); ++ix) {
        for (std::size_t ia = 0; ia < qa.size(); ++ia) {
            for (std::size_t ig = 0; ig < qg.size(); ++ig) {
                const double x = qx.nodes()[ix], a = qa.nodes()[ia], g = qg.nodes()[ig];
                f1.eval_slice(x, a, g, qy.nodes(), v1);
                f2.eval_slice(x, a, g, qy.nodes(), v2);
                double acc = 0.0;
                for (std::size_t iy = 0; iy < qy.size(); ++iy) {
                    if (!(v1[iy] >= 0.0) || !(v2[iy] >= 0.0) || !std::isfinite(v1[iy]) ||
                        !std::isfinite(v2[iy])) {
                        throw EvaluationError("invalid density value in l2_sqrt_distance_sq");
                    }
                    const double d = std::sqrt(v1[iy]) - std::sqrt(v2[iy]);
                    acc += qy.weights()[iy] * d * d;
                }
                total += qx.weights()[ix] * qa.weights()[ia] * qg.weights()[ig] * acc;
            }
        }
    }
    return total;
}

BoundCheck check_bernstein_var_bound(const Density& s, const Density& f1, const Density& f2,
                                     const EmpiricalMeasure& m, double slack) {
    const auto& t = m.trajectory();
    const auto& ys = m.quadrature().nodes();
    const auto& w = m.quadrature().weights();
    std::vector<double> vs(ys.size());
    double lhs = 0.0;
    for_each_slice(f1, f2, m, [&](std::size_t i, const std::vector<double>& v1,
                                  const std::vector<double>& v2) {
        s.eval_slice(t[i].x, t[i].a, t[i].g, ys, vs);
        check_finite(vs, i);
        double acc = 0.0;
        for (std::size_t q = 0; q < w.size(); ++q) {
            const double p = psi(v1[q], v2[q]);
            acc += w[q] * p * p * vs[q];
        }
        lhs += acc;
    });
    lhs /= static_cast<double>(m.n());
    BoundCheck out;
    out.lhs = lhs;
    out.rhs = 3.0 * (hellinger_sq(s, f1, m) + hellinger_sq(s, f2, m));
    out.holds = out.lhs <= out.rhs + slack;
    return out;
}

BoundCheck check_mb_eb_bound(const Density& s, const Density& f1, const Density& f2,
                             const EmpiricalMeasure& m, const Density& true_s, double slack) {
    const auto& t = m.trajectory();
    const auto& ys = m.quadrature().nodes();
    const auto& w = m.quadrature().weights();
    std::vector<double> vs(ys.size());
    // sum of the conditional means E[psi | X_i, a_i, G_i] under true_s
    double centring = 0.0;
    for_each_slice(f1, f2, m, [&](std::size_t i, const std::vector<double>& v1,
                                  const std::vector<double>& v2) {
        true_s.eval_slice(t[i].x, t[i].a, t[i].g, ys, vs);
        check_finite(vs, i);
        double acc = 0.0;
        for (std::size_t q = 0; q < w.size(); ++q) {
            acc += w[q] * psi(v1[q], v2[q]) * vs[q];
        }
        centring += acc;
    });
    const double n = static_cast<double>(m.n());
    const TComponents tc = t_components(f1, f2, m);
    const double z_mean = tc.a - centring / n;
    const double r2 = 1.0 / std::sqrt(2.0);
    BoundCheck out;
    out.lhs = (1.0 - r2) * hellinger_sq(s, f2, m) + tc.total();
    out.rhs = (1.0 + r2) * hellinger_sq(s, f1, m) + z_mean;
    out.holds = out.lhs <= out.rhs + slack;
    return out;
}

} // namespace tcmdp

#include "tcmdp/error.hpp"
#include "tcmdp/model_classes.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace tcmdp {

namespace {

struct GaussRule {
    std::vector<double> nodes;   // on [-1, 1]
    std::vector<double> weights; // sum to 2
};

GaussRule gauss_legendre(int m) {
    GaussRule r;
    r.nodes.resize(m);
    r.weights.resize(m);
    for (int i = 0; i < m; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= m; ++k) {
                const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = m * (z * p1 - p0) / (z * z - 1.0);
            const double step = p1 / dp;
            z -= step;
            if (std::abs(step) < 1e-15) {
                break;
            }
        }
        r.nodes[i] = z;
        r.weights[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    return r;
}

const GaussRule& kernel_rule() {
    static const GaussRule rule = gauss_legendre(12);
    return rule;
}

int context_total(const std::array<int, 3>& d) { return d[0] + d[1] + d[2]; }

} // namespace

void shifted_legendre(double t, int degree, std::span<double> out) {
    const double z = 2.0 * t - 1.0;
    double p0 = 1.0, p1 = z;
    out[0] = 1.0;
    if (degree >= 1) {
        out[1] = std::sqrt(3.0) * z;
    }
    for (int k = 1; k < degree; ++k) {
        const double p2 = ((2.0 * k + 1.0) * z * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
        out[k + 1] = std::sqrt(2.0 * (k + 1) + 1.0) * p2;
    }
}

std::vector<std::array<int, 3>> spline_context_indices(int degree, const SplineOptions& options) {
    const int cap = options.context_degree_cap < 0 ? degree
                                                   : std::min(degree, options.context_degree_cap);
    std::vector<std::array<int, 3>> out;
    const int mx = options.context_axes[0] ? cap : 0;
    const int ma = options.context_axes[1] ? cap : 0;
    const int mg = options.context_axes[2] ? cap : 0;
    for (int total = 0; total <= cap; ++total) {
        for (int i = std::min(mx, total); i >= 0; --i) {
            for (int j = std::min(ma, total - i); j >= 0; --j) {
                const int k = total - i - j;
                if (k <= mg) {
                    out.push_back({i, j, k});
                }
            }
        }
    }
    return out;
}

std::vector<double> kernel_moments(double center, int degree, double halfwidth) {
    if (!(halfwidth > 0.0)) {
        throw DomainError("kernel half-width must be positive");
    }
    const auto& rule = kernel_rule();
    std::vector<double> moments(degree + 1, 0.0);
    std::vector<double> p(degree + 1);
    double mass = 0.0;
    // the kernel is linear on [c-h, c] and [c, c+h]; integrate each piece
    // restricted to [0, 1] with Gauss-Legendre
    const double pieces[2][2] = {{center - halfwidth, center}, {center, center + halfwidth}};
    for (const auto& piece : pieces) {
        const double lo = std::max(piece[0], 0.0);
        const double hi = std::min(piece[1], 1.0);
        if (hi <= lo) {
            continue;
        }
        const double mid = 0.5 * (lo + hi), rad = 0.5 * (hi - lo);
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            const double y = mid + rad * rule.nodes[q];
            const double k = (1.0 - std::abs(y - center) / halfwidth) / halfwidth;
            const double w = rad * rule.weights[q] * k;
            shifted_legendre(y, degree, p);
            mass += w;
            for (int d = 0; d <= degree; ++d) {
                moments[d] += w * p[d];
            }
        }
    }
    if (!(mass > 0.0)) {
        throw DomainError("kernel has no mass inside [0,1]");
    }
    for (auto& m : moments) {
        m /= mass;
    }
    return moments;
}

SplineDensity::SplineDensity(int degree, std::vector<Term> terms, SplineOptions options)
    : CandidateDensity("spline(" + std::to_string(degree) + ")", terms.size(),
                       spline_penalty(degree)),
      degree_(degree), terms_(std::move(terms)), options_(options) {
    if (degree_ < 0) {
        throw DomainError("spline degree must be nonnegative");
    }
}

void SplineDensity::y_profile(double x, double a, double g, std::vector<double>& by_y) const {
    const int cap = degree_;
    std::vector<double> px(cap + 1), pa(cap + 1), pg(cap + 1);
    shifted_legendre(x, cap, px);
    shifted_legendre(a, cap, pa);
    shifted_legendre(g, cap, pg);
    by_y.assign(degree_ + 1, 0.0);
    for (const auto& term : terms_) {
        by_y[term.y_degree] += term.coefficient * px[term.context_degrees[0]] *
                               pa[term.context_degrees[1]] * pg[term.context_degrees[2]];
    }
}

double SplineDensity::raw(double x, double a, double g, double y) const {
    std::vector<double> by_y;
    y_profile(x, a, g, by_y);
    std::vector<double> py(degree_ + 1);
    shifted_legendre(y, degree_, py);
    double v = 0.0;
    for (int k = 0; k <= degree_; ++k) {
        v += by_y[k] * py[k];
    }
    return v;
}

double SplineDensity::eval(double x, double a, double g, double y) const {
    return std::clamp(raw(x, a, g, y), options_.floor, 1.0);
}

void SplineDensity::eval_slice(double x, double a, double g, std::span<const double> ys,
                               std::span<double> out) const {
    std::vector<double> by_y;
    y_profile(x, a, g, by_y);
    std::vector<double> py(degree_ + 1);
    for (std::size_t j = 0; j < ys.size(); ++j) {
        shifted_legendre(ys[j], degree_, py);
        double v = 0.0;
        for (int k = 0; k <= degree_; ++k) {
            v += by_y[k] * py[k];
        }
        out[j] = std::clamp(v, options_.floor, 1.0);
    }
}

SplineDensity fit_spline(const Trajectory& t, int degree, const SplineOptions& options) {
    if (degree < 0 || degree > options.max_degree) {
        throw CellBudgetError("spline degree " + std::to_string(degree) + " outside [0, " +
                              std::to_string(options.max_degree) + "]");
    }
    const auto ctx = spline_context_indices(degree, options);
    const std::size_t n = t.size();
    const std::size_t m = ctx.size();

    // context features and kernel moments per sample
    Eigen::MatrixXd features(n, m);
    Eigen::MatrixXd moments(n, degree + 1);
    std::vector<double> px(degree + 1), pa(degree + 1), pg(degree + 1);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& s = t[i];
        shifted_legendre(s.x, degree, px);
        shifted_legendre(s.a, degree, pa);
        shifted_legendre(s.g, degree, pg);
        for (std::size_t j = 0; j < m; ++j) {
            features(i, j) = px[ctx[j][0]] * pa[ctx[j][1]] * pg[ctx[j][2]];
        }
        const bool atom = options.exclude_boundary_atoms && (s.y == 0.0 || s.y == 1.0);
        if (atom) {
            moments.row(i).setZero();
        } else {
            const auto km = kernel_moments(s.y, degree, options.kernel_halfwidth);
            for (int k = 0; k <= degree; ++k) {
                moments(i, k) = km[k];
            }
        }
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    const Eigen::MatrixXd gram = features.transpose() * features * inv_n;
    const Eigen::MatrixXd rhs = features.transpose() * moments * inv_n;

    std::vector<SplineDensity::Term> terms;
    for (int k = 0; k <= degree; ++k) {
        std::vector<std::size_t> cols;
        for (std::size_t j = 0; j < m; ++j) {
            if (context_total(ctx[j]) + k <= degree) {
                cols.push_back(j);
            }
        }
        if (cols.empty()) {
            continue;
        }
        const auto c = static_cast<Eigen::Index>(cols.size());
        Eigen::MatrixXd g(c, c);
        Eigen::VectorXd b(c);
        for (Eigen::Index r = 0; r < c; ++r) {
            b(r) = rhs(cols[r], k);
            for (Eigen::Index q = 0; q < c; ++q) {
                g(r, q) = gram(cols[r], cols[q]);
            }
            g(r, r) += options.ridge;
        }
        const Eigen::LDLT<Eigen::MatrixXd> ldlt(g);
        if (ldlt.info() != Eigen::Success) {
            throw NumericError("spline Gram factorisation failed at degree " +
                               std::to_string(degree));
        }
        const Eigen::VectorXd sol = ldlt.solve(b);
        for (Eigen::Index r = 0; r < c; ++r) {
            if (!std::isfinite(sol(r))) {
                throw NumericError("non-finite spline coefficient");
            }
            terms.push_back({ctx[cols[r]], k, sol(r)});
        }
    }
    return SplineDensity(degree, std::move(terms), options);
}

} // namespace tcmdp

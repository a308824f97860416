#include "tcmdp/error.hpp"
#include "tcmdp/losses.hpp"
#include "tcmdp/ope_shift.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace tcmdp {

std::vector<WeightedPoint> occupation_weights(const Trajectory& t) {
    std::vector<WeightedPoint> out;
    out.reserve(t.size());
    const double w = 1.0 / static_cast<double>(t.size());
    for (const auto& s : t.samples()) {
        out.push_back({s.x, s.a, s.g, w});
    }
    return out;
}

double hellinger_shift_gap(const Density& s0, const Density& s_star,
                           const std::vector<WeightedPoint>& weights, const Quadrature& qy) {
    double total = 0.0;
    double mass = 0.0;
    for (const auto& p : weights) {
        if (!(p.weight >= 0.0)) {
            throw DomainError("shift gap weights must be nonnegative");
        }
        mass += p.weight;
        double acc = 0.0;
        for (std::size_t q = 0; q < qy.size(); ++q) {
            const double y = qy.nodes()[q];
            const double a = s0.eval_kernel(p.x, p.a, p.g, y);
            const double b = s_star.eval_kernel(p.x, p.a, p.g, y);
            if (!(a >= 0.0) || !(b >= 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
                throw EvaluationError("invalid density value in shift gap");
            }
            const double d = std::sqrt(a) - std::sqrt(b);
            acc += qy.weights()[q] * d * d;
        }
        total += p.weight * acc;
    }
    if (std::abs(mass - 1.0) > 1e-9) {
        throw DomainError("shift gap weights must sum to 1");
    }
    return total;
}

std::vector<double> state_histogram(const Trajectory& t, const StateGrid& grid) {
    std::vector<double> h(grid.size(), 0.0);
    for (const auto& s : t.samples()) {
        h[grid.cell(s.x)] += 1.0 / static_cast<double>(t.size());
    }
    return h;
}

double tv_distance(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) {
        throw DomainError("tv_distance needs equally long vectors");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        s += std::abs(p[i] - q[i]);
    }
    return 0.5 * s;
}

std::string ShiftReport::to_json() const {
    nlohmann::json j;
    j["selected"] = selected;
    j["risk"] = risk;
    j["oracle"] = oracle;
    j["shift_gap"] = gap;
    j["tv"] = tv;
    j["lhs"] = lhs;
    j["rhs"] = rhs;
    j["holds"] = holds;
    j["implied_constant"] = implied_constant;
    return j.dump(2);
}

ShiftReport shift_risk_report(const Trajectory& train, const Trajectory& test,
                              const CandidateList& candidates, const SelectorConfig& cfg,
                              const Density& s0, const Density& s_star, const ShiftConfig& shift) {
    if (!(shift.constant > 0.0)) {
        throw ConfigError("shift constant must be positive");
    }
    const EmpiricalMeasure train_m(train, quadrature_for(candidates));
    const auto sel = select(candidates, train_m, cfg);
    const auto gap = oracle_gap_report(candidates, sel, train_m, cfg, s0);

    int depth = 0;
    for (const auto& c : candidates) {
        depth = std::max(depth, c->y_dyadic_depth().value_or(0));
    }
    const EmpiricalMeasure test_m(test, Quadrature::refined_for(depth));

    ShiftReport r;
    r.selected = sel.selected->label();
    r.risk = hellinger_sq(s_star, *sel.selected, test_m);
    r.oracle = gap.oracle;
    r.gap = hellinger_shift_gap(s0, s_star, occupation_weights(test));
    const auto p = state_histogram(train, shift.grid);
    const auto q = state_histogram(test, shift.grid);
    r.tv = tv_distance(p, q);
    r.lhs = shift.constant * r.risk;
    r.rhs = r.oracle + r.gap + r.tv;
    r.holds = r.lhs <= r.rhs + shift.slack;
    r.implied_constant =
        r.risk > 0.0 ? r.rhs / r.risk : std::numeric_limits<double>::infinity();
    return r;
}

} // namespace tcmdp

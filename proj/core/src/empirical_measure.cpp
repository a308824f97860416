#include "tcmdp/empirical_measure.hpp"

#include "tcmdp/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tcmdp {

EmpiricalMeasure::EmpiricalMeasure(std::shared_ptr<const Trajectory> base, Quadrature quadrature,
                                   double match_tolerance)
    : base_(std::move(base)), quadrature_(std::move(quadrature)),
      match_tolerance_(match_tolerance) {
    if (!base_) {
        throw DomainError("empirical measure needs a trajectory");
    }
    if (!(match_tolerance_ >= 0.0)) {
        throw DomainError("match tolerance must be nonnegative");
    }
}

EmpiricalMeasure::EmpiricalMeasure(const Trajectory& base, Quadrature quadrature,
                                   double match_tolerance)
    : EmpiricalMeasure(std::make_shared<const Trajectory>(base), std::move(quadrature),
                       match_tolerance) {}

double integrate_lambda_n(const PointFn& f, const EmpiricalMeasure& m) {
    const auto& t = m.trajectory();
    const auto& nodes = m.quadrature().nodes();
    const auto& w = m.quadrature().weights();
    std::vector<double> per_sample(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        const auto& s = t[i];
        double acc = 0.0;
        for (std::size_t q = 0; q < nodes.size(); ++q) {
            const double v = f(s.x, s.a, s.g, nodes[q]);
            if (!std::isfinite(v)) {
                throw EvaluationError("non-finite integrand at sample " + std::to_string(i) +
                                      ", node y=" + std::to_string(nodes[q]));
            }
            acc += w[q] * v;
        }
        per_sample[i] = acc;
    }
    double total = 0.0;
    for (double v : per_sample) {
        total += v;
    }
    return total / static_cast<double>(t.size());
}

double integrate_point_marginal(const PointFn& f, const Trajectory& t) {
    double total = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const auto& s = t[i];
        const double v = f(s.x, s.a, s.g, s.y);
        if (!std::isfinite(v)) {
            throw EvaluationError("non-finite value at sample " + std::to_string(i));
        }
        total += v;
    }
    return total / static_cast<double>(t.size());
}

std::vector<IndexWeight> conditional_measure_weights(const Trajectory& t, double a, double g,
                                                     double tolerance) {
    std::vector<IndexWeight> out;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (std::abs(t[i].a - a) <= tolerance && std::abs(t[i].g - g) <= tolerance) {
            out.push_back({i, 0.0});
        }
    }
    if (out.empty()) {
        throw EmptyConditional("no observed (a,g) matches (" + std::to_string(a) + ", " +
                               std::to_string(g) + ")");
    }
    const double w = 1.0 / static_cast<double>(out.size());
    for (auto& e : out) {
        e.weight = w;
    }
    return out;
}

std::vector<ControlContextAtom> control_context_marginal(const Trajectory& t, double tolerance) {
    std::vector<ControlContextAtom> atoms;
    std::vector<std::size_t> counts;
    for (const auto& s : t.samples()) {
        bool found = false;
        for (std::size_t k = 0; k < atoms.size(); ++k) {
            if (std::abs(atoms[k].a - s.a) <= tolerance && std::abs(atoms[k].g - s.g) <= tolerance) {
                ++counts[k];
                found = true;
                break;
            }
        }
        if (!found) {
            atoms.push_back({s.a, s.g, 0.0});
            counts.push_back(1);
        }
    }
    for (std::size_t k = 0; k < atoms.size(); ++k) {
        atoms[k].weight = static_cast<double>(counts[k]) / static_cast<double>(t.size());
    }
    return atoms;
}

Quadrature quadrature_for(const CandidateList& candidates) {
    int depth = 0;
    bool all_piecewise = true;
    for (const auto& c : candidates) {
        const auto d = c->y_dyadic_depth();
        if (d) {
            depth = std::max(depth, *d);
        } else {
            all_piecewise = false;
        }
    }
    if (all_piecewise) {
        return Quadrature::exact_piecewise(depth);
    }
    return Quadrature::refined_for(depth);
}

} // namespace tcmdp

#include "tcmdp/quadrature.hpp"

#include "tcmdp/error.hpp"

#include <cmath>
#include <string>

namespace tcmdp {

Quadrature Quadrature::midpoint(std::size_t k) {
    if (k == 0) {
        throw DomainError("midpoint quadrature needs at least one node");
    }
    std::vector<double> nodes(k), weights(k, 1.0 / static_cast<double>(k));
    for (std::size_t i = 0; i < k; ++i) {
        nodes[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(k);
    }
    Quadrature q(std::move(nodes), std::move(weights), QuadratureScheme::midpoint_composite);
    // a power-of-two midpoint rule is exact on the matching dyadic cells
    if ((k & (k - 1)) == 0) {
        q.exact_depth_ = static_cast<int>(std::lround(std::log2(static_cast<double>(k))));
    }
    return q;
}

Quadrature Quadrature::exact_piecewise(int depth) {
    if (depth < 0 || depth > 24) {
        throw DomainError("exact_piecewise depth out of range: " + std::to_string(depth));
    }
    Quadrature q = midpoint(std::size_t{1} << depth);
    q.scheme_ = QuadratureScheme::exact_piecewise;
    return q;
}

Quadrature Quadrature::refined_for(int depth) {
    return depth > 8 ? exact_piecewise(depth) : midpoint(256);
}

Quadrature::Quadrature(std::vector<double> nodes, std::vector<double> weights,
                       QuadratureScheme scheme)
    : nodes_(std::move(nodes)), weights_(std::move(weights)), scheme_(scheme) {
    if (nodes_.empty() || nodes_.size() != weights_.size()) {
        throw DomainError("quadrature needs equally many nodes and weights");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (!(nodes_[i] >= 0.0 && nodes_[i] <= 1.0) || !(weights_[i] >= 0.0)) {
            throw DomainError("quadrature node outside [0,1] or negative weight");
        }
        total += weights_[i];
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw DomainError("quadrature weights must sum to 1");
    }
}

double Quadrature::integrate(const std::function<double(double)>& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const double v = f(nodes_[i]);
        if (!std::isfinite(v)) {
            throw EvaluationError("non-finite integrand at node " + std::to_string(nodes_[i]));
        }
        s += weights_[i] * v;
    }
    return s;
}

std::size_t ProductQuadrature::size() const {
    return axes_[0].size() * axes_[1].size() * axes_[2].size() * axes_[3].size();
}

} // namespace tcmdp

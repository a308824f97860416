#include "tcmdp/density.hpp"

#include "tcmdp/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

namespace tcmdp {

void Density::eval_slice(double x, double a, double g, std::span<const double> ys,
                         std::span<double> out) const {
    for (std::size_t j = 0; j < ys.size(); ++j) {
        out[j] = eval(x, a, g, ys[j]);
    }
}

CandidateDensity::CandidateDensity(std::string label, std::size_t dim, double penalty)
    : label_(std::move(label)), dim_(dim), penalty_(penalty) {
    if (!(penalty_ > 0.0) || !std::isfinite(penalty_)) {
        throw DomainError("candidate '" + label_ + "' needs a positive penalty");
    }
}

FunctionDensity::FunctionDensity(std::string label, PointFn fn, std::size_t dim, double penalty,
                                 std::optional<int> y_depth)
    : CandidateDensity(std::move(label), dim, penalty), fn_(std::move(fn)), y_depth_(y_depth) {}

double FunctionDensity::eval(double x, double a, double g, double y) const {
    const double v = fn_(x, a, g, y);
    if (std::isnan(v)) {
        return v;
    }
    return std::clamp(v, 0.0, 1.0);
}

NormalisedDensity::NormalisedDensity(std::shared_ptr<const Density> base, std::vector<double> nodes,
                                     std::vector<double> weights)
    : base_(std::move(base)), nodes_(std::move(nodes)), weights_(std::move(weights)) {
    static std::atomic<std::uint64_t> next_id{1};
    id_ = next_id.fetch_add(1);
    if (!base_) {
        throw DomainError("NormalisedDensity needs a base density");
    }
    if (nodes_.empty() || nodes_.size() != weights_.size()) {
        throw DomainError("NormalisedDensity needs matching nonempty nodes and weights");
    }
}

double NormalisedDensity::eval(double x, double a, double g, double y) const {
    return base_->eval(x, a, g, y);
}

double NormalisedDensity::slice_mass(double x, double a, double g) const {
    double z = 0.0;
    for (std::size_t q = 0; q < nodes_.size(); ++q) {
        z += weights_[q] * base_->eval_kernel(x, a, g, nodes_[q]);
    }
    return z;
}

double NormalisedDensity::eval_kernel(double x, double a, double g, double y) const {
    // callers integrate one slice at a time; one cached mass per thread suffices
    struct Cache {
        std::uint64_t owner = 0;
        double x = 0.0, a = 0.0, g = 0.0, mass = 0.0;
    };
    thread_local Cache cache;
    if (cache.owner != id_ || cache.x != x || cache.a != a || cache.g != g) {
        const double z = slice_mass(x, a, g);
        if (!(z > 0.0) || !std::isfinite(z)) {
            throw EvaluationError("density has no mass over y at this state and control");
        }
        cache = {id_, x, a, g, z};
    }
    return base_->eval_kernel(x, a, g, y) / cache.mass;
}

CandidatePtr uniform_density(double penalty) {
    return std::make_shared<FunctionDensity>(
        "uniform", [](double, double, double, double) { return 1.0; }, 1, penalty, 0);
}

} // namespace tcmdp

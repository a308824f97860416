#pragma once

#include "tcmdp/density.hpp"
#include "tcmdp/quadrature.hpp"
#include "tcmdp/trajectory.hpp"

#include <cstddef>
#include <memory>
#include <utility>
#include <vector>

namespace tcmdp {

//! lambda_n: point masses at the observed (x, a, g) times Lebesgue in y,
//! with the y integral realised by a quadrature rule.
class EmpiricalMeasure {
public:
    explicit EmpiricalMeasure(std::shared_ptr<const Trajectory> base,
                              Quadrature quadrature = Quadrature::midpoint(256),
                              double match_tolerance = 1e-9);
    EmpiricalMeasure(const Trajectory& base, Quadrature quadrature = Quadrature::midpoint(256),
                     double match_tolerance = 1e-9);

    const Trajectory& trajectory() const { return *base_; }
    std::shared_ptr<const Trajectory> trajectory_ptr() const { return base_; }
    const Quadrature& quadrature() const { return quadrature_; }
    double match_tolerance() const { return match_tolerance_; }
    std::size_t n() const { return base_->size(); }

private:
    std::shared_ptr<const Trajectory> base_;
    Quadrature quadrature_;
    double match_tolerance_;
};

//! (1/n) sum_i int f(X_i, a_i, G_i, y) dy.
double integrate_lambda_n(const PointFn& f, const EmpiricalMeasure& m);

//! (1/n) sum_i f(X_i, a_i, G_i, X_{i+1}).
double integrate_point_marginal(const PointFn& f, const Trajectory& t);

struct IndexWeight {
    std::size_t index = 0;
    double weight = 0.0;
};

//! Uniform weights over samples whose (a_i, G_i) lies within tolerance of
//! (a, g) in both coordinates. Throws EmptyConditional when nothing matches.
std::vector<IndexWeight> conditional_measure_weights(const Trajectory& t, double a, double g,
                                                     double tolerance = 1e-9);

struct ControlContextAtom {
    double a = 0.0;
    double g = 0.0;
    double weight = 0.0;
};

//! lambda_n^(2): distinct observed (a, g) pairs with their empirical masses,
//! in order of first appearance.
std::vector<ControlContextAtom> control_context_marginal(const Trajectory& t,
                                                         double tolerance = 1e-9);

//! Quadrature exact for every candidate when all are piecewise constant in y,
//! otherwise the 256-node midpoint rule refined to the finest dyadic depth.
Quadrature quadrature_for(const CandidateList& candidates);

} // namespace tcmdp

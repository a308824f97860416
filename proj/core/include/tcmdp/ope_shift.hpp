#pragma once

#include "tcmdp/density.hpp"
#include "tcmdp/empirical_measure.hpp"
#include "tcmdp/quadrature.hpp"
#include "tcmdp/selector.hpp"
#include "tcmdp/trajectory.hpp"

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace tcmdp {

struct ControlWeight {
    double a = 0.0;
    double p = 1.0;
};

//! Stationary policy with discount and expected reward r_pi(x).
struct PolicySpec {
    //! Distribution over controls at (x, g); a deterministic policy returns one entry.
    std::function<std::vector<ControlWeight>(double x, double g)> policy;
    double beta = 0.9;
    std::function<double(double x)> reward;
    double reward_sup = 1.0;

    void validate() const;
};

PolicySpec constant_policy(double a, double beta, std::function<double(double)> reward,
                           double reward_sup);

//! State discretisation: k cell midpoints of [0, 1].
struct StateGrid {
    std::vector<double> nodes;

    static StateGrid uniform(std::size_t k = 64);
    std::size_t size() const { return nodes.size(); }
    //! Index of the cell containing x.
    std::size_t cell(double x) const;
};

struct TransitionOperator {
    Eigen::MatrixXd matrix;
    //! Row sums before renormalisation.
    std::vector<double> row_mass;
};

//! Row i is int int s(x_i, pi(x_i, g), g, y) over g ~ lambda_n^G and y on the
//! grid, using the kernel view of the density. Rows are renormalised to sum
//! to one when renormalise is set; a row with no mass becomes uniform.
TransitionOperator transition_operator(const Density& density, const PolicySpec& policy,
                                       const Trajectory& t, const StateGrid& grid,
                                       bool renormalise = true, unsigned jobs = 1);

struct ValueSolution {
    std::vector<double> grid;
    Eigen::VectorXd values;
    double residual = 0.0;

    //! Piecewise linear interpolation, flat beyond the end nodes.
    double at(double x) const;
};

//! Direct solve of (I - beta P) V = r. Throws NumericError when the residual
//! exceeds tolerance or beta is outside [0, 1).
ValueSolution solve_value(const TransitionOperator& op, const Eigen::VectorXd& reward,
                          double beta, double tolerance = 1e-9);

struct OpeBoundCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    double hellinger = 0.0;
    bool holds = false;
};

//! lhs = ||V - V_hat|| in L2 of the empirical state law of t,
//! rhs = 2 sqrt2 beta / (1 - beta)^2 * ||r||_inf * H^2(true, est).
OpeBoundCheck ope_error_bound_check(const Density& true_density, const Density& est_density,
                                    const PolicySpec& policy, const Trajectory& t,
                                    const StateGrid& grid, double slack = 1e-8, unsigned jobs = 1);

struct WeightedPoint {
    double x = 0.0;
    double a = 0.0;
    double g = 0.0;
    double weight = 0.0;
};

//! Empirical occupation of (x, a, g) along a trajectory, mass 1/m each.
std::vector<WeightedPoint> occupation_weights(const Trajectory& t);

//! sum_p w_p int (sqrt s0 - sqrt s_star)^2 (x_p, a_p, g_p, y) dy with the
//! kernel view of both densities. Throws DomainError for negative weights.
double hellinger_shift_gap(const Density& s0, const Density& s_star,
                           const std::vector<WeightedPoint>& weights,
                           const Quadrature& qy = Quadrature::midpoint(256));

//! Empirical law of the states over the grid cells.
std::vector<double> state_histogram(const Trajectory& t, const StateGrid& grid);

//! 0.5 sum |p - q|.
double tv_distance(std::span<const double> p, std::span<const double> q);

struct ShiftConfig {
    //! Constant C on the left of the bound; the statement leaves it unspecified.
    double constant = 0.25;
    double slack = 1e-10;
    StateGrid grid = StateGrid::uniform(64);
};

struct ShiftReport {
    std::string selected;
    double risk = 0.0;   // H^2(s_star, s_hat) on the test measure
    double oracle = 0.0; // min_f H^2(s0, f) + L pen(f)/n on the training measure
    double gap = 0.0;    // h(s_star)
    double tv = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
    //! (oracle + gap + tv) / risk, the largest C for which the bound holds.
    double implied_constant = 0.0;

    std::string to_json() const;
};

ShiftReport shift_risk_report(const Trajectory& train, const Trajectory& test,
                              const CandidateList& candidates, const SelectorConfig& cfg,
                              const Density& s0, const Density& s_star,
                              const ShiftConfig& shift = {});

} // namespace tcmdp

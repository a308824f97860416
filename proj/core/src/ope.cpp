#include "tcmdp/error.hpp"
#include "tcmdp/losses.hpp"
#include "tcmdp/ope_shift.hpp"
#include "tcmdp/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace tcmdp {

void PolicySpec::validate() const {
    if (!policy || !reward) {
        throw ConfigError("policy needs a control law and a reward");
    }
    if (!(beta >= 0.0 && beta < 1.0)) {
        throw ConfigError("discount must lie in [0, 1)");
    }
    if (!(reward_sup >= 0.0) || !std::isfinite(reward_sup)) {
        throw ConfigError("reward sup norm must be finite");
    }
}

PolicySpec constant_policy(double a, double beta, std::function<double(double)> reward,
                           double reward_sup) {
    PolicySpec p;
    p.policy = [a](double, double) { return std::vector<ControlWeight>{{a, 1.0}}; };
    p.beta = beta;
    p.reward = std::move(reward);
    p.reward_sup = reward_sup;
    return p;
}

StateGrid StateGrid::uniform(std::size_t k) {
    if (k == 0) {
        throw ConfigError("state grid needs at least one node");
    }
    StateGrid g;
    g.nodes.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        g.nodes[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(k);
    }
    return g;
}

std::size_t StateGrid::cell(double x) const {
    const auto k = nodes.size();
    const auto i = static_cast<std::size_t>(std::max(0.0, x) * static_cast<double>(k));
    return std::min(i, k - 1);
}

TransitionOperator transition_operator(const Density& density, const PolicySpec& policy,
                                       const Trajectory& t, const StateGrid& grid,
                                       bool renormalise, unsigned jobs) {
    policy.validate();
    std::map<double, double> contexts;
    for (const auto& s : t.samples()) {
        contexts[s.g] += 1.0 / static_cast<double>(t.size());
    }
    const auto k = static_cast<Eigen::Index>(grid.size());
    const double wy = 1.0 / static_cast<double>(k);
    TransitionOperator op;
    op.matrix = Eigen::MatrixXd::Zero(k, k);
    op.row_mass.assign(grid.size(), 0.0);
    parallel_for(grid.size(), jobs, [&](std::size_t i) {
        const double x = grid.nodes[i];
        Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(k);
        for (const auto& [g, pg] : contexts) {
            for (const auto& cw : policy.policy(x, g)) {
                for (Eigen::Index j = 0; j < k; ++j) {
                    const double v = density.eval_kernel(x, cw.a, g, grid.nodes[j]);
                    if (!std::isfinite(v) || v < 0.0) {
                        throw EvaluationError("invalid density value while building the operator");
                    }
                    row(j) += pg * cw.p * wy * v;
                }
            }
        }
        const double mass = row.sum();
        op.row_mass[i] = mass;
        if (renormalise) {
            if (mass > 0.0) {
                row /= mass;
            } else {
                row.setConstant(wy);
            }
        }
        op.matrix.row(static_cast<Eigen::Index>(i)) = row;
    });
    return op;
}

double ValueSolution::at(double x) const {
    if (grid.empty()) {
        throw DomainError("empty value solution");
    }
    if (x <= grid.front()) {
        return values(0);
    }
    if (x >= grid.back()) {
        return values(static_cast<Eigen::Index>(grid.size() - 1));
    }
    const auto it = std::upper_bound(grid.begin(), grid.end(), x);
    const auto hi = static_cast<Eigen::Index>(it - grid.begin());
    const auto lo = hi - 1;
    const double f = (x - grid[lo]) / (grid[hi] - grid[lo]);
    return (1.0 - f) * values(lo) + f * values(hi);
}

ValueSolution solve_value(const TransitionOperator& op, const Eigen::VectorXd& reward, double beta,
                          double tolerance) {
    if (!(beta >= 0.0 && beta < 1.0)) {
        throw DomainError("discount must lie in [0, 1)");
    }
    const auto k = op.matrix.rows();
    if (op.matrix.cols() != k || reward.size() != k) {
        throw DomainError("operator and reward sizes differ");
    }
    const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(k, k) - beta * op.matrix;
    ValueSolution sol;
    sol.values = a.partialPivLu().solve(reward);
    if (!sol.values.allFinite()) {
        throw NumericError("value solve produced non-finite values");
    }
    sol.residual = (sol.values - reward - beta * op.matrix * sol.values).cwiseAbs().maxCoeff();
    if (sol.residual > tolerance) {
        throw NumericError("value residual " + std::to_string(sol.residual) + " above tolerance");
    }
    return sol;
}

namespace {

ValueSolution value_for(const Density& d, const PolicySpec& policy, const Trajectory& t,
                        const StateGrid& grid, unsigned jobs) {
    const auto op = transition_operator(d, policy, t, grid, true, jobs);
    Eigen::VectorXd r(static_cast<Eigen::Index>(grid.size()));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        r(static_cast<Eigen::Index>(i)) = policy.reward(grid.nodes[i]);
    }
    auto sol = solve_value(op, r, policy.beta);
    sol.grid = grid.nodes;
    return sol;
}

} // namespace

OpeBoundCheck ope_error_bound_check(const Density& true_density, const Density& est_density,
                                    const PolicySpec& policy, const Trajectory& t,
                                    const StateGrid& grid, double slack, unsigned jobs) {
    policy.validate();
    const auto v = value_for(true_density, policy, t, grid, jobs);
    const auto vh = value_for(est_density, policy, t, grid, jobs);
    double acc = 0.0;
    for (const auto& s : t.samples()) {
        const double d = v.at(s.x) - vh.at(s.x);
        acc += d * d;
    }
    OpeBoundCheck out;
    out.lhs = std::sqrt(acc / static_cast<double>(t.size()));
    const int depth = est_density.y_dyadic_depth().value_or(0);
    const EmpiricalMeasure m(t, Quadrature::refined_for(depth));
    out.hellinger = hellinger_sq(true_density, est_density, m);
    const double b = policy.beta;
    out.rhs = 2.0 * std::sqrt(2.0) * b / ((1.0 - b) * (1.0 - b)) * policy.reward_sup * out.hellinger;
    out.holds = out.lhs <= out.rhs + slack;
    return out;
}

} // namespace tcmdp

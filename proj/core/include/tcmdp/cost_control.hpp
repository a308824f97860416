#pragma once

#include "tcmdp/density.hpp"
#include "tcmdp/empirical_measure.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace tcmdp {

//! Bounded nonnegative cost L(x, a, g, y) and the finite control grid.
struct CostSpec {
    std::string name;
    PointFn fn;
    double sup_norm = 1.0;
    std::vector<double> control_grid;

    //! Throws ConfigError for an empty grid, controls outside [0,1], or a
    //! probed value outside [0, sup_norm].
    void validate() const;
};

//! k evenly spaced controls i/(k-1) (k = 1 gives {0}).
std::vector<double> uniform_control_grid(std::size_t k = 64);

CostSpec constant_cost(double c, std::vector<double> grid = uniform_control_grid());
//! 1[y > threshold].
CostSpec threshold_cost(double threshold, std::vector<double> grid = uniform_control_grid());
//! (y - target)^2 + weight * a^2, bounded by 1 + weight.
CostSpec quadratic_cost(double target, double control_weight = 0.0,
                        std::vector<double> grid = uniform_control_grid());
//! Multilinear interpolation of a regular grid of values over (x, a, g, y).
//! CSV: header x,a,g,y,cost; the distinct coordinates of each column form the
//! axes and every combination must be present.
CostSpec table_cost(const std::string& csv_path, std::vector<double> grid = uniform_control_grid());

struct CostOptions {
    //! When (a, g) was never observed, integrate x over every observed state.
    bool fallback = false;
    double tolerance = 1e-9;
};

//! sum_i w_i int L(X_i, a, g, y) s(X_i, a, g, y) dy with w the conditional
//! weights of (a, g). Uses the kernel view of the density.
double empirical_cost(const Density& density, const CostSpec& cost, double a, double g,
                      const EmpiricalMeasure& m, const CostOptions& options = {});

struct ControlChoice {
    double a_hat = 0.0;
    double value = 0.0;
    //! Every grid control within 1e-12 of the minimum, in grid order.
    std::vector<double> ties;
    std::vector<double> values;
};

//! Grid argmin of empirical_cost; the first minimiser in grid order is returned.
ControlChoice select_control(const Density& density, const CostSpec& cost, double g,
                             const EmpiricalMeasure& m, const CostOptions& options = {},
                             unsigned jobs = 1);

//! int (C(a_hat(G), G) - C(a*(G), G)) d lambda_n^(2), with a_hat chosen by the
//! estimate and C, a* by the true density.
double regret(const Density& true_density, const Density& est_density, const CostSpec& cost,
              const EmpiricalMeasure& m, const CostOptions& options = {}, unsigned jobs = 1);

//! Finite-chain costs of the hard instance: for a path of states, the cost of
//! control l is (1/n) sum_i 1[x_i = d, y_i != d] M_l(x_i, y_i), with state d
//! the special state (0-based).
double minimax_cost(const std::vector<int>& path, const Eigen::MatrixXd& transition);

struct MinimaxChoice {
    int control = 2;
    double cost1 = 0.0;
    double cost2 = 0.0;
    bool tie = false;
};

//! Picks the control with the smaller minimax cost; a tie keeps control 2.
MinimaxChoice minimax_select_control(const std::vector<int>& path, const Eigen::MatrixXd& m1,
                                       const Eigen::MatrixXd& m2);

//! Number of transitions leaving the special state to a different state.
std::size_t minimax_events(const std::vector<int>& path, int special_state);

//! Regret of choosing control 1 when control 2 is optimal, divided by the
//! number of events per sample.
double minimax_regret_per_mistake(const std::vector<int>& path, const Eigen::MatrixXd& m1,
                                   const Eigen::MatrixXd& m2);

} // namespace tcmdp

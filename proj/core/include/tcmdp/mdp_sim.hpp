#pragma once

#include "tcmdp/density.hpp"
#include "tcmdp/stats.hpp"
#include "tcmdp/trajectory.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

namespace tcmdp {

enum class ModelKind { model_i, model_ii, model_iii, custom };
enum class ControlRole { noise, exogenous };

//! lambda(x) = scale * sigmoid(slope (x - center)) + offset.
struct NoiseSpec {
    double scale = 0.05;
    double slope = 4.0;
    double center = 0.5;
    double offset = 0.01;

    double variance(double x) const;
    double max_variance() const { return scale + offset; }
    void validate() const;
};

struct ContextLaw {
    enum class Kind { uniform, grid, constant };
    Kind kind = Kind::uniform;
    //! Support for the grid law (uniform over the values).
    std::vector<double> values;
    //! Value of the constant law.
    double value = 0.0;

    double sample(Rng& rng) const;
    void validate() const;
};

struct SimModel {
    ModelKind kind = ModelKind::model_i;
    NoiseSpec noise;
    ContextLaw context;
    //! noise: the logged control is the realised W_k (clipped), the kernel
    //! ignores it. exogenous: a_k is drawn from behavior_controls and shifts
    //! the mean by control_gain * (a_k - 0.5).
    ControlRole control_role = ControlRole::noise;
    std::vector<double> behavior_controls{0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0};
    double control_gain = 0.5;
    double x0 = 0.5;
    bool clip = true;
    //! Mean for ModelKind::custom, as a function of (x, a, g).
    std::function<double(double, double, double)> custom_mean;

    //! Conditional mean of the next state before clipping.
    double mean(double x, double a, double g) const;
    void validate() const;
};

//! X_{k+1} = mean(X_k, a_k, U_k) + W_k with W_k ~ N(0, lambda(X_k)),
//! clipped to [0, 1]. Same seed gives the same trajectory.
Trajectory simulate(const SimModel& model, std::size_t n, std::uint64_t seed);

//! Gaussian transition density of a SimModel.
//! eval clips the value to [0, 1] for candidate comparisons, eval_kernel is
//! the unclipped Gaussian density, and the mass beyond [0, 1] sits in the
//! boundary atoms.
class TrueDensity : public CandidateDensity {
public:
    explicit TrueDensity(SimModel model);

    double eval(double x, double a, double g, double y) const override;
    double eval_kernel(double x, double a, double g, double y) const override;
    void eval_slice(double x, double a, double g, std::span<const double> ys,
                    std::span<double> out) const override;
    //! P(X_{k+1} <= 0) and P(X_{k+1} >= 1) before clipping.
    double lower_atom(double x, double a, double g) const;
    double upper_atom(double x, double a, double g) const;
    const SimModel& model() const { return model_; }

private:
    SimModel model_;
};

std::shared_ptr<const TrueDensity> true_density(const SimModel& model);

//! Markov chain with next state drawn from density(x, a, g, .) by rejection
//! against the constant envelope, controls from control(x, g, rng) and
//! contexts from the law. density must be bounded by envelope on [0, 1].
Trajectory simulate_by_rejection(const Density& density, double envelope, std::size_t n,
                                 std::uint64_t seed, double x0, const ContextLaw& context,
                                 const std::function<double(double, double, Rng&)>& control);

//! Training log from model and test log from shift, on split seed streams.
std::pair<Trajectory, Trajectory> simulate_shifted(const SimModel& model, const SimModel& shift,
                                                   std::size_t n, std::size_t m,
                                                   std::uint64_t seed);

//! Finite-chain family with d + 1 states; state d (0-based) is the special one.
struct MinimaxInstance {
    int d = 2;
    double p_star1 = 0.05;
    double epsilon = 0.02;
    std::vector<int> sigma{1};

    double p_star2() const { return p_star1 + 15.0 * epsilon / d; }
    double p_star(int control) const { return control == 1 ? p_star1 : p_star2(); }
    //! Throws DomainError when any stated condition fails.
    void validate() const;
};

//! Rows 0..d-1 are (p, ..., p, p_star) with p = (1 - p_star)/d; the last
//! row is (eta, p_star).
Eigen::MatrixXd minimax_matrix(int d, double p_star, const std::vector<double>& eta);

//! Control 1 uses the sigma-perturbed eta, control 2 the uniform eta.
Eigen::MatrixXd minimax_instance(const MinimaxInstance& inst, int control);
//! Both controls with the uniform eta (the unperturbed truth).
Eigen::MatrixXd minimax_null(const MinimaxInstance& inst, int control);
//! The eta vector of control 1 (length d).
std::vector<double> minimax_eta(const MinimaxInstance& inst, int control);

//! pi_k = (1 - p_star)^2/d + eta_k p_star, pi_{d+1} = p_star.
Eigen::VectorXd minimax_stationary(int d, double p_star, const std::vector<double>& eta);

//! Left eigenvector of a row-stochastic matrix with eigenvalue 1, normalised.
Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& transition);

//! Path of n + 1 states started from the first row's distribution.
std::vector<int> simulate_finite_chain(const Eigen::MatrixXd& transition, std::size_t n,
                                       std::uint64_t seed);

} // namespace tcmdp

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tcmdp {

using PointFn = std::function<double(double x, double a, double g, double y)>;

//! Transition density s(x, a, g, y) evaluated against Lebesgue measure in y.
class Density {
public:
    virtual ~Density() = default;

    //! Value used for comparisons between candidates; lies in [0, 1].
    virtual double eval(double x, double a, double g, double y) const = 0;

    //! Value used when the density acts as a Markov kernel. Defaults to eval;
    //! densities that clip for comparison purposes return the unclipped value.
    virtual double eval_kernel(double x, double a, double g, double y) const {
        return eval(x, a, g, y);
    }

    //! eval at fixed (x, a, g) for every y in ys.
    virtual void eval_slice(double x, double a, double g, std::span<const double> ys,
                            std::span<double> out) const;

    //! If the density is constant in y on dyadic cells of some depth, that depth.
    virtual std::optional<int> y_dyadic_depth() const { return std::nullopt; }
};

//! A member of the candidate class with its dimension and penalty.
class CandidateDensity : public Density {
public:
    //! Throws DomainError unless penalty > 0.
    CandidateDensity(std::string label, std::size_t dim, double penalty);

    const std::string& label() const { return label_; }
    std::size_t dim() const { return dim_; }
    double penalty() const { return penalty_; }

private:
    std::string label_;
    std::size_t dim_;
    double penalty_;
};

using CandidatePtr = std::shared_ptr<const CandidateDensity>;
using CandidateList = std::vector<CandidatePtr>;

//! Candidate wrapping an arbitrary callable, clipped into [0, 1].
class FunctionDensity : public CandidateDensity {
public:
    FunctionDensity(std::string label, PointFn fn, std::size_t dim = 1, double penalty = 1.0,
                    std::optional<int> y_depth = std::nullopt);

    double eval(double x, double a, double g, double y) const override;
    std::optional<int> y_dyadic_depth() const override { return y_depth_; }

private:
    PointFn fn_;
    std::optional<int> y_depth_;
};

//! Kernel view of a density divided by its mass over y at each (x, a, g).
//! eval is passed through unchanged. Slice masses come from the given
//! quadrature nodes; a slice with zero mass throws EvaluationError.
class NormalisedDensity : public Density {
public:
    NormalisedDensity(std::shared_ptr<const Density> base, std::vector<double> nodes,
                      std::vector<double> weights);

    double eval(double x, double a, double g, double y) const override;
    double eval_kernel(double x, double a, double g, double y) const override;
    std::optional<int> y_dyadic_depth() const override { return base_->y_dyadic_depth(); }

    //! Kernel mass of the base density over y at (x, a, g).
    double slice_mass(double x, double a, double g) const;

private:
    std::shared_ptr<const Density> base_;
    std::vector<double> nodes_;
    std::vector<double> weights_;
    std::uint64_t id_;
};

//! The constant density 1 on [0,1]^4.
CandidatePtr uniform_density(double penalty = 1.0);

} // namespace tcmdp

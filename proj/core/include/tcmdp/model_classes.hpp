#pragma once

#include "tcmdp/density.hpp"
#include "tcmdp/trajectory.hpp"

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace tcmdp {

//! Uniform dyadic grid with per-axis depths over (x, a, g, y).
struct DyadicPartition {
    int dx = 0;
    int da = 0;
    int dg = 0;
    int dy = 0;

    int total_depth() const { return dx + da + dg + dy; }
    std::size_t cell_count() const { return std::size_t{1} << total_depth(); }
    std::size_t slab_count() const { return std::size_t{1} << (dx + da + dg); }
    //! Index of the (x, a, g) slab containing the point.
    std::size_t slab(double x, double a, double g) const;
    //! Index of the y cell within a slab.
    std::size_t y_cell(double y) const;
    std::string label() const;
    //! Throws DomainError for negative depths or more than 2^40 cells.
    void validate() const;
};

//! Cell index of v in [0,1] at the given dyadic depth; v = 1 maps to the last cell.
std::size_t dyadic_index(double v, int depth);

//! Penalty |m| - log(3)/2 of a histogram with |m| cells.
double histogram_penalty(std::size_t cells);
//! Penalty l + log(2/(e-2)) of the degree-l spline model.
double spline_penalty(int degree);

//! Piecewise constant density on a DyadicPartition.
class HistogramDensity : public CandidateDensity {
public:
    //! heights are indexed slab * 2^dy + y_cell and must lie in [0, 1].
    HistogramDensity(DyadicPartition partition, std::vector<double> heights);

    const DyadicPartition& partition() const { return partition_; }
    const std::vector<double>& heights() const { return heights_; }

    double eval(double x, double a, double g, double y) const override;
    void eval_slice(double x, double a, double g, std::span<const double> ys,
                    std::span<double> out) const override;
    std::optional<int> y_dyadic_depth() const override { return partition_.dy; }

private:
    DyadicPartition partition_;
    std::vector<double> heights_;
};

//! Empirical conditional frequencies per (x, a, g) slab, uniform profile
//! on empty slabs, heights clipped to [1/n, 1]. Throws CellBudgetError when
//! the partition has more than cell_budget cells.
HistogramDensity fit_histogram(const Trajectory& t, const DyadicPartition& p,
                               std::size_t cell_budget = std::size_t{1} << 22);

//! Orthonormal shifted Legendre polynomials on [0,1]: out[k] = sqrt(2k+1) P_k(2t-1).
void shifted_legendre(double t, int degree, std::span<double> out);

struct SplineOptions {
    //! Which of (x, a, g) enter the context part of the basis.
    std::array<bool, 3> context_axes{true, true, true};
    //! Maximum total degree in the context variables; negative means no cap.
    int context_degree_cap = -1;
    //! Ridge added to the empirical Gram matrix.
    double ridge = 1e-6;
    //! Evaluation is clipped to [floor, 1].
    double floor = 1e-6;
    //! Half-width of the triangular smoothing kernel in y.
    double kernel_halfwidth = 1.0 / 128.0;
    //! Drop samples sitting exactly on y = 0 or y = 1 (clipping atoms).
    bool exclude_boundary_atoms = true;
    int max_degree = 20;
};

//! Tensor polynomial density sum_k P_k(y) sum_j c_{k,j} A_j(context),
//! clipped to [floor, 1].
class SplineDensity : public CandidateDensity {
public:
    struct Term {
        std::array<int, 3> context_degrees{0, 0, 0};
        int y_degree = 0;
        double coefficient = 0.0;
    };

    SplineDensity(int degree, std::vector<Term> terms, SplineOptions options);

    int degree() const { return degree_; }
    const std::vector<Term>& terms() const { return terms_; }

    //! Unclipped polynomial value.
    double raw(double x, double a, double g, double y) const;
    double eval(double x, double a, double g, double y) const override;
    void eval_slice(double x, double a, double g, std::span<const double> ys,
                    std::span<double> out) const override;

private:
    void y_profile(double x, double a, double g, std::vector<double>& by_y_degree) const;

    int degree_;
    std::vector<Term> terms_;
    SplineOptions options_;
};

//! Context multi-indices admitted for a given total degree and options.
std::vector<std::array<int, 3>> spline_context_indices(int degree, const SplineOptions& options);

//! int P_k(y) K(y, center) dy for k = 0..degree, with K the triangular kernel
//! renormalised to its mass inside [0, 1].
std::vector<double> kernel_moments(double center, int degree, double halfwidth);

//! Least-squares projection onto the degree-l basis under lambda_n, with the
//! next states smoothed by the triangular kernel.
SplineDensity fit_spline(const Trajectory& t, int degree, const SplineOptions& options = {});

struct DepthRange {
    int lo = 0;
    int hi = 0;
};

struct ClassConfig {
    bool histograms = true;
    DepthRange x{0, 0};
    DepthRange a{0, 0};
    DepthRange g{0, 0};
    DepthRange y{0, 0};
    //! Only keep depth vectors with dx == dg.
    bool tie_xg = false;
    std::size_t cell_budget = std::size_t{1} << 22;

    bool splines = false;
    DepthRange degree{1, 1};
    SplineOptions spline;
};

//! Depth vectors admitted by the histogram part of the config.
std::vector<DyadicPartition> histogram_partitions(const ClassConfig& config);

//! One fitted histogram per admissible depth vector, then one spline per
//! degree. Throws ConfigError when the config admits nothing.
CandidateList enumerate_candidates(const Trajectory& t, const ClassConfig& config,
                                   unsigned jobs = 1);

enum class PenaltyClass { dyadic, spline };

//! Partial sums of exp(-penalty) over the class, for truncation levels
//! 1..horizon. The dyadic class is the recursive 16-way refinement family,
//! truncated by number of refinements; the spline class counts 2^l models of degree l.
std::vector<double> check_penalty_summability(PenaltyClass cls, int horizon);

//! Running sums of exp(-penalty) in the given order.
std::vector<double> penalty_partial_sums(std::span<const double> penalties);

} // namespace tcmdp

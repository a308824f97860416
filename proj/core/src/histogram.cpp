#include "tcmdp/error.hpp"
#include "tcmdp/model_classes.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tcmdp {

std::size_t dyadic_index(double v, int depth) {
    const std::size_t cells = std::size_t{1} << depth;
    if (!(v > 0.0)) {
        return 0;
    }
    const auto i = static_cast<std::size_t>(v * static_cast<double>(cells));
    return std::min(i, cells - 1);
}

std::size_t DyadicPartition::slab(double x, double a, double g) const {
    return ((dyadic_index(x, dx) << da | dyadic_index(a, da)) << dg) | dyadic_index(g, dg);
}

std::size_t DyadicPartition::y_cell(double y) const { return dyadic_index(y, dy); }

std::string DyadicPartition::label() const {
    std::ostringstream os;
    os << "hist(" << dx << ',' << da << ',' << dg << ',' << dy << ')';
    return os.str();
}

void DyadicPartition::validate() const {
    if (dx < 0 || da < 0 || dg < 0 || dy < 0) {
        throw DomainError("dyadic depths must be nonnegative");
    }
    if (total_depth() > 40) {
        throw DomainError("dyadic partition with more than 2^40 cells");
    }
}

double histogram_penalty(std::size_t cells) {
    return static_cast<double>(cells) - 0.5 * std::log(3.0);
}

double spline_penalty(int degree) {
    return static_cast<double>(degree) + std::log(2.0 / (std::exp(1.0) - 2.0));
}

namespace {

std::size_t checked_cells(const DyadicPartition& p) {
    p.validate();
    return p.cell_count();
}

} // namespace

HistogramDensity::HistogramDensity(DyadicPartition partition, std::vector<double> heights)
    : CandidateDensity(partition.label(), checked_cells(partition),
                       histogram_penalty(partition.cell_count())),
      partition_(partition), heights_(std::move(heights)) {
    if (heights_.size() != partition_.cell_count()) {
        throw DomainError("histogram needs one height per cell");
    }
    for (double h : heights_) {
        if (!(h >= 0.0 && h <= 1.0)) {
            throw DomainError("histogram heights must lie in [0,1]");
        }
    }
}

double HistogramDensity::eval(double x, double a, double g, double y) const {
    return heights_[(partition_.slab(x, a, g) << partition_.dy) | partition_.y_cell(y)];
}

void HistogramDensity::eval_slice(double x, double a, double g, std::span<const double> ys,
                                  std::span<double> out) const {
    const double* row = heights_.data() + (partition_.slab(x, a, g) << partition_.dy);
    for (std::size_t j = 0; j < ys.size(); ++j) {
        out[j] = row[partition_.y_cell(ys[j])];
    }
}

HistogramDensity fit_histogram(const Trajectory& t, const DyadicPartition& p,
                               std::size_t cell_budget) {
    p.validate();
    if (p.cell_count() > cell_budget) {
        throw CellBudgetError(p.label() + " has " + std::to_string(p.cell_count()) +
                              " cells, budget is " + std::to_string(cell_budget));
    }
    const std::size_t ny = std::size_t{1} << p.dy;
    std::vector<double> counts(p.cell_count(), 0.0);
    std::vector<double> totals(p.slab_count(), 0.0);
    for (const auto& s : t.samples()) {
        const std::size_t slab = p.slab(s.x, s.a, s.g);
        counts[slab * ny + p.y_cell(s.y)] += 1.0;
        totals[slab] += 1.0;
    }
    const double floor = 1.0 / static_cast<double>(t.size());
    const double width = static_cast<double>(ny);
    std::vector<double> heights(p.cell_count());
    for (std::size_t slab = 0; slab < p.slab_count(); ++slab) {
        for (std::size_t j = 0; j < ny; ++j) {
            const double h =
                totals[slab] > 0.0 ? counts[slab * ny + j] / totals[slab] * width : 1.0;
            heights[slab * ny + j] = std::clamp(h, floor, 1.0);
        }
    }
    return HistogramDensity(p, std::move(heights));
}

} // namespace tcmdp

#include "tcmdp/error.hpp"
#include "tcmdp/model_classes.hpp"
#include "tcmdp/parallel.hpp"

#include <cmath>

namespace tcmdp {

namespace {

void check_range(const DepthRange& r, const char* name) {
    if (r.lo < 0 || r.hi < r.lo) {
        throw ConfigError(std::string("invalid range for ") + name + ": [" +
                          std::to_string(r.lo) + ", " + std::to_string(r.hi) + "]");
    }
}

} // namespace

std::vector<DyadicPartition> histogram_partitions(const ClassConfig& config) {
    std::vector<DyadicPartition> out;
    if (!config.histograms) {
        return out;
    }
    check_range(config.x, "x depth");
    check_range(config.a, "a depth");
    check_range(config.g, "g depth");
    check_range(config.y, "y depth");
    for (int dx = config.x.lo; dx <= config.x.hi; ++dx) {
        for (int da = config.a.lo; da <= config.a.hi; ++da) {
            for (int dg = config.g.lo; dg <= config.g.hi; ++dg) {
                if (config.tie_xg && dg != dx) {
                    continue;
                }
                for (int dy = config.y.lo; dy <= config.y.hi; ++dy) {
                    out.push_back({dx, da, dg, dy});
                }
            }
        }
    }
    return out;
}

CandidateList enumerate_candidates(const Trajectory& t, const ClassConfig& config, unsigned jobs) {
    const auto parts = histogram_partitions(config);
    std::vector<int> degrees;
    if (config.splines) {
        check_range(config.degree, "spline degree");
        for (int d = config.degree.lo; d <= config.degree.hi; ++d) {
            degrees.push_back(d);
        }
    }
    if (parts.empty() && degrees.empty()) {
        throw ConfigError("class config admits no candidates");
    }
    for (const auto& p : parts) {
        p.validate();
        if (p.cell_count() > config.cell_budget) {
            throw CellBudgetError(p.label() + " exceeds the cell budget");
        }
    }
    CandidateList out(parts.size() + degrees.size());
    parallel_for(out.size(), jobs, [&](std::size_t i) {
        if (i < parts.size()) {
            out[i] = std::make_shared<HistogramDensity>(fit_histogram(t, parts[i], config.cell_budget));
        } else {
            out[i] = std::make_shared<SplineDensity>(
                fit_spline(t, degrees[i - parts.size()], config.spline));
        }
    });
    return out;
}

std::vector<double> penalty_partial_sums(std::span<const double> penalties) {
    std::vector<double> out;
    out.reserve(penalties.size());
    double s = 0.0;
    for (double p : penalties) {
        s += std::exp(-p);
        out.push_back(s);
    }
    return out;
}

std::vector<double> check_penalty_summability(PenaltyClass cls, int horizon) {
    if (horizon < 1) {
        throw DomainError("summability horizon must be >= 1");
    }
    std::vector<double> out;
    out.reserve(horizon);
    double s = 0.0;
    if (cls == PenaltyClass::dyadic) {
        // partitions reachable with j refinements, each splitting one cell
        // into 16, are counted by the Fuss-Catalan number C(16j, j)/(15j+1)
        // and have 1 + 15j cells
        auto term = [](int j) {
            const double jj = j;
            const double log_count = std::lgamma(16.0 * jj + 1.0) - std::lgamma(jj + 1.0) -
                                     std::lgamma(15.0 * jj + 1.0) - std::log(15.0 * jj + 1.0);
            return std::exp(log_count - histogram_penalty(1 + 15 * static_cast<std::size_t>(j)));
        };
        s = term(0);
        for (int h = 1; h <= horizon; ++h) {
            s += term(h);
            out.push_back(s);
        }
    } else {
        for (int l = 1; l <= horizon; ++l) {
            s += std::exp(l * std::log(2.0) - spline_penalty(l));
            out.push_back(s);
        }
    }
    return out;
}

} // namespace tcmdp

#include "tcmdp/stats.hpp"

#include "tcmdp/error.hpp"

#include <cmath>

namespace tcmdp {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return mix(mix(seed) ^ (stream * 0xd1342543de82ef95ULL + 1));
}

double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 16) {
        double s = 0.0;
        for (double v : values) {
            s += v;
        }
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double mean(std::span<const double> values) {
    if (values.empty()) {
        throw DomainError("mean of an empty range");
    }
    return pairwise_sum(values) / static_cast<double>(values.size());
}

LineFit linear_fit(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2) {
        throw DomainError("linear_fit needs two equally sized ranges of length >= 2");
    }
    const double mx = mean(xs);
    const double my = mean(ys);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx <= 0.0) {
        throw DomainError("linear_fit: xs are all equal");
    }
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return fit;
}

LineFit loglog_fit(std::span<const double> xs, std::span<const double> ys) {
    std::vector<double> lx, ly;
    lx.reserve(xs.size());
    ly.reserve(ys.size());
    for (std::size_t i = 0; i < xs.size() && i < ys.size(); ++i) {
        if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) {
            throw DomainError("loglog_fit needs positive values");
        }
        lx.push_back(std::log(xs[i]));
        ly.push_back(std::log(ys[i]));
    }
    if (xs.size() != ys.size()) {
        throw DomainError("loglog_fit: size mismatch");
    }
    return linear_fit(lx, ly);
}

} // namespace tcmdp

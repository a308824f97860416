#pragma once

#include "tcmdp/model_classes.hpp"
#include "tcmdp/stats.hpp"
#include "tcmdp/trajectory.hpp"

#include <memory>
#include <random>
#include <vector>

namespace tcmdp::test {

inline Trajectory random_trajectory(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Transition> s;
    for (std::size_t i = 0; i < n; ++i) {
        s.push_back({u(rng), u(rng), u(rng), u(rng)});
    }
    return Trajectory(std::move(s));
}

//! Random histogram with heights in [lo, 1] on the given partition.
inline std::shared_ptr<HistogramDensity> random_histogram(const DyadicPartition& p, Rng& rng,
                                                          double lo = 0.01) {
    std::uniform_real_distribution<double> u(lo, 1.0);
    std::vector<double> h(p.cell_count());
    for (auto& v : h) {
        v = u(rng);
    }
    return std::make_shared<HistogramDensity>(p, std::move(h));
}

//! Random partition with each depth in [0, max_depth].
inline DyadicPartition random_partition(Rng& rng, int max_depth = 2) {
    std::uniform_int_distribution<int> d(0, max_depth);
    return {d(rng), d(rng), d(rng), d(rng)};
}

} // namespace tcmdp::test

#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace tcmdp {

using Rng = std::mt19937_64;

//! Deterministic stream seed for (seed, stream) built from splitmix64.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

//! Pairwise (cascade) summation; result is independent of evaluation order.
double pairwise_sum(std::span<const double> values);
double mean(std::span<const double> values);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

//! Ordinary least squares of ys on xs.
LineFit linear_fit(std::span<const double> xs, std::span<const double> ys);
//! Least squares of log(ys) on log(xs); all values must be positive.
LineFit loglog_fit(std::span<const double> xs, std::span<const double> ys);

} // namespace tcmdp

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hurstlab/core.hpp"
#include "hurstlab/random.hpp"

namespace hurstlab::synth {

struct FbmSpec {
    double h = 0.5;
    std::size_t length = 0;  // number of path samples N
    std::uint64_t seed = 0;
};

struct LevySpec {
    double alpha = 2.0;
    std::size_t length = 0;  // number of path samples N
    std::uint64_t seed = 0;
};

/// Autocovariance of unit-variance fractional Gaussian noise at lag k.
double fgn_autocovariance(double h, std::size_t lag);

/// `count` samples of unit-variance fractional Gaussian noise, drawn by
/// circulant embedding of the exact covariance on the next power of two.
std::vector<double> fgn_increments(double h, std::size_t count, Rng& rng);

/// N-sample fBm path starting at 0 (cumulative sum of N-1 fGn increments).
/// Throws DomainError unless 0 < h < 1 and N >= 2.
Profile generate_fbm(const FbmSpec& spec);

/// One symmetric standard alpha-stable variate (Chambers-Mallows-Stuck).
/// alpha == 2 gives N(0, 2); alpha == 1 gives a standard Cauchy variate.
double stable_variate(double alpha, Rng& rng);

std::vector<double> levy_increments(double alpha, std::size_t count, Rng& rng);

/// N-sample random walk with i.i.d. symmetric alpha-stable increments.
/// Throws DomainError unless 0 < alpha <= 2 and N >= 2.
Profile generate_levy(const LevySpec& spec);

/// Seed of ensemble member k under a master seed.
inline std::uint64_t member_seed(std::uint64_t master, std::uint64_t k) { return stream_seed(master, k); }

}  // namespace hurstlab::synth

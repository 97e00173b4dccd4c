#pragma once

#include <cstdint>
#include <vector>

#include "hurstlab/core.hpp"
#include "hurstlab/random.hpp"

namespace hurstlab::resample {

struct ShuffleSpec {
    std::size_t repeats = 5;
    std::uint64_t seed = 0;
};

/// In-place Fisher-Yates shuffle.
void shuffle_in_place(std::vector<double>& values, Rng& rng);

/// `spec.repeats` independent uniform permutations of the return values.
/// Repeat r draws from stream r of spec.seed. Timestamps stay in place and
/// crosses_day is cleared, since it no longer describes the permuted return.
std::vector<ReturnSeries> shuffle_returns(const ReturnSeries& returns, const ShuffleSpec& spec);

/// Keeps the sign of every return and replaces its magnitude by |g| with g a
/// fresh standard normal. Zero returns stay zero.
ReturnSeries gaussian_surrogate(const ReturnSeries& returns, std::uint64_t seed);

/// Sign-preserving Gaussian magnitudes for raw increments.
std::vector<double> gaussian_surrogate(const std::vector<double>& increments, Rng& rng);

/// Drops every return flagged crosses_day, preserving order.
ReturnSeries remove_eod_returns(const ReturnSeries& returns);

}  // namespace hurstlab::resample

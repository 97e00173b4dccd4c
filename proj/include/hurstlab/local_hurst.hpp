#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "hurstlab/core.hpp"

namespace hurstlab::local_hurst {

/// Shortest window accepted; below this the estimate is dominated by noise.
inline constexpr std::size_t kMinWindow = 512;

struct RollingConfig {
    std::size_t window = 8192;  // L, samples
    std::size_t shift = 10;     // delta t, samples
    int degree = 2;
    std::optional<std::size_t> tau_min;  // default grid bounds for N = window
    std::optional<std::size_t> tau_max;

    void validate() const;
};

struct LocalHurstSample {
    std::size_t t_index = 0;  // index of the last sample in the window
    std::optional<Timestamp> timestamp;
    double h = 0.0;
    double fit_stderr = 0.0;
};

struct LocalHurstSeries {
    std::vector<LocalHurstSample> samples;
    std::size_t window = 0;
    std::size_t shift = 0;

    std::vector<double> values() const;
};

/// Number of windows for a series of n samples: floor((n - L) / shift) + 1.
std::size_t window_count(std::size_t n, const RollingConfig& config);

/// H_L(t) for t = L-1, L-1+shift, ... <= N-1. Each sample is DFA-p over the
/// L samples ending at t, using the default tau grid for N = L. Windows run
/// in parallel; the result does not depend on the worker count.
/// `timestamps`, when non-empty, must have one entry per profile sample.
LocalHurstSeries rolling_hurst(const Profile& profile, const RollingConfig& config,
                               std::span<const Timestamp> timestamps = {});

}  // namespace hurstlab::local_hurst

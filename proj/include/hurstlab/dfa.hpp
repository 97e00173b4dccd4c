#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "hurstlab/core.hpp"

namespace hurstlab::dfa {

/// Inclusive bounds on box sizes, either for building a grid or for
/// restricting the scaling fit.
struct TauRange {
    std::size_t min = 0;
    std::size_t max = 0;
};

struct DfaConfig {
    int degree = 2;
    std::vector<std::size_t> taus;
    std::optional<TauRange> fit_range;

    /// Throws ConfigError unless taus is non-empty, strictly increasing, every
    /// tau >= degree + 2 and max(taus) <= n / 4.
    void validate(std::size_t n) const;
};

struct FluctuationPoint {
    std::size_t tau = 0;
    double mean_fluct = 0.0;
    std::size_t boxes_used = 0;
    bool in_fit = false;
};

struct FluctuationCurve {
    std::vector<FluctuationPoint> points;
    double hurst = 0.0;
    double fit_stderr = 0.0;
    double fit_r2 = 0.0;
};

/// Smallest tau of the default grid: max(p + 2, 16) for n >= 256 samples,
/// max(p + 2, 8) for shorter series.
std::size_t default_tau_min(std::size_t n, int degree);

/// Geometric grid with ratio 2^(1/4) from range.min to range.max, rounded to
/// integers and deduplicated. range.max is always the last element.
std::vector<std::size_t> geometric_taus(TauRange range);

/// Default grid for a series of n samples: [default_tau_min, floor(n/4)],
/// with either end overridable.
std::vector<std::size_t> default_taus(std::size_t n, int degree,
                                      std::optional<std::size_t> tau_min = std::nullopt,
                                      std::optional<std::size_t> tau_max = std::nullopt);

/// Detrended RMS fluctuation of each of the floor(N/tau) non-overlapping boxes,
/// measured from the start of the profile. Trailing N mod tau samples are
/// ignored.
std::vector<double> box_fluctuation(std::span<const double> profile, std::size_t tau, int degree);
std::vector<double> box_fluctuation(const Profile& profile, std::size_t tau, int degree);

/// Fits H on already-computed points: OLS slope of ln(mean_fluct) against
/// ln(tau) over points inside fit_range whose mean_fluct is nonzero. Marks
/// in_fit on the points used. Throws EstimationError with fewer than 3.
FluctuationCurve fit_curve(std::vector<FluctuationPoint> points,
                           std::optional<TauRange> fit_range = std::nullopt);

FluctuationCurve fluctuation_curve(std::span<const double> profile, const DfaConfig& config);
FluctuationCurve fluctuation_curve(const Profile& profile, const DfaConfig& config);

/// Minimum series length accepted by estimate_hurst.
inline constexpr std::size_t kMinEstimateLength = 64;

/// DFA-p with the default tau grid. Throws EstimationError("series too short")
/// below kMinEstimateLength samples.
FluctuationCurve estimate_hurst(std::span<const double> profile, int degree,
                                std::optional<std::size_t> tau_min = std::nullopt,
                                std::optional<std::size_t> tau_max = std::nullopt);
FluctuationCurve estimate_hurst(const Profile& profile, int degree);

}  // namespace hurstlab::dfa

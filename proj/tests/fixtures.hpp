#pragma once

// Synthetic inputs shared by the unit tests and the acceptance binary.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "hurstlab/core.hpp"
#include "hurstlab/random.hpp"
#include "hurstlab/synth.hpp"

namespace fixture {

/// Running sum starting at 0.
inline std::vector<double> cumulate(const std::vector<double>& inc) {
    std::vector<double> x(inc.size() + 1, 0.0);
    std::partial_sum(inc.begin(), inc.end(), x.begin() + 1);
    return x;
}

inline std::vector<double> gaussian_increments(std::size_t n, std::uint64_t seed) {
    hurstlab::Rng rng(seed);
    std::vector<double> v(n);
    for (auto& x : v) x = rng.normal();
    return v;
}

/// Symmetric alpha-stable increments clipped to [-cap, cap]. The clipped law
/// has finite variance, so its walk is diffusive at large scales.
inline std::vector<double> winsorized_levy(double alpha, double cap, std::size_t n, std::uint64_t seed) {
    hurstlab::Rng rng(seed);
    auto v = hurstlab::synth::levy_increments(alpha, n, rng);
    for (auto& x : v) x = std::clamp(x, -cap, cap);
    return v;
}

/// Prices exp(x0 + scale * cumsum(inc)) on a minute grid. With bars_per_day
/// > 0 each day holds that many bars and the next day starts 1440 minutes
/// after the previous one.
inline hurstlab::PriceSeries prices_from_increments(const std::vector<double>& inc, double scale,
                                                    std::size_t bars_per_day = 0) {
    const auto t0 = hurstlab::parse_timestamp("2003-01-02T09:30");
    std::vector<hurstlab::PriceObservation> obs;
    obs.reserve(inc.size() + 1);
    double logp = std::log(100.0);
    for (std::size_t k = 0; k <= inc.size(); ++k) {
        if (k > 0) logp += scale * inc[k - 1];
        std::int64_t minute = static_cast<std::int64_t>(k);
        if (bars_per_day > 0) {
            minute = static_cast<std::int64_t>(k / bars_per_day) * 1440 + static_cast<std::int64_t>(k % bars_per_day);
        }
        obs.push_back({hurstlab::Timestamp{t0.minutes + minute}, std::exp(logp)});
    }
    return hurstlab::PriceSeries(std::move(obs));
}

}  // namespace fixture

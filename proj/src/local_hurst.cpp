#include "hurstlab/local_hurst.hpp"

#include <string>

#include "hurstlab/dfa.hpp"
#include "hurstlab/parallel.hpp"

namespace hurstlab::local_hurst {

void RollingConfig::validate() const {
    if (window < kMinWindow) {
        throw ConfigError("window " + std::to_string(window) + " is below the minimum of " +
                          std::to_string(kMinWindow));
    }
    if (shift < 1) throw ConfigError("shift must be at least 1");
    if (degree < 0) throw ConfigError("polynomial degree must be non-negative");
    // Builds the grid once so that bad tau bounds fail before any work starts.
    dfa::DfaConfig probe{degree, dfa::default_taus(window, degree, tau_min, tau_max), std::nullopt};
    probe.validate(window);
}

std::vector<double> LocalHurstSeries::values() const {
    std::vector<double> out;
    out.reserve(samples.size());
    for (const auto& s : samples) out.push_back(s.h);
    return out;
}

std::size_t window_count(std::size_t n, const RollingConfig& config) {
    if (n < config.window) return 0;
    return (n - config.window) / config.shift + 1;
}

LocalHurstSeries rolling_hurst(const Profile& profile, const RollingConfig& config,
                               std::span<const Timestamp> timestamps) {
    config.validate();
    const std::size_t n = profile.size();
    if (n < config.window) {
        throw ConfigError("window exceeds series: L = " + std::to_string(config.window) + ", N = " +
                          std::to_string(n));
    }
    if (!timestamps.empty() && timestamps.size() != n) {
        throw ConfigError("timestamp count does not match profile length");
    }

    dfa::DfaConfig dfa_config;
    dfa_config.degree = config.degree;
    dfa_config.taus = dfa::default_taus(config.window, config.degree, config.tau_min, config.tau_max);

    const std::size_t count = window_count(n, config);
    LocalHurstSeries out;
    out.window = config.window;
    out.shift = config.shift;
    out.samples.resize(count);

    const auto x = profile.values();
    parallel_for(count, [&](std::size_t i) {
        const std::size_t end = config.window - 1 + i * config.shift;
        const auto slice = x.subspan(end + 1 - config.window, config.window);
        const auto curve = dfa::fluctuation_curve(slice, dfa_config);
        auto& s = out.samples[i];
        s.t_index = end;
        if (!timestamps.empty()) s.timestamp = timestamps[end];
        s.h = curve.hurst;
        s.fit_stderr = curve.fit_stderr;
    });
    return out;
}

}  // namespace hurstlab::local_hurst

#include "hurstlab/resample.hpp"

#include <cmath>
#include <utility>

namespace hurstlab::resample {

namespace {

double signed_gaussian_magnitude(double r, Rng& rng) {
    if (r == 0.0) return 0.0;
    const double g = std::abs(rng.normal());
    return r > 0.0 ? g : -g;
}

}  // namespace

void shuffle_in_place(std::vector<double>& values, Rng& rng) {
    for (std::size_t i = values.size(); i > 1; --i) {
        const std::size_t j = rng.below(i);
        std::swap(values[i - 1], values[j]);
    }
}

std::vector<ReturnSeries> shuffle_returns(const ReturnSeries& returns, const ShuffleSpec& spec) {
    if (spec.repeats < 1) throw ConfigError("shuffle repeats must be at least 1");
    const auto in = returns.values();

    std::vector<ReturnSeries> out;
    out.reserve(spec.repeats);
    for (std::size_t r = 0; r < spec.repeats; ++r) {
        std::vector<double> v;
        v.reserve(in.size());
        for (const auto& x : in) v.push_back(x.value);
        Rng rng(spec.seed, r);
        shuffle_in_place(v, rng);

        std::vector<Return> permuted(in.size());
        for (std::size_t i = 0; i < in.size(); ++i) permuted[i] = Return{in[i].timestamp, v[i], false};
        out.emplace_back(std::move(permuted));
    }
    return out;
}

ReturnSeries gaussian_surrogate(const ReturnSeries& returns, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Return> out(returns.values().begin(), returns.values().end());
    for (auto& r : out) r.value = signed_gaussian_magnitude(r.value, rng);
    return ReturnSeries(std::move(out));
}

std::vector<double> gaussian_surrogate(const std::vector<double>& increments, Rng& rng) {
    std::vector<double> out(increments.size());
    for (std::size_t i = 0; i < increments.size(); ++i) out[i] = signed_gaussian_magnitude(increments[i], rng);
    return out;
}

ReturnSeries remove_eod_returns(const ReturnSeries& returns) {
    std::vector<Return> kept;
    kept.reserve(returns.size());
    for (const auto& r : returns.values()) {
        if (!r.crosses_day) kept.push_back(r);
    }
    return ReturnSeries(std::move(kept));
}

}  // namespace hurstlab::resample

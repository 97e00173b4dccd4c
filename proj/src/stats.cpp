#include "hurstlab/stats.hpp"

#include <algorithm>
#include <cmath>

#include "hurstlab/linear_fit.hpp"

namespace hurstlab::stats {

double mean(std::span<const double> v) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (const double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double stddev(std::span<const double> v) {
    if (v.size() < 2) return 0.0;
    const double m = mean(v);
    double ss = 0.0;
    for (const double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double kurtosis(std::span<const double> v) {
    const double m = mean(v);
    double m2 = 0.0, m4 = 0.0;
    for (const double x : v) {
        const double d2 = (x - m) * (x - m);
        m2 += d2;
        m4 += d2 * d2;
    }
    const double n = static_cast<double>(v.size());
    m2 /= n;
    m4 /= n;
    return m2 > 0.0 ? m4 / (m2 * m2) : 0.0;
}

HurstDistribution hurst_pdf(std::span<const double> samples, std::size_t bins) {
    if (samples.empty()) throw EstimationError("no samples");
    if (bins < 1) throw ConfigError("histogram needs at least one bin");

    HurstDistribution d;
    d.bin_edges.resize(bins + 1);
    for (std::size_t i = 0; i <= bins; ++i) d.bin_edges[i] = static_cast<double>(i) / static_cast<double>(bins);
    d.counts.assign(bins, 0);
    d.n = samples.size();

    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double h = samples[i];
        if (!std::isfinite(h)) throw DomainError("non-finite H sample at index " + std::to_string(i));
        std::size_t bin;
        if (h < 0.0) {
            ++d.overflow;
            bin = 0;
        } else if (h > 1.0) {
            ++d.overflow;
            bin = bins - 1;
        } else {
            bin = std::min(bins - 1, static_cast<std::size_t>(h * static_cast<double>(bins)));
        }
        ++d.counts[bin];
    }

    const double width = 1.0 / static_cast<double>(bins);
    d.density.resize(bins);
    std::size_t best = 0;
    for (std::size_t i = 0; i < bins; ++i) {
        d.density[i] = static_cast<double>(d.counts[i]) / (static_cast<double>(d.n) * width);
        if (d.counts[i] > d.counts[best]) best = i;
    }
    d.mode_bin = d.bin_center(best);
    d.mean = mean(samples);
    d.std = stddev(samples);
    return d;
}

namespace {

ScalingFit fit_scaling(std::vector<ScalingPoint> points, bool negate) {
    std::vector<double> lx, ly;
    for (const auto& p : points) {
        lx.push_back(std::log(static_cast<double>(p.scale)));
        ly.push_back(std::log(p.value));
    }
    const LineFit fit = fit_line(lx, ly);
    ScalingFit out;
    out.points = std::move(points);
    out.exponent = negate ? -fit.slope : fit.slope;
    out.stderr_exponent = fit.slope_stderr;
    return out;
}

}  // namespace

ScalingFit sigma_vs_l(const std::map<std::size_t, std::vector<double>>& family) {
    if (family.size() < 3) throw ConfigError("sigma_vs_l needs at least 3 distinct window lengths");
    std::vector<ScalingPoint> points;
    std::vector<std::string> warnings;
    for (const auto& [scale, h] : family) {
        if (scale == 0) throw ConfigError("window length must be positive");
        if (h.size() < kMinSamplesPerScale) {
            throw ConfigError("window length " + std::to_string(scale) + " has " + std::to_string(h.size()) +
                              " samples, need " + std::to_string(kMinSamplesPerScale));
        }
        const double s = stddev(h);
        if (!(s > 0.0)) {
            warnings.push_back("window length " + std::to_string(scale) + " excluded: zero spread");
            continue;
        }
        points.push_back(ScalingPoint{scale, s, s, h.size()});
    }
    if (points.size() < 3) throw EstimationError("sigma_vs_l: fewer than 3 window lengths with nonzero spread");
    ScalingFit fit = fit_scaling(std::move(points), true);
    fit.warnings = std::move(warnings);
    return fit;
}

ScalingFit mean_h_vs_l(const std::map<std::size_t, std::vector<double>>& family) {
    if (family.size() < 2) throw ConfigError("mean_h_vs_l needs at least 2 window lengths");
    std::vector<ScalingPoint> points;
    std::vector<std::string> warnings;
    bool loggable = true;
    for (const auto& [scale, h] : family) {
        if (h.empty()) throw EstimationError("no samples at window length " + std::to_string(scale));
        const double m = mean(h);
        loggable = loggable && m > 0.0;
        points.push_back(ScalingPoint{scale, m, stddev(h), h.size()});
    }
    if (!loggable) {
        ScalingFit out;
        out.points = std::move(points);
        out.warnings.push_back("non-positive mean H; exponent not computed");
        return out;
    }
    return fit_scaling(std::move(points), false);
}

ScalingFit mean_h_vs_l(const std::map<std::size_t, local_hurst::LocalHurstSeries>& family) {
    std::map<std::size_t, std::vector<double>> values;
    for (const auto& [scale, series] : family) values.emplace(scale, series.values());
    return mean_h_vs_l(values);
}

std::vector<std::vector<double>> split_blocks(const local_hurst::LocalHurstSeries& series, std::size_t k) {
    if (k < 2) throw ConfigError("subperiod count must be at least 2");
    const std::size_t n = series.samples.size();
    if (n < k * kMinSamplesPerBlock) {
        throw EstimationError("too few samples for " + std::to_string(k) + " subperiods: " + std::to_string(n) +
                              ", need " + std::to_string(k * kMinSamplesPerBlock));
    }
    std::vector<std::vector<double>> blocks(k);
    std::size_t pos = 0;
    for (std::size_t b = 0; b < k; ++b) {
        const std::size_t size = n / k + (b < n % k ? 1 : 0);
        blocks[b].reserve(size);
        for (std::size_t i = 0; i < size; ++i) blocks[b].push_back(series.samples[pos + i].h);
        pos += size;
    }
    return blocks;
}

std::vector<HurstDistribution> split_subperiods(const local_hurst::LocalHurstSeries& series, std::size_t k,
                                                std::size_t bins) {
    std::vector<HurstDistribution> out;
    for (const auto& block : split_blocks(series, k)) out.push_back(hurst_pdf(block, bins));
    return out;
}

double kolmogorov_q(double lambda) {
    if (lambda < 0.2) return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = sign * std::exp(-2.0 * j * j * lambda * lambda);
        sum += term;
        if (std::abs(term) < 1e-16 * std::abs(sum)) break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

namespace {

double p_from_statistic(double d, double effective_n) {
    const double root = std::sqrt(effective_n);
    return kolmogorov_q((root + 0.12 + 0.11 / root) * d);
}

}  // namespace

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw EstimationError("no samples");
    std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const double na = static_cast<double>(x.size()), nb = static_cast<double>(y.size());

    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < x.size() && j < y.size()) {
        const double v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] == v) ++i;
        while (j < y.size() && y[j] == v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return KsResult{d, p_from_statistic(d, na * nb / (na + nb))};
}

KsResult ks_one_sample(std::span<const double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) throw EstimationError("no samples");
    std::vector<double> x(samples.begin(), samples.end());
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double f = cdf(x[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return KsResult{d, p_from_statistic(d, n)};
}

}  // namespace hurstlab::stats

#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "hurstlab/local_hurst.hpp"

namespace hurstlab::stats {

double mean(std::span<const double> v);

/// Sample standard deviation (n - 1 denominator); 0 for a single value.
double stddev(std::span<const double> v);

/// Moment ratio m4 / m2^2 (3 for a Gaussian).
double kurtosis(std::span<const double> v);

/// Histogram of H values on a uniform grid over [0, 1].
struct HurstDistribution {
    std::vector<double> bin_edges;  // bins + 1 edges, 0 to 1
    std::vector<double> density;    // sum(density) * bin_width == 1
    std::vector<std::size_t> counts;
    std::size_t n = 0;
    std::size_t overflow = 0;  // samples outside [0, 1], clipped into the end bins
    double mean = 0.0;
    double std = 0.0;
    double mode_bin = 0.0;  // center of the first bin with maximal density

    double bin_width() const { return bin_edges[1] - bin_edges[0]; }
    double bin_center(std::size_t i) const { return 0.5 * (bin_edges[i] + bin_edges[i + 1]); }
};

inline constexpr std::size_t kDefaultBins = 50;  // width 0.02

/// Throws EstimationError("no samples") on empty input and DomainError on a
/// non-finite sample. Moments are computed on the unclipped samples.
HurstDistribution hurst_pdf(std::span<const double> samples, std::size_t bins = kDefaultBins);

struct ScalingPoint {
    std::size_t scale = 0;  // L
    double value = 0.0;     // std of H (sigma_vs_l) or mean of H (mean_h_vs_l)
    double spread = 0.0;    // std of H at this scale
    std::size_t samples = 0;
};

struct ScalingFit {
    std::vector<ScalingPoint> points;
    double exponent = 0.0;
    double stderr_exponent = 0.0;
    std::vector<std::string> warnings;
};

/// Minimum number of H samples per scale accepted by sigma_vs_l.
inline constexpr std::size_t kMinSamplesPerScale = 30;

/// sigma_H ~ L^-gamma: exponent = -slope of OLS on (ln L, ln std). Scales with
/// zero spread are dropped with a warning. Needs >= 3 usable scales.
ScalingFit sigma_vs_l(const std::map<std::size_t, std::vector<double>>& family);

/// Mean H per scale. The exponent (slope of ln mean against ln L) is advisory.
ScalingFit mean_h_vs_l(const std::map<std::size_t, local_hurst::LocalHurstSeries>& family);
ScalingFit mean_h_vs_l(const std::map<std::size_t, std::vector<double>>& family);

/// Minimum samples per block accepted by split_subperiods.
inline constexpr std::size_t kMinSamplesPerBlock = 30;

/// k contiguous blocks of H values whose sizes differ by at most one; the
/// first n mod k blocks get the extra sample.
std::vector<std::vector<double>> split_blocks(const local_hurst::LocalHurstSeries& series, std::size_t k);

std::vector<HurstDistribution> split_subperiods(const local_hurst::LocalHurstSeries& series, std::size_t k,
                                                std::size_t bins = kDefaultBins);

struct KsResult {
    double statistic = 0.0;  // sup |F1 - F2|
    double p_value = 1.0;    // asymptotic Kolmogorov tail with Stephens' correction
};

/// Kolmogorov tail probability Q(lambda) = 2 sum_{j>=1} (-1)^(j-1) exp(-2 j^2 lambda^2).
double kolmogorov_q(double lambda);

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);
KsResult ks_one_sample(std::span<const double> samples, const std::function<double(double)>& cdf);

}  // namespace hurstlab::stats

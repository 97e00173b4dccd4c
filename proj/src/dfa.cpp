#include "hurstlab/dfa.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hurstlab/linear_fit.hpp"

namespace hurstlab::dfa {

namespace {

/// Column-major tau x (degree+1) matrix whose columns are an orthonormal
/// basis of polynomials of degree <= p sampled at tau points mapped to [-1, 1].
class PolynomialBasis {
public:
    PolynomialBasis(std::size_t tau, int degree) : tau_(tau), cols_(static_cast<std::size_t>(degree) + 1) {
        q_.assign(tau_ * cols_, 0.0);
        const double half = 0.5 * static_cast<double>(tau_ - 1);
        for (std::size_t k = 0; k < cols_; ++k) {
            double* col = column(k);
            for (std::size_t j = 0; j < tau_; ++j) {
                const double u = (static_cast<double>(j) - half) / half;
                col[j] = std::pow(u, static_cast<double>(k));
            }
            // Modified Gram-Schmidt, two passes.
            for (int pass = 0; pass < 2; ++pass) {
                for (std::size_t m = 0; m < k; ++m) {
                    const double* prev = column(m);
                    double dot = 0.0;
                    for (std::size_t j = 0; j < tau_; ++j) dot += prev[j] * col[j];
                    for (std::size_t j = 0; j < tau_; ++j) col[j] -= dot * prev[j];
                }
            }
            double norm = 0.0;
            for (std::size_t j = 0; j < tau_; ++j) norm += col[j] * col[j];
            norm = std::sqrt(norm);
            for (std::size_t j = 0; j < tau_; ++j) col[j] /= norm;
        }
    }

    std::size_t columns() const { return cols_; }
    const double* column(std::size_t k) const { return q_.data() + k * tau_; }

private:
    double* column(std::size_t k) { return q_.data() + k * tau_; }

    std::size_t tau_;
    std::size_t cols_;
    std::vector<double> q_;
};

void check_box(std::size_t n, std::size_t tau, int degree) {
    if (degree < 0) throw ConfigError("polynomial degree must be non-negative");
    if (tau < static_cast<std::size_t>(degree) + 2) {
        throw ConfigError("box size " + std::to_string(tau) + " is below degree + 2 = " +
                          std::to_string(degree + 2));
    }
    if (tau > n) {
        throw ConfigError("box size " + std::to_string(tau) + " exceeds series length " + std::to_string(n));
    }
}

/// Residual RMS of one box against an orthonormal basis. The box mean is
/// removed first (it lies in the span of the constant column) to keep the
/// projection well scaled when the profile carries a large offset.
double box_rms(const double* x, std::size_t tau, const PolynomialBasis& basis, std::vector<double>& work) {
    double mean = 0.0;
    for (std::size_t j = 0; j < tau; ++j) mean += x[j];
    mean /= static_cast<double>(tau);
    for (std::size_t j = 0; j < tau; ++j) work[j] = x[j] - mean;

    for (std::size_t k = 0; k < basis.columns(); ++k) {
        const double* q = basis.column(k);
        double c = 0.0;
        for (std::size_t j = 0; j < tau; ++j) c += q[j] * work[j];
        for (std::size_t j = 0; j < tau; ++j) work[j] -= c * q[j];
    }
    double ss = 0.0;
    for (std::size_t j = 0; j < tau; ++j) ss += work[j] * work[j];
    return std::sqrt(ss / static_cast<double>(tau));
}

}  // namespace

void DfaConfig::validate(std::size_t n) const {
    if (degree < 0) throw ConfigError("polynomial degree must be non-negative");
    if (taus.empty()) throw ConfigError("no box sizes configured");
    for (std::size_t i = 0; i < taus.size(); ++i) {
        if (taus[i] < static_cast<std::size_t>(degree) + 2) {
            throw ConfigError("box size " + std::to_string(taus[i]) + " is below degree + 2 = " +
                              std::to_string(degree + 2));
        }
        if (i > 0 && taus[i] <= taus[i - 1]) throw ConfigError("box sizes must be strictly increasing");
    }
    if (taus.back() > n / 4) {
        throw ConfigError("largest box size " + std::to_string(taus.back()) + " exceeds N/4 = " +
                          std::to_string(n / 4));
    }
    if (fit_range && fit_range->min > fit_range->max) throw ConfigError("empty fit range");
}

std::size_t default_tau_min(std::size_t n, int degree) {
    // Boxes below 16 samples bias DFA-2 upward by ~0.02 at L = 1024.
    const std::size_t floor_tau = n >= 256 ? 16 : 8;
    return std::max<std::size_t>(floor_tau, static_cast<std::size_t>(std::max(degree, 0)) + 2);
}

std::vector<std::size_t> geometric_taus(TauRange range) {
    if (range.min == 0 || range.min > range.max) {
        throw ConfigError("invalid box-size range [" + std::to_string(range.min) + ", " +
                          std::to_string(range.max) + "]");
    }
    const double ratio = std::pow(2.0, 0.25);
    std::vector<std::size_t> taus;
    for (int k = 0;; ++k) {
        const double t = static_cast<double>(range.min) * std::pow(ratio, k);
        const auto rounded = static_cast<std::size_t>(std::llround(t));
        if (rounded > range.max) break;
        if (taus.empty() || rounded != taus.back()) taus.push_back(rounded);
    }
    if (taus.back() != range.max) taus.push_back(range.max);
    return taus;
}

std::vector<std::size_t> default_taus(std::size_t n, int degree, std::optional<std::size_t> tau_min,
                                      std::optional<std::size_t> tau_max) {
    const std::size_t lo = tau_min.value_or(default_tau_min(n, degree));
    const std::size_t hi = tau_max.value_or(n / 4);
    return geometric_taus(TauRange{lo, hi});
}

std::vector<double> box_fluctuation(std::span<const double> profile, std::size_t tau, int degree) {
    check_box(profile.size(), tau, degree);
    const PolynomialBasis basis(tau, degree);
    const std::size_t boxes = profile.size() / tau;
    std::vector<double> out(boxes);
    std::vector<double> work(tau);
    for (std::size_t i = 0; i < boxes; ++i) {
        out[i] = box_rms(profile.data() + i * tau, tau, basis, work);
    }
    return out;
}

std::vector<double> box_fluctuation(const Profile& profile, std::size_t tau, int degree) {
    return box_fluctuation(profile.values(), tau, degree);
}

FluctuationCurve fit_curve(std::vector<FluctuationPoint> points, std::optional<TauRange> fit_range) {
    std::vector<double> lx, ly;
    for (auto& pt : points) {
        const bool in_range = !fit_range || (pt.tau >= fit_range->min && pt.tau <= fit_range->max);
        pt.in_fit = in_range && pt.mean_fluct > 0.0;
        if (pt.in_fit) {
            lx.push_back(std::log(static_cast<double>(pt.tau)));
            ly.push_back(std::log(pt.mean_fluct));
        }
    }
    if (lx.size() < 3) {
        throw EstimationError("insufficient scaling range: " + std::to_string(lx.size()) +
                              " usable box sizes, need 3");
    }
    const LineFit fit = fit_line(lx, ly);
    FluctuationCurve curve;
    curve.points = std::move(points);
    curve.hurst = fit.slope;
    curve.fit_stderr = fit.slope_stderr;
    curve.fit_r2 = fit.r2;
    return curve;
}

FluctuationCurve fluctuation_curve(std::span<const double> profile, const DfaConfig& config) {
    config.validate(profile.size());
    std::vector<FluctuationPoint> points;
    points.reserve(config.taus.size());
    for (const std::size_t tau : config.taus) {
        const auto f = box_fluctuation(profile, tau, config.degree);
        double sum = 0.0;
        for (const double v : f) sum += v;
        points.push_back(FluctuationPoint{tau, sum / static_cast<double>(f.size()), f.size(), false});
    }
    return fit_curve(std::move(points), config.fit_range);
}

FluctuationCurve fluctuation_curve(const Profile& profile, const DfaConfig& config) {
    return fluctuation_curve(profile.values(), config);
}

FluctuationCurve estimate_hurst(std::span<const double> profile, int degree, std::optional<std::size_t> tau_min,
                                std::optional<std::size_t> tau_max) {
    if (profile.size() < kMinEstimateLength) {
        throw EstimationError("series too short: " + std::to_string(profile.size()) + " samples, need " +
                              std::to_string(kMinEstimateLength));
    }
    DfaConfig config;
    config.degree = degree;
    config.taus = default_taus(profile.size(), degree, tau_min, tau_max);
    return fluctuation_curve(profile, config);
}

FluctuationCurve estimate_hurst(const Profile& profile, int degree) {
    return estimate_hurst(profile.values(), degree);
}

}  // namespace hurstlab::dfa

#pragma once

#include <cstddef>
#include <span>

namespace hurstlab {

/// Ordinary least-squares line y = intercept + slope * x.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;  // sqrt(SSE / (n - 2) / Sxx); 0 when n == 2
    double r2 = 1.0;
    std::size_t n = 0;
};

/// Requires x.size() == y.size() >= 2 and non-constant x; throws ConfigError otherwise.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace hurstlab

#pragma once

// Reference implementations used only by the tests. They deliberately take a
// different numerical route from the library code they check.

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace oracle {

/// Solves A x = b by Gaussian elimination with partial pivoting.
inline std::vector<long double> solve(std::vector<std::vector<long double>> a, std::vector<long double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
        }
        if (a[pivot][col] == 0.0L) throw std::runtime_error("singular normal equations");
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const long double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<long double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        long double s = b[i];
        for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
        x[i] = s / a[i][i];
    }
    return x;
}

/// Box fluctuations via explicit normal equations in raw coordinates t = 0..tau-1.
inline std::vector<double> box_fluctuation(std::span<const double> x, std::size_t tau, int degree) {
    const std::size_t cols = static_cast<std::size_t>(degree) + 1;
    std::vector<double> out;
    for (std::size_t box = 0; box + 1 <= x.size() / tau; ++box) {
        std::vector<std::vector<long double>> ata(cols, std::vector<long double>(cols, 0.0L));
        std::vector<long double> atb(cols, 0.0L);
        for (std::size_t t = 0; t < tau; ++t) {
            long double pi = 1.0L;
            for (std::size_t i = 0; i < cols; ++i) {
                long double pj = 1.0L;
                for (std::size_t j = 0; j < cols; ++j) {
                    ata[i][j] += pi * pj;
                    pj *= static_cast<long double>(t);
                }
                atb[i] += pi * static_cast<long double>(x[box * tau + t]);
                pi *= static_cast<long double>(t);
            }
        }
        const auto c = solve(ata, atb);
        long double ss = 0.0L;
        for (std::size_t t = 0; t < tau; ++t) {
            long double fit = 0.0L, pw = 1.0L;
            for (std::size_t i = 0; i < cols; ++i) {
                fit += c[i] * pw;
                pw *= static_cast<long double>(t);
            }
            const long double r = static_cast<long double>(x[box * tau + t]) - fit;
            ss += r * r;
        }
        out.push_back(static_cast<double>(std::sqrt(ss / static_cast<long double>(tau))));
    }
    return out;
}

/// Exact fractional Gaussian noise autocovariance, written independently of synth.
inline double fgn_cov(double h, double k) {
    k = std::fabs(k);
    return 0.5 * (std::pow(k + 1, 2 * h) - 2 * std::pow(k, 2 * h) + std::pow(std::fabs(k - 1), 2 * h));
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

inline double half_normal_cdf(double x) { return x <= 0.0 ? 0.0 : std::erf(x / std::sqrt(2.0)); }

}  // namespace oracle

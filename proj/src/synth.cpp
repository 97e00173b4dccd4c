#include "hurstlab/synth.hpp"

#include <fftw3.h>

#include <bit>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

namespace hurstlab::synth {

namespace {

// The FFTW planner is not re-entrant; execution of distinct plans is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwFree {
    void operator()(void* p) const { fftw_free(p); }
};

template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

template <typename T>
FftwBuffer<T> fftw_buffer(std::size_t n) {
    auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * n));
    if (p == nullptr) throw std::bad_alloc();
    return FftwBuffer<T>(p);
}

class Plan {
public:
    explicit Plan(fftw_plan p) : plan_(p) {
        if (plan_ == nullptr) throw Error("FFTW failed to create a plan");
    }
    ~Plan() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan_);
    }
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;

    void execute() const { fftw_execute(plan_); }

private:
    fftw_plan plan_;
};

void check_hurst(double h) {
    if (!(h > 0.0 && h < 1.0)) throw DomainError("Hurst index must lie in (0, 1), got " + std::to_string(h));
}

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha <= 2.0)) {
        throw DomainError("stability index must lie in (0, 2], got " + std::to_string(alpha));
    }
}

Profile walk_from(const std::vector<double>& increments, Provenance provenance) {
    std::vector<double> x(increments.size() + 1);
    x[0] = 0.0;
    for (std::size_t k = 0; k < increments.size(); ++k) x[k + 1] = x[k] + increments[k];
    return Profile(std::move(x), provenance);
}

}  // namespace

double fgn_autocovariance(double h, std::size_t lag) {
    const double k = static_cast<double>(lag);
    const double e = 2.0 * h;
    return 0.5 * (std::pow(k + 1.0, e) - 2.0 * std::pow(k, e) + std::pow(std::abs(k - 1.0), e));
}

std::vector<double> fgn_increments(double h, std::size_t count, Rng& rng) {
    check_hurst(h);
    if (count == 0) return {};

    const std::size_t m = std::bit_ceil(count);
    const std::size_t n = 2 * m;

    auto circ = fftw_buffer<double>(n);
    auto spectrum = fftw_buffer<fftw_complex>(m + 1);
    for (std::size_t k = 0; k <= m; ++k) circ[k] = fgn_autocovariance(h, k);
    for (std::size_t k = 1; k < m; ++k) circ[n - k] = circ[k];

    {
        std::unique_ptr<Plan> forward;
        {
            std::lock_guard lock(planner_mutex());
            forward = std::make_unique<Plan>(
                fftw_plan_dft_r2c_1d(static_cast<int>(n), circ.get(), spectrum.get(), FFTW_ESTIMATE));
        }
        forward->execute();
    }

    // Eigenvalues of the circulant; nonnegative for fGn up to rounding.
    std::vector<double> lambda(m + 1);
    double largest = 0.0;
    for (std::size_t k = 0; k <= m; ++k) {
        lambda[k] = spectrum[k][0];
        largest = std::max(largest, std::abs(lambda[k]));
    }
    for (auto& l : lambda) {
        if (l < 0.0) {
            if (l < -1e-9 * largest) throw Error("circulant embedding is not nonnegative definite");
            l = 0.0;
        }
    }

    const double dn = static_cast<double>(n);
    spectrum[0][0] = std::sqrt(lambda[0] / dn) * rng.normal();
    spectrum[0][1] = 0.0;
    spectrum[m][0] = std::sqrt(lambda[m] / dn) * rng.normal();
    spectrum[m][1] = 0.0;
    for (std::size_t k = 1; k < m; ++k) {
        const double s = std::sqrt(lambda[k] / (2.0 * dn));
        spectrum[k][0] = s * rng.normal();
        spectrum[k][1] = s * rng.normal();
    }

    auto path = fftw_buffer<double>(n);
    {
        std::unique_ptr<Plan> backward;
        {
            std::lock_guard lock(planner_mutex());
            backward = std::make_unique<Plan>(
                fftw_plan_dft_c2r_1d(static_cast<int>(n), spectrum.get(), path.get(), FFTW_ESTIMATE));
        }
        backward->execute();
    }
    return std::vector<double>(path.get(), path.get() + count);
}

Profile generate_fbm(const FbmSpec& spec) {
    check_hurst(spec.h);
    if (spec.length < 2) throw DomainError("fBm path needs at least 2 samples");
    Rng rng(spec.seed);
    return walk_from(fgn_increments(spec.h, spec.length - 1, rng), Provenance::synthetic_fbm);
}

double stable_variate(double alpha, Rng& rng) {
    const double phi = std::numbers::pi * (rng.uniform_open() - 0.5);
    const double nu = rng.exponential();
    if (alpha == 1.0) return std::tan(phi);
    const double a = std::sin(alpha * phi) / std::pow(std::cos(phi), 1.0 / alpha);
    const double b = std::pow(std::cos((1.0 - alpha) * phi) / nu, (1.0 - alpha) / alpha);
    return a * b;
}

std::vector<double> levy_increments(double alpha, std::size_t count, Rng& rng) {
    check_alpha(alpha);
    std::vector<double> y(count);
    for (auto& v : y) v = stable_variate(alpha, rng);
    return y;
}

Profile generate_levy(const LevySpec& spec) {
    check_alpha(spec.alpha);
    if (spec.length < 2) throw DomainError("Levy path needs at least 2 samples");
    Rng rng(spec.seed);
    return walk_from(levy_increments(spec.alpha, spec.length - 1, rng), Provenance::synthetic_levy);
}

}  // namespace hurstlab::synth

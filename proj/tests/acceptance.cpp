// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "fixtures.hpp"
#include "hurstlab/cli.hpp"
#include "hurstlab/dfa.hpp"
#include "hurstlab/local_hurst.hpp"
#include "hurstlab/parallel.hpp"
#include "hurstlab/resample.hpp"
#include "hurstlab/stats.hpp"
#include "hurstlab/synth.hpp"
#include "oracles.hpp"

using namespace hurstlab;
namespace fs = std::filesystem;

namespace {

constexpr std::size_t kMembers = 500;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << "    violated: " << what << '\n';
        }
    }
};

std::string fmt(double v, int digits = 4) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

/// DFA-p estimates over an ensemble, member k seeded by member_seed(master, k).
std::vector<double> ensemble(std::size_t members, std::uint64_t master, int degree,
                             const std::function<Profile(std::uint64_t)>& make) {
    std::vector<double> h(members);
    parallel_for(members, [&](std::size_t k) {
        h[k] = dfa::estimate_hurst(make(synth::member_seed(master, k)), degree).hurst;
    });
    return h;
}

std::vector<double> rolling_values(const Profile& p, std::size_t window, std::size_t shift) {
    local_hurst::RollingConfig cfg;
    cfg.window = window;
    cfg.shift = shift;
    return local_hurst::rolling_hurst(p, cfg).values();
}

ReturnSeries as_returns(const std::vector<double>& inc) {
    std::vector<Return> r;
    r.reserve(inc.size());
    for (std::size_t i = 0; i < inc.size(); ++i) r.push_back({Timestamp{static_cast<std::int64_t>(i)}, inc[i], false});
    return ReturnSeries(std::move(r));
}

/// Pools rolling H over every shuffle of `returns` and returns the pdf.
stats::HurstDistribution shuffled_pdf(const ReturnSeries& returns, std::size_t window, std::uint64_t seed) {
    std::vector<double> pooled;
    for (const auto& s : resample::shuffle_returns(returns, {5, seed})) {
        const auto h = rolling_values(to_profile(s, 0.0), window, window);
        pooled.insert(pooled.end(), h.begin(), h.end());
    }
    return stats::hurst_pdf(pooled);
}

// ---------------------------------------------------------------------------

Outcome ac1() {
    struct Row {
        double h, m1, s1, m2, s2;
    };
    // Published calibration table: mean and std of DFA-1 and DFA-2 at L = 1024.
    const Row table[] = {{0.2, 0.22, 0.03, 0.22, 0.04}, {0.3, 0.30, 0.04, 0.31, 0.04}, {0.4, 0.40, 0.05, 0.40, 0.04},
                         {0.5, 0.50, 0.06, 0.50, 0.05}, {0.6, 0.60, 0.07, 0.60, 0.06}, {0.7, 0.70, 0.08, 0.70, 0.06},
                         {0.8, 0.79, 0.08, 0.79, 0.07}};
    Outcome o;
    for (const Row& row : table) {
        for (const int p : {1, 2}) {
            const double want_m = p == 1 ? row.m1 : row.m2;
            const double want_s = p == 1 ? row.s1 : row.s2;
            const auto h = ensemble(kMembers, 1000 + static_cast<std::uint64_t>(100 * row.h), p, [&](std::uint64_t s) {
                return synth::generate_fbm({row.h, 1024, s});
            });
            const double m = stats::mean(h), sd = stats::stddev(h);
            o.detail << "    h=" << fmt(row.h, 1) << " DFA-" << p << ": " << fmt(m) << " +/- " << fmt(sd)
                     << " (table " << fmt(want_m, 2) << " +/- " << fmt(want_s, 2) << ")\n";
            o.require(std::abs(m - want_m) <= 0.03, "mean within 0.03");
            o.require(std::abs(sd - want_s) <= 0.5 * want_s, "std within 50%");
        }
    }
    return o;
}

Outcome ac2() {
    const double hs[] = {0.6, 0.7, 0.8};
    const std::size_t ls[] = {1024, 4096, 16384};
    // Published Levy table: rows H = 1/alpha, columns L.
    const double table[3][3] = {{0.56, 0.58, 0.57}, {0.63, 0.64, 0.65}, {0.68, 0.70, 0.71}};
    Outcome o;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            const double alpha = 1.0 / hs[i];
            const auto h = ensemble(kMembers, 2000 + static_cast<std::uint64_t>(10 * i + j), 2, [&](std::uint64_t s) {
                return synth::generate_levy({alpha, ls[j], s});
            });
            const double m = stats::mean(h);
            o.detail << "    H=" << fmt(hs[i], 1) << " L=" << ls[j] << ": " << fmt(m) << " +/- " << fmt(stats::stddev(h))
                     << " (table " << fmt(table[i][j], 2) << ")\n";
            o.require(std::abs(m - table[i][j]) <= 0.04, "mean within 0.04");
            o.require(m < hs[i], "estimate below nominal");
        }
    }
    return o;
}

Outcome ac3() {
    const std::size_t ls[] = {512, 1024, 2048, 4096, 8192};
    Outcome o;
    std::map<double, stats::ScalingFit> fits;
    for (const double h : {0.4, 0.5, 0.6}) {
        std::map<std::size_t, std::vector<double>> family;
        for (const std::size_t L : ls) {
            family[L] = ensemble(kMembers, 3000 + L + static_cast<std::uint64_t>(10 * h), 2, [&](std::uint64_t s) {
                return synth::generate_fbm({h, L, s});
            });
        }
        fits[h] = stats::sigma_vs_l(family);
        o.detail << "    h=" << fmt(h, 1) << ": gamma = " << fmt(fits[h].exponent) << " +/- "
                 << fmt(fits[h].stderr_exponent) << ", sigma(L) =";
        for (const auto& p : fits[h].points) o.detail << ' ' << fmt(p.value);
        o.detail << '\n';
        o.require(fits[h].exponent >= 0.30 && fits[h].exponent <= 0.45, "gamma in [0.30, 0.45]");
    }
    for (std::size_t i = 0; i < std::size(ls); ++i) {
        o.require(fits[0.4].points[i].value <= fits[0.5].points[i].value &&
                      fits[0.5].points[i].value <= fits[0.6].points[i].value,
                  "sigma non-decreasing in h at L=" + std::to_string(ls[i]));
    }
    return o;
}

Outcome ac4() {
    const std::size_t L = 1024, windows = 1000;
    const std::size_t n = L * windows;
    Outcome o;

    const auto gauss = shuffled_pdf(as_returns(fixture::gaussian_increments(n, 41)), L, 42);
    Rng rng(43);
    const auto levy = as_returns(synth::levy_increments(1.4, n, rng));
    const auto levy_pdf = shuffled_pdf(levy, L, 44);
    const auto surrogate_pdf = shuffled_pdf(resample::gaussian_surrogate(levy, 45), L, 46);

    o.detail << "    (a) shuffled Gaussian walk: mode " << fmt(gauss.mode_bin, 2) << ", mean " << fmt(gauss.mean)
             << ", " << gauss.n << " windows\n";
    o.detail << "    (b) shuffled Levy alpha=1.4: mode " << fmt(levy_pdf.mode_bin, 2) << ", mean "
             << fmt(levy_pdf.mean) << ", " << levy_pdf.n << " windows\n";
    o.detail << "    (c) surrogate of (b), shuffled: mode " << fmt(surrogate_pdf.mode_bin, 2) << ", mean "
             << fmt(surrogate_pdf.mean) << ", " << surrogate_pdf.n << " windows\n";
    o.require(std::abs(gauss.mode_bin - 0.5) <= 0.02 + 1e-12, "(a) mode 0.50 +/- 0.02");
    o.require(levy_pdf.mode_bin > 0.52, "(b) mode > 0.52");
    o.require(std::abs(surrogate_pdf.mode_bin - 0.5) <= 0.02 + 1e-12, "(c) mode 0.50 +/- 0.02");
    o.require(gauss.n >= 500 && levy_pdf.n >= 500 && surrogate_pdf.n >= 500, ">= 500 windows each");
    return o;
}

Outcome ac5() {
    Outcome o;
    Rng rng(51);
    double worst = 0.0;
    std::size_t comparisons = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 4 + rng.below(61);
        const int p = trial % 3;
        std::vector<double> x(n);
        double level = 10.0 * rng.normal();
        for (auto& v : x) v = (level += rng.normal());
        for (std::size_t tau = static_cast<std::size_t>(p) + 2; tau <= n; ++tau) {
            const auto got = dfa::box_fluctuation(std::span<const double>(x), tau, p);
            const auto ref = oracle::box_fluctuation(x, tau, p);
            if (got.size() != ref.size()) {
                o.require(false, "box count");
                continue;
            }
            for (std::size_t i = 0; i < got.size(); ++i) {
                worst = std::max(worst, std::abs(got[i] - ref[i]));
                ++comparisons;
            }
        }
    }
    double worst_poly = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const int p = trial % 3;
        const int q = static_cast<int>(rng.below(static_cast<std::uint64_t>(p) + 1));
        const std::size_t n = 4 + rng.below(61);
        std::vector<double> c(static_cast<std::size_t>(q) + 1);
        for (auto& v : c) v = rng.normal();
        std::vector<double> x(n);
        for (std::size_t t = 0; t < n; ++t) {
            const double u = static_cast<double>(t) / static_cast<double>(n);
            for (std::size_t k = c.size(); k-- > 0;) x[t] = x[t] * u + c[k];
        }
        for (std::size_t tau = static_cast<std::size_t>(p) + 2; tau <= n; ++tau) {
            for (const double f : dfa::box_fluctuation(std::span<const double>(x), tau, p)) {
                worst_poly = std::max(worst_poly, f);
            }
        }
    }
    o.detail << "    " << comparisons << " box comparisons, max |diff| = " << worst
             << "; polynomial profiles max F = " << worst_poly << '\n';
    o.require(worst <= 1e-9, "oracle agreement to 1e-9");
    o.require(worst_poly <= 1e-9, "polynomial annihilation to 1e-9");
    return o;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Runs the same analysis into `dir` and returns name -> bytes of every output.
std::map<std::string, std::string> cli_outputs(const cli::RunManifest& base, const fs::path& dir, const char* threads) {
    setenv("HURSTLAB_THREADS", threads, 1);
    cli::RunManifest m = base;
    m.output_dir = dir;
    const auto r = cli::run(m);
    std::map<std::string, std::string> out;
    if (r.exit_code != 0) {
        out["<error>"] = r.error;
        return out;
    }
    for (const auto& f : r.files) out[f.filename().string()] = read_file(f);
    return out;
}

Outcome ac6() {
    Outcome o;
    Rng rng(61);
    double shift_err = 0.0, scale_err = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 512 + rng.below(8000);
        std::vector<double> x(n);
        double level = 0.0;
        for (auto& v : x) v = (level += rng.normal());
        const int p = trial % 3;
        dfa::DfaConfig cfg{p, dfa::default_taus(n, p), std::nullopt};
        const auto base = dfa::fluctuation_curve(std::span<const double>(x), cfg);

        const double shift = 1000.0 * rng.normal();
        auto y = x;
        for (auto& v : y) v += shift;
        const auto shifted = dfa::fluctuation_curve(std::span<const double>(y), cfg);
        for (std::size_t i = 0; i < base.points.size(); ++i) {
            shift_err = std::max(shift_err, std::abs(shifted.points[i].mean_fluct - base.points[i].mean_fluct));
        }
        shift_err = std::max(shift_err, std::abs(shifted.hurst - base.hurst));

        const double c = std::exp(4.0 * rng.normal());
        for (auto& v : y) v = c * (v - shift);
        scale_err = std::max(scale_err, std::abs(dfa::fluctuation_curve(std::span<const double>(y), cfg).hurst - base.hurst));
    }
    o.detail << "    shift: max change " << shift_err << "; scale: max hurst change " << scale_err << '\n';
    o.require(shift_err <= 1e-10, "shift invariance to 1e-10");
    o.require(scale_err <= 1e-10, "scale invariance to 1e-10");

    const fs::path root = fs::temp_directory_path() / ("hurstlab_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(root);
    fs::create_directories(root);
    const char* prev = std::getenv("HURSTLAB_THREADS");
    const std::string saved = prev ? prev : "";

    cli::RunManifest synth;
    synth.command = cli::Command::synth;
    synth.model = cli::Model::levy;
    synth.alpha = 1.6;
    synth.length = 30000;
    synth.bars_per_day = 390;
    synth.seed = 62;
    const auto s1 = cli_outputs(synth, root / "synth1", "1");
    const auto s4 = cli_outputs(synth, root / "synth4", "4");

    cli::RunManifest analyze;
    analyze.command = cli::Command::surrogate_test;
    analyze.input_path = root / "synth1" / "synthetic.csv";
    analyze.windows = {512, 1024, 2048};
    analyze.shift = 37;
    analyze.seed = 63;
    const auto a1 = cli_outputs(analyze, root / "run1", "1");
    const auto a1b = cli_outputs(analyze, root / "run1b", "1");
    const auto a4 = cli_outputs(analyze, root / "run4", "4");

    cli::RunManifest scaling;
    scaling.command = cli::Command::scaling;
    scaling.windows = {512, 1024, 2048};
    scaling.members = 40;
    scaling.seed = 64;
    const auto c1 = cli_outputs(scaling, root / "scaling1", "1");
    const auto c4 = cli_outputs(scaling, root / "scaling4", "4");

    if (prev) {
        setenv("HURSTLAB_THREADS", saved.c_str(), 1);
    } else {
        unsetenv("HURSTLAB_THREADS");
    }
    fs::remove_all(root);

    o.detail << "    synth: " << s1.size() << " files, surrogate-test: " << a1.size() << " files, scaling: " << c1.size()
             << " files\n";
    o.require(!s1.contains("<error>") && !a1.contains("<error>") && !c1.contains("<error>"), "CLI runs succeed");
    o.require(s1 == s4, "synth identical across 1 and 4 threads");
    o.require(a1 == a1b, "surrogate-test identical across two runs");
    o.require(a1 == a4, "surrogate-test identical across 1 and 4 threads");
    o.require(c1 == c4, "scaling identical across 1 and 4 threads");
    return o;
}

Outcome ac7() {
    Outcome o;
    const auto a = synth::generate_fbm({0.4, 150000, 71});
    const auto b = synth::generate_fbm({0.7, 150000, 72});
    std::vector<double> x(a.values().begin(), a.values().end());
    const double last = x.back();
    for (std::size_t i = 1; i < b.size(); ++i) x.push_back(last + b.values()[i]);

    local_hurst::RollingConfig cfg;
    cfg.window = 2048;
    cfg.shift = 100;
    const auto series = local_hurst::rolling_hurst(Profile(x), cfg);
    const auto pdfs = stats::split_subperiods(series, 3);
    const auto blocks = stats::split_blocks(series, 3);
    const auto ks = stats::ks_two_sample(blocks.front(), blocks.back());
    const double gap = std::abs(pdfs.back().mode_bin - pdfs.front().mode_bin);
    o.detail << "    modes " << fmt(pdfs[0].mode_bin, 2) << " / " << fmt(pdfs[1].mode_bin, 2) << " / "
             << fmt(pdfs[2].mode_bin, 2) << ", first-last KS D = " << fmt(ks.statistic) << ", p = " << ks.p_value
             << '\n';
    o.require(gap > 0.15, "mode gap > 0.15");
    o.require(ks.p_value < 0.01, "KS p < 0.01");
    return o;
}

Outcome ac8() {
    Outcome o;
    const std::size_t bars = 390, days = 250;
    auto inc = fixture::gaussian_increments(bars * days - 1, 81);
    Rng rng(82);
    // Overnight gaps: stable-law jumps on every return that crosses a day.
    for (std::size_t d = 1; d < days; ++d) inc[d * bars - 1] = 5.0 * synth::stable_variate(1.5, rng);
    const auto returns = to_returns(fixture::prices_from_increments(inc, 1e-4, bars));
    const auto filtered = resample::remove_eod_returns(returns);
    const Profile raw_p = to_profile(returns, 0.0);
    const Profile filt_p = to_profile(filtered, 0.0);
    o.detail << "    " << returns.crossing_count() << " day-crossing returns removed\n";
    for (const std::size_t L : cli::RunManifest{}.windows) {
        const double before = stats::mean(rolling_values(raw_p, L, 50));
        const double after = stats::mean(rolling_values(filt_p, L, 50));
        o.detail << "    L=" << L << ": <H> " << fmt(before) << " -> " << fmt(after) << '\n';
        o.require(after < before, "filtered mean below raw at L=" + std::to_string(L));
    }
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        const char* id;
        const char* title;
        Outcome (*check)();
    };
    const Criterion criteria[] = {
        {"AC1", "fBm calibration table, L=1024, DFA-1 and DFA-2", ac1},
        {"AC2", "Levy calibration table, DFA-2", ac2},
        {"AC3", "sigma_H ~ L^-gamma scaling", ac3},
        {"AC4", "shuffle decomposition", ac4},
        {"AC5", "oracle equivalence of box fluctuations", ac5},
        {"AC6", "invariance and determinism", ac6},
        {"AC7", "non-stationarity detection", ac7},
        {"AC8", "end-of-day gap removal lowers <H>_L", ac8},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << "    exception: " << e.what() << '\n';
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] %s %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.title, secs);
        std::fputs(o.detail.str().c_str(), stdout);
        std::fflush(stdout);
        failures += !o.pass;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures, std::size(criteria));
    return failures == 0 ? 0 : 1;
}

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include <json.hpp>

#include "hurstlab/cli.hpp"
#include "hurstlab/dfa.hpp"
#include "hurstlab/parallel.hpp"
#include "hurstlab/resample.hpp"
#include "hurstlab/stats.hpp"
#include "hurstlab/synth.hpp"

namespace hurstlab::cli {

using Json = nlohmann::ordered_json;

namespace {

/// Tracks files written by one run; removes them unless the run commits.
class OutputSet {
public:
    explicit OutputSet(std::filesystem::path dir) : dir_(std::move(dir)) {}
    ~OutputSet() {
        if (committed_) return;
        std::error_code ec;
        for (const auto& p : files_) std::filesystem::remove(p, ec);
    }
    OutputSet(const OutputSet&) = delete;
    OutputSet& operator=(const OutputSet&) = delete;

    std::filesystem::path add(const std::string& name) {
        files_.push_back(dir_ / name);
        return files_.back();
    }
    void commit() { committed_ = true; }
    const std::vector<std::filesystem::path>& files() const { return files_; }

    std::vector<std::string> messages;

private:
    std::filesystem::path dir_;
    std::vector<std::filesystem::path> files_;
    bool committed_ = false;
};

bool needs_input(Command c) {
    return c == Command::analyze || c == Command::dfa || c == Command::shuffle_test ||
           c == Command::surrogate_test || c == Command::pdf;
}

bool uses_windows(Command c) {
    return c == Command::analyze || c == Command::shuffle_test || c == Command::surrogate_test ||
           c == Command::scaling;
}

local_hurst::RollingConfig rolling_config(const RunManifest& m, std::size_t window) {
    local_hurst::RollingConfig c;
    c.window = window;
    c.shift = m.shift;
    c.degree = m.degree;
    c.tau_min = m.tau_min;
    c.tau_max = m.tau_max;
    return c;
}

std::vector<std::size_t> sorted_windows(const RunManifest& m) {
    std::vector<std::size_t> w = m.windows;
    std::sort(w.begin(), w.end());
    return w;
}

Json optional_size(const std::optional<std::size_t>& v) { return v ? Json(*v) : Json(nullptr); }

Json manifest_echo(const RunManifest& m) {
    Json j;
    j["command"] = to_string(m.command);
    j["input_path"] = m.input_path.string();
    j["seed"] = m.seed;
    j["windows"] = sorted_windows(m);
    j["shift"] = m.shift;
    j["degree"] = m.degree;
    j["taus_min"] = optional_size(m.tau_min);
    j["taus_max"] = optional_size(m.tau_max);
    j["bins"] = m.bins;
    j["eod_filter"] = m.eod_filter;
    j["session_offset"] = m.session_offset_minutes;
    j["subperiods"] = m.subperiods;
    j["repeats"] = m.repeats;
    j["max_rejected_fraction"] = m.max_rejected_fraction;
    j["model"] = m.model == Model::fbm ? "fbm" : "levy";
    j["h"] = m.h;
    j["alpha"] = m.alpha;
    j["length"] = m.length;
    j["members"] = m.members;
    j["scale"] = m.scale;
    j["bars_per_day"] = m.bars_per_day;
    j["start"] = m.start;
    return j;
}

Json distribution_json(const stats::HurstDistribution& d) {
    return Json{{"n", d.n}, {"mean", d.mean}, {"std", d.std}, {"mode", d.mode_bin}, {"overflow", d.overflow}};
}

Json scaling_json(const stats::ScalingFit& f) {
    Json points = Json::array();
    for (const auto& p : f.points) {
        points.push_back(Json{{"window", p.scale}, {"value", p.value}, {"std", p.spread}, {"samples", p.samples}});
    }
    return Json{{"exponent", f.exponent}, {"stderr", f.stderr_exponent}, {"points", points}, {"warnings", f.warnings}};
}

void write_pdf_csv(const std::filesystem::path& path, const stats::HurstDistribution& d) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + path.string() + "' for writing");
    out << "bin_center,density\n";
    for (std::size_t i = 0; i < d.density.size(); ++i) {
        out << format_real(d.bin_center(i)) << ',' << format_real(d.density[i]) << '\n';
    }
    out.flush();
    if (!out) throw Error("write failed for '" + path.string() + "'");
}

void write_json(const std::filesystem::path& path, const Json& j) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + path.string() + "' for writing");
    out << j.dump(2) << '\n';
    out.flush();
    if (!out) throw Error("write failed for '" + path.string() + "'");
}

std::string window_file(const std::string& stem, std::size_t window) {
    return stem + "_L" + std::to_string(window) + ".csv";
}

struct LoadedInput {
    IngestReport report;
    ReturnSeries returns;
    std::size_t crossings = 0;
    std::size_t eod_removed = 0;
    double x0 = 0.0;
    Timestamp first;
};

LoadedInput load_input(const RunManifest& m, OutputSet& out) {
    auto ingested = ingest_csv(m.input_path, IngestOptions{m.max_rejected_fraction});
    LoadedInput in;
    in.report = std::move(ingested.report);
    out.messages.push_back(in.report.summary());
    in.returns = to_returns(ingested.prices, m.session_offset_minutes);
    in.crossings = in.returns.crossing_count();
    if (m.eod_filter) {
        in.returns = resample::remove_eod_returns(in.returns);
        in.eod_removed = in.crossings;
    }
    in.x0 = std::log(ingested.prices.observations().front().price);
    in.first = ingested.prices.observations().front().timestamp;
    return in;
}

std::vector<Timestamp> profile_timestamps(const LoadedInput& in) {
    std::vector<Timestamp> ts;
    ts.reserve(in.returns.size() + 1);
    ts.push_back(in.first);
    for (const auto& r : in.returns.values()) ts.push_back(r.timestamp);
    return ts;
}

Json input_json(const LoadedInput& in) {
    Json rejections = Json::array();
    for (std::size_t i = 0; i < in.report.rejections.size() && i < 20; ++i) {
        rejections.push_back(Json{{"line", in.report.rejections[i].line}, {"reason", in.report.rejections[i].reason}});
    }
    return Json{{"rows_read", in.report.rows_read},
                {"rows_accepted", in.report.rows_accepted},
                {"rows_rejected", in.report.rejections.size()},
                {"rejections", rejections},
                {"day_crossing_returns", in.crossings},
                {"eod_removed", in.eod_removed},
                {"returns_used", in.returns.size()}};
}

void check_windows_fit(const RunManifest& m, std::size_t n) {
    for (const std::size_t w : sorted_windows(m)) {
        if (w > n) {
            throw ConfigError("window exceeds series: L = " + std::to_string(w) + ", N = " + std::to_string(n));
        }
    }
}

Json base_summary(const RunManifest& m) {
    Json j;
    j["schema_version"] = kSummarySchemaVersion;
    j["library_version"] = kLibraryVersion;
    j["command"] = to_string(m.command);
    j["seed"] = m.seed;
    j["formats"] = Json{{"hurst_series", kHurstSeriesFormat}, {"pdf", kPdfFormat},
                        {"fluctuation", kFluctuationFormat}, {"prices", kPriceFormat},
                        {"scaling", kScalingFormat}, {"summary", kSummarySchemaVersion}};
    j["manifest"] = manifest_echo(m);
    j["input"] = nullptr;
    j["windows"] = Json::array();
    j["sigma_vs_l"] = nullptr;
    j["mean_h_vs_l"] = nullptr;
    j["subperiods"] = nullptr;
    j["shuffle"] = nullptr;
    j["surrogate"] = nullptr;
    j["dfa"] = nullptr;
    j["synth"] = nullptr;
    j["warnings"] = Json::array();
    return j;
}

/// Per-L reductions shared by analyze and pdf.
void add_family_summaries(Json& summary, const RunManifest& m,
                          const std::map<std::size_t, local_hurst::LocalHurstSeries>& family) {
    std::map<std::size_t, std::vector<double>> values;
    for (const auto& [w, s] : family) values.emplace(w, s.values());

    if (values.size() >= 3) {
        bool enough = true;
        for (const auto& [w, v] : values) enough = enough && v.size() >= stats::kMinSamplesPerScale;
        if (enough) {
            try {
                summary["sigma_vs_l"] = scaling_json(stats::sigma_vs_l(values));
            } catch (const EstimationError& e) {
                summary["warnings"].push_back(std::string("sigma_vs_l: ") + e.what());
            }
        } else {
            summary["warnings"].push_back("sigma_vs_l skipped: fewer than " +
                                          std::to_string(stats::kMinSamplesPerScale) + " samples at some window");
        }
    }
    if (values.size() >= 2) summary["mean_h_vs_l"] = scaling_json(stats::mean_h_vs_l(values));

    if (m.subperiods >= 2) {
        Json sub = Json::array();
        for (const auto& [w, s] : family) {
            if (s.samples.size() < m.subperiods * stats::kMinSamplesPerBlock) {
                summary["warnings"].push_back("subperiods skipped at L = " + std::to_string(w) +
                                              ": too few samples");
                continue;
            }
            const auto blocks = stats::split_blocks(s, m.subperiods);
            Json pdfs = Json::array();
            for (const auto& b : blocks) pdfs.push_back(distribution_json(stats::hurst_pdf(b, m.bins)));
            const auto ks = stats::ks_two_sample(blocks.front(), blocks.back());
            sub.push_back(Json{{"window", w},
                               {"blocks", pdfs},
                               {"ks_first_last", Json{{"statistic", ks.statistic}, {"p_value", ks.p_value}}}});
        }
        summary["subperiods"] = sub;
    }
}

struct Pooled {
    double mean_of_means = 0.0;
    double mean_of_stds = 0.0;
    stats::HurstDistribution pdf;
};

/// Rolling H on each of several return series at one window, reduced the way
/// the shuffle table is reported: means and stds averaged over repeats, pdf
/// over the pooled samples.
Pooled rolling_over_repeats(const RunManifest& m, std::size_t window, const std::vector<ReturnSeries>& repeats,
                            double x0) {
    std::vector<double> pooled;
    double sum_mean = 0.0, sum_std = 0.0;
    for (const auto& r : repeats) {
        const auto series = local_hurst::rolling_hurst(to_profile(r, x0, Provenance::resampled), rolling_config(m, window));
        const auto v = series.values();
        sum_mean += stats::mean(v);
        sum_std += stats::stddev(v);
        pooled.insert(pooled.end(), v.begin(), v.end());
    }
    const double k = static_cast<double>(repeats.size());
    return Pooled{sum_mean / k, sum_std / k, stats::hurst_pdf(pooled, m.bins)};
}

double relative_excess(double h) { return (h - 0.5) / 0.5; }

void run_analyze(const RunManifest& m, OutputSet& out, Json& summary) {
    const auto in = load_input(m, out);
    summary["input"] = input_json(in);
    const Profile profile = to_profile(in.returns, in.x0, Provenance::ingested);
    const auto ts = profile_timestamps(in);
    check_windows_fit(m, profile.size());

    std::map<std::size_t, local_hurst::LocalHurstSeries> family;
    for (const std::size_t w : sorted_windows(m)) {
        auto series = local_hurst::rolling_hurst(profile, rolling_config(m, w), ts);
        const auto pdf = stats::hurst_pdf(series.values(), m.bins);
        write_hurst_series_csv(out.add(window_file("hurst_series", w)), series);
        write_pdf_csv(out.add(window_file("pdf", w)), pdf);
        Json entry = distribution_json(pdf);
        entry["window"] = w;
        double mean_stderr = 0.0;
        for (const auto& s : series.samples) mean_stderr += s.fit_stderr;
        entry["mean_fit_stderr"] = mean_stderr / static_cast<double>(series.samples.size());
        summary["windows"].push_back(entry);
        family.emplace(w, std::move(series));
    }
    add_family_summaries(summary, m, family);
}

void run_dfa(const RunManifest& m, OutputSet& out, Json& summary) {
    const auto in = load_input(m, out);
    summary["input"] = input_json(in);
    const Profile profile = to_profile(in.returns, in.x0, Provenance::ingested);
    const auto curve = dfa::estimate_hurst(profile.values(), m.degree, m.tau_min, m.tau_max);

    const auto path = out.add("fluctuation.csv");
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot open '" + path.string() + "' for writing");
    f << "tau,mean_fluct,boxes_used,in_fit\n";
    for (const auto& p : curve.points) {
        f << p.tau << ',' << format_real(p.mean_fluct) << ',' << p.boxes_used << ',' << (p.in_fit ? 1 : 0) << '\n';
    }
    f.flush();
    if (!f) throw Error("write failed for '" + path.string() + "'");

    summary["dfa"] = Json{{"samples", profile.size()},
                          {"degree", m.degree},
                          {"scales", curve.points.size()},
                          {"hurst", curve.hurst},
                          {"stderr", curve.fit_stderr},
                          {"r2", curve.fit_r2}};
}

Profile synth_profile(const RunManifest& m, std::size_t length, std::uint64_t seed) {
    if (m.model == Model::fbm) return synth::generate_fbm(synth::FbmSpec{m.h, length, seed});
    return synth::generate_levy(synth::LevySpec{m.alpha, length, seed});
}

void run_synth(const RunManifest& m, OutputSet& out, Json& summary) {
    const Profile x = synth_profile(m, m.length, m.seed);
    const Timestamp start = parse_timestamp(m.start);
    std::vector<PriceObservation> rows;
    rows.reserve(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        std::int64_t minute = static_cast<std::int64_t>(k);
        if (m.bars_per_day > 0) {
            const auto day = static_cast<std::int64_t>(k / m.bars_per_day);
            minute = day * 24 * 60 + static_cast<std::int64_t>(k % m.bars_per_day);
        }
        const double price = 100.0 * std::exp(m.scale * x.values()[k]);
        if (!std::isfinite(price) || !(price > 0.0)) {
            throw DomainError("synthetic price overflowed at sample " + std::to_string(k) + "; lower --scale");
        }
        rows.push_back({Timestamp{start.minutes + minute}, price});
    }
    const PriceSeries prices(std::move(rows));
    write_price_csv(out.add("synthetic.csv"), prices);
    summary["synth"] = Json{{"model", m.model == Model::fbm ? "fbm" : "levy"},
                            {"h", m.model == Model::fbm ? Json(m.h) : Json(nullptr)},
                            {"alpha", m.model == Model::levy ? Json(m.alpha) : Json(nullptr)},
                            {"length", x.size()},
                            {"scale", m.scale},
                            {"bars_per_day", m.bars_per_day},
                            {"first_price", prices.observations().front().price},
                            {"last_price", prices.observations().back().price}};
}

void run_shuffle_test(const RunManifest& m, OutputSet& out, Json& summary) {
    const auto in = load_input(m, out);
    summary["input"] = input_json(in);
    const Profile profile = to_profile(in.returns, in.x0, Provenance::ingested);
    const auto ts = profile_timestamps(in);
    check_windows_fit(m, profile.size());

    const auto shuffled = resample::shuffle_returns(in.returns, resample::ShuffleSpec{m.repeats, m.seed});
    Json rows = Json::array();
    double lo = 0.0, hi = 0.0;
    for (const std::size_t w : sorted_windows(m)) {
        const auto series = local_hurst::rolling_hurst(profile, rolling_config(m, w), ts);
        const auto pdf = stats::hurst_pdf(series.values(), m.bins);
        write_hurst_series_csv(out.add(window_file("hurst_series", w)), series);
        write_pdf_csv(out.add(window_file("pdf", w)), pdf);

        const Pooled sh = rolling_over_repeats(m, w, shuffled, in.x0);
        write_pdf_csv(out.add(window_file("pdf_shuffled", w)), sh.pdf);
        const double excess = relative_excess(sh.mean_of_means);
        lo = rows.empty() ? excess : std::min(lo, excess);
        hi = rows.empty() ? excess : std::max(hi, excess);
        rows.push_back(Json{{"window", w},
                            {"original", distribution_json(pdf)},
                            {"shuffled", Json{{"mean", sh.mean_of_means},
                                              {"std", sh.mean_of_stds},
                                              {"mode", sh.pdf.mode_bin},
                                              {"n", sh.pdf.n}}},
                            {"delta_h_over_h", excess}});
    }
    summary["shuffle"] = Json{{"repeats", m.repeats}, {"seed", m.seed}, {"windows", rows},
                              {"delta_h_over_h_range", Json::array({lo, hi})}};
}

void run_surrogate_test(const RunManifest& m, OutputSet& out, Json& summary) {
    const auto in = load_input(m, out);
    summary["input"] = input_json(in);
    const Profile profile = to_profile(in.returns, in.x0, Provenance::ingested);
    const auto ts = profile_timestamps(in);
    check_windows_fit(m, profile.size());

    const ReturnSeries surrogate = resample::gaussian_surrogate(in.returns, m.seed);
    const Profile surrogate_profile = to_profile(surrogate, in.x0, Provenance::resampled);
    const auto shuffled =
        resample::shuffle_returns(surrogate, resample::ShuffleSpec{m.repeats, stream_seed(m.seed, 1)});

    Json rows = Json::array();
    for (const std::size_t w : sorted_windows(m)) {
        const auto original = local_hurst::rolling_hurst(profile, rolling_config(m, w), ts);
        const auto original_pdf = stats::hurst_pdf(original.values(), m.bins);
        write_pdf_csv(out.add(window_file("pdf", w)), original_pdf);

        const auto sur = local_hurst::rolling_hurst(surrogate_profile, rolling_config(m, w), ts);
        const auto sur_pdf = stats::hurst_pdf(sur.values(), m.bins);
        write_hurst_series_csv(out.add(window_file("hurst_series_surrogate", w)), sur);
        write_pdf_csv(out.add(window_file("pdf_surrogate", w)), sur_pdf);

        const Pooled sh = rolling_over_repeats(m, w, shuffled, in.x0);
        write_pdf_csv(out.add(window_file("pdf_surrogate_shuffled", w)), sh.pdf);
        rows.push_back(Json{{"window", w},
                            {"original", distribution_json(original_pdf)},
                            {"surrogate", distribution_json(sur_pdf)},
                            {"surrogate_shuffled", Json{{"mean", sh.mean_of_means},
                                                        {"std", sh.mean_of_stds},
                                                        {"mode", sh.pdf.mode_bin},
                                                        {"n", sh.pdf.n}}},
                            {"delta_h_over_h", relative_excess(sh.mean_of_means)}});
    }
    summary["surrogate"] = Json{{"repeats", m.repeats}, {"seed", m.seed}, {"windows", rows}};
}

void run_pdf(const RunManifest& m, OutputSet& out, Json& summary) {
    const auto series = read_hurst_series_csv(m.input_path);
    const auto pdf = stats::hurst_pdf(series.values(), m.bins);
    write_pdf_csv(out.add("pdf.csv"), pdf);
    Json entry = distribution_json(pdf);
    entry["window"] = series.window;
    summary["windows"].push_back(entry);
    if (m.subperiods >= 2) {
        std::map<std::size_t, local_hurst::LocalHurstSeries> family{{series.window, series}};
        add_family_summaries(summary, m, family);
    }
}

void run_scaling(const RunManifest& m, OutputSet& out, Json& summary) {
    std::map<std::size_t, std::vector<double>> family;
    for (const std::size_t w : sorted_windows(m)) {
        std::vector<double> h(m.members);
        parallel_for(m.members, [&](std::size_t k) {
            const Profile x = synth_profile(m, w, synth::member_seed(m.seed, k));
            h[k] = dfa::estimate_hurst(x.values(), m.degree, m.tau_min, m.tau_max).hurst;
        });
        const auto pdf = stats::hurst_pdf(h, m.bins);
        write_pdf_csv(out.add(window_file("pdf", w)), pdf);
        Json entry = distribution_json(pdf);
        entry["window"] = w;
        summary["windows"].push_back(entry);
        family.emplace(w, std::move(h));
    }

    const auto path = out.add("scaling.csv");
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot open '" + path.string() + "' for writing");
    f << "window,mean,std,samples\n";
    for (const auto& [w, h] : family) {
        f << w << ',' << format_real(stats::mean(h)) << ',' << format_real(stats::stddev(h)) << ',' << h.size() << '\n';
    }
    f.flush();
    if (!f) throw Error("write failed for '" + path.string() + "'");

    if (family.size() >= 3) summary["sigma_vs_l"] = scaling_json(stats::sigma_vs_l(family));
    if (family.size() >= 2) summary["mean_h_vs_l"] = scaling_json(stats::mean_h_vs_l(family));
}

}  // namespace

const char* to_string(Command c) {
    switch (c) {
        case Command::analyze: return "analyze";
        case Command::dfa: return "dfa";
        case Command::synth: return "synth";
        case Command::shuffle_test: return "shuffle-test";
        case Command::surrogate_test: return "surrogate-test";
        case Command::pdf: return "pdf";
        case Command::scaling: return "scaling";
    }
    return "unknown";
}

std::optional<Command> parse_command(std::string_view name) {
    for (const Command c : {Command::analyze, Command::dfa, Command::synth, Command::shuffle_test,
                            Command::surrogate_test, Command::pdf, Command::scaling}) {
        if (name == to_string(c)) return c;
    }
    return std::nullopt;
}

void RunManifest::validate() const {
    if (needs_input(command) && input_path.empty()) throw ConfigError("--input is required");
    if (degree < 0) throw ConfigError("--degree must be non-negative");
    if (bins < 1) throw ConfigError("--bins must be at least 1");
    if (repeats < 1) throw ConfigError("--repeats must be at least 1");
    if (subperiods == 1) throw ConfigError("--subperiods must be 0 (off) or at least 2");
    if (!(max_rejected_fraction >= 0.0 && max_rejected_fraction <= 1.0)) {
        throw ConfigError("max rejected fraction must lie in [0, 1]");
    }
    if (tau_min && *tau_min < static_cast<std::size_t>(degree) + 2) {
        throw ConfigError("--taus-min must be at least degree + 2 = " + std::to_string(degree + 2));
    }
    if (tau_min && tau_max && *tau_min > *tau_max) throw ConfigError("--taus-min exceeds --taus-max");

    if (uses_windows(command)) {
        if (windows.empty()) throw ConfigError("--window list is empty");
        std::set<std::size_t> seen;
        for (const std::size_t w : windows) {
            if (!seen.insert(w).second) throw ConfigError("--window " + std::to_string(w) + " given twice");
            try {
                rolling_config(*this, w).validate();
            } catch (const ConfigError& e) {
                throw ConfigError(std::string("--window ") + std::to_string(w) + ": " + e.what());
            }
        }
    }
    if (command == Command::synth || command == Command::scaling) {
        if (model == Model::fbm && !(h > 0.0 && h < 1.0)) throw ConfigError("--hurst must lie in (0, 1)");
        if (model == Model::levy && !(alpha > 0.0 && alpha <= 2.0)) throw ConfigError("--alpha must lie in (0, 2]");
    }
    if (command == Command::synth) {
        if (length < 2) throw ConfigError("--length must be at least 2");
        if (!(scale > 0.0) || !std::isfinite(scale)) throw ConfigError("--scale must be positive");
        parse_timestamp(start);
    }
    if (command == Command::scaling && members < stats::kMinSamplesPerScale) {
        throw ConfigError("--members must be at least " + std::to_string(stats::kMinSamplesPerScale));
    }
}

RunResult run(const RunManifest& manifest) {
    RunResult result;
    try {
        manifest.validate();
        std::filesystem::create_directories(manifest.output_dir);
        OutputSet out(manifest.output_dir);
        Json summary = base_summary(manifest);
        switch (manifest.command) {
            case Command::analyze: run_analyze(manifest, out, summary); break;
            case Command::dfa: run_dfa(manifest, out, summary); break;
            case Command::synth: run_synth(manifest, out, summary); break;
            case Command::shuffle_test: run_shuffle_test(manifest, out, summary); break;
            case Command::surrogate_test: run_surrogate_test(manifest, out, summary); break;
            case Command::pdf: run_pdf(manifest, out, summary); break;
            case Command::scaling: run_scaling(manifest, out, summary); break;
        }
        write_json(out.add("summary.json"), summary);
        out.commit();
        result.files = out.files();
        result.messages = out.messages;
    } catch (const std::exception& e) {
        result.exit_code = 1;
        result.error = std::string(to_string(manifest.command)) + ": " + e.what();
    }
    return result;
}

}  // namespace hurstlab::cli

// hurstlab: local Hurst exponent analysis of minute-bar price series.

#include <iostream>

#include <CLI11.hpp>

#include "hurstlab/cli.hpp"

namespace {

using hurstlab::cli::Command;
using hurstlab::cli::Model;
using hurstlab::cli::RunManifest;

struct Flags {
    RunManifest m;
    std::size_t tau_min = 0;
    std::size_t tau_max = 0;
    std::string model = "fbm";
};

void add_io(CLI::App& sub, Flags& f, bool input_required) {
    auto* in = sub.add_option("-i,--input", f.m.input_path, "Input CSV");
    if (input_required) in->required()->check(CLI::ExistingFile);
    sub.add_option("-o,--out", f.m.output_dir, "Output directory")->capture_default_str();
}

void add_dfa(CLI::App& sub, Flags& f) {
    sub.add_option("--degree", f.m.degree, "Detrending polynomial degree p")->capture_default_str();
    sub.add_option("--taus-min", f.tau_min, "Smallest box size of the scaling fit");
    sub.add_option("--taus-max", f.tau_max, "Largest box size of the scaling fit");
}

void add_rolling(CLI::App& sub, Flags& f) {
    sub.add_option("--window", f.m.windows, "Window lengths L (repeatable or comma separated)")
        ->delimiter(',')
        ->capture_default_str();
    sub.add_option("--shift", f.m.shift, "Window shift in samples")->capture_default_str();
    sub.add_option("--bins", f.m.bins, "Histogram bins on [0,1]")->capture_default_str();
}

void add_ingest(CLI::App& sub, Flags& f) {
    sub.add_flag("--eod-filter", f.m.eod_filter, "Drop returns that cross two trading days");
    sub.add_option("--session-offset", f.m.session_offset_minutes,
                   "Minutes after midnight at which the trading day rolls over")
        ->capture_default_str();
    sub.add_option("--max-rejected", f.m.max_rejected_fraction, "Largest tolerated fraction of rejected rows")
        ->capture_default_str();
}

void add_model(CLI::App& sub, Flags& f) {
    sub.add_option("--model", f.model, "fbm or levy")->check(CLI::IsMember({"fbm", "levy"}))->capture_default_str();
    sub.add_option("--hurst", f.m.h, "Hurst index of the fBm model")->capture_default_str();
    sub.add_option("--alpha", f.m.alpha, "Stability index of the Levy model")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Local Hurst exponent analysis via detrended fluctuation analysis"};
    app.require_subcommand(1);
    app.set_version_flag("--version", hurstlab::cli::kLibraryVersion);

    Flags f;
    app.add_option("--seed", f.m.seed, "Master seed")->capture_default_str();

    auto* analyze = app.add_subcommand("analyze", "Rolling H_L(t) series, pdfs and scale summaries");
    add_io(*analyze, f, true);
    add_dfa(*analyze, f);
    add_rolling(*analyze, f);
    add_ingest(*analyze, f);
    analyze->add_option("--subperiods", f.m.subperiods, "Split each H_L(t) series into k blocks");

    auto* dfa = app.add_subcommand("dfa", "Single DFA-p fluctuation curve over the whole series");
    add_io(*dfa, f, true);
    add_dfa(*dfa, f);
    add_ingest(*dfa, f);

    auto* synth = app.add_subcommand("synth", "Write a synthetic price series");
    add_io(*synth, f, false);
    add_model(*synth, f);
    synth->add_option("--length", f.m.length, "Number of prices")->capture_default_str();
    synth->add_option("--scale", f.m.scale, "Log-price change per unit increment")->capture_default_str();
    synth->add_option("--bars-per-day", f.m.bars_per_day, "Minute bars per trading day (0 = continuous)")
        ->capture_default_str();
    synth->add_option("--start", f.m.start, "First timestamp")->capture_default_str();

    auto* shuffle = app.add_subcommand("shuffle-test", "H_L(t) before and after shuffling the returns");
    add_io(*shuffle, f, true);
    add_dfa(*shuffle, f);
    add_rolling(*shuffle, f);
    add_ingest(*shuffle, f);
    shuffle->add_option("--repeats", f.m.repeats, "Independent shuffles")->capture_default_str();

    auto* surrogate = app.add_subcommand("surrogate-test", "Sign-preserving Gaussian surrogate, raw and shuffled");
    add_io(*surrogate, f, true);
    add_dfa(*surrogate, f);
    add_rolling(*surrogate, f);
    add_ingest(*surrogate, f);
    surrogate->add_option("--repeats", f.m.repeats, "Independent shuffles of the surrogate")->capture_default_str();

    auto* pdf = app.add_subcommand("pdf", "Histogram of a written hurst_series CSV");
    add_io(*pdf, f, true);
    pdf->add_option("--bins", f.m.bins, "Histogram bins on [0,1]")->capture_default_str();
    pdf->add_option("--subperiods", f.m.subperiods, "Split the series into k blocks");

    auto* scaling = app.add_subcommand("scaling", "Ensemble calibration of sigma_H against L");
    add_io(*scaling, f, false);
    add_dfa(*scaling, f);
    add_model(*scaling, f);
    scaling->add_option("--window", f.m.windows, "Series lengths L")->delimiter(',')->capture_default_str();
    scaling->add_option("--members", f.m.members, "Ensemble members per L")->capture_default_str();
    scaling->add_option("--bins", f.m.bins, "Histogram bins on [0,1]")->capture_default_str();

    for (auto* sub : {analyze, dfa, synth, shuffle, surrogate, pdf, scaling}) {
        sub->add_option("--seed", f.m.seed, "Master seed");
    }

    CLI11_PARSE(app, argc, argv);

    for (auto* sub : app.get_subcommands()) {
        f.m.command = *hurstlab::cli::parse_command(sub->get_name());
    }
    if (f.tau_min > 0) f.m.tau_min = f.tau_min;
    if (f.tau_max > 0) f.m.tau_max = f.tau_max;
    f.m.model = f.model == "levy" ? Model::levy : Model::fbm;

    const auto result = hurstlab::cli::run(f.m);
    for (const auto& msg : result.messages) std::cerr << msg << '\n';
    if (result.exit_code != 0) {
        std::cerr << "error: " << result.error << '\n';
        return result.exit_code;
    }
    for (const auto& p : result.files) std::cout << p.string() << '\n';
    return 0;
}

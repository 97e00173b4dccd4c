#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hurstlab/core.hpp"
#include "hurstlab/local_hurst.hpp"

namespace hurstlab::cli {

inline constexpr const char* kLibraryVersion = "0.1.0";
inline constexpr const char* kSummarySchemaVersion = "1.0.0";
inline constexpr int kHurstSeriesFormat = 1;
inline constexpr int kPdfFormat = 1;
inline constexpr int kFluctuationFormat = 1;
inline constexpr int kPriceFormat = 1;
inline constexpr int kScalingFormat = 1;

// ---------------------------------------------------------------------------
// Ingestion

struct IngestOptions {
    double max_rejected_fraction = 0.01;
};

struct Rejection {
    std::size_t line = 0;  // 1-based, header is line 1
    std::string reason;
};

struct IngestReport {
    std::size_t rows_read = 0;
    std::size_t rows_accepted = 0;
    std::vector<Rejection> rejections;

    std::string summary() const;
};

struct IngestResult {
    PriceSeries prices;
    IngestReport report;
};

/// Reads a "timestamp,price" CSV. Rows with malformed fields, non-positive
/// prices or non-increasing timestamps are rejected with their line number.
/// Throws Error when the file is unreadable, the header is wrong, fewer than
/// two rows survive, or the rejected fraction exceeds the configured limit.
IngestResult ingest_csv(const std::filesystem::path& path, const IngestOptions& options = {});

/// Writes prices in the ingestion format.
void write_price_csv(const std::filesystem::path& path, const PriceSeries& prices);

// ---------------------------------------------------------------------------
// Result files

void write_hurst_series_csv(const std::filesystem::path& path, const local_hurst::LocalHurstSeries& series);

/// Parses a file written by write_hurst_series_csv. Window and shift are
/// recovered from the t_index column when there are at least two rows.
local_hurst::LocalHurstSeries read_hurst_series_csv(const std::filesystem::path& path);

/// %.17g formatting used for every real written by the CLI.
std::string format_real(double v);

// ---------------------------------------------------------------------------
// Orchestration

enum class Command { analyze, dfa, synth, shuffle_test, surrogate_test, pdf, scaling };

const char* to_string(Command c);
std::optional<Command> parse_command(std::string_view name);

enum class Model { fbm, levy };

struct RunManifest {
    Command command = Command::analyze;
    std::filesystem::path input_path;
    std::filesystem::path output_dir = ".";
    std::uint64_t seed = 0;

    std::vector<std::size_t> windows{512, 1024, 2048, 4096, 8192, 16384};
    std::size_t shift = 10;
    int degree = 2;
    std::optional<std::size_t> tau_min;
    std::optional<std::size_t> tau_max;
    std::size_t bins = 50;

    bool eod_filter = false;
    std::int64_t session_offset_minutes = 0;
    std::size_t subperiods = 0;  // 0 disables the split
    std::size_t repeats = 5;
    double max_rejected_fraction = 0.01;

    // synth and scaling
    Model model = Model::fbm;
    double h = 0.5;
    double alpha = 1.5;
    std::size_t length = 65536;
    std::size_t members = 500;
    double scale = 1e-4;           // log-price units per unit increment
    std::size_t bars_per_day = 0;  // 0: continuous minute grid
    std::string start = "2003-01-02T09:30";

    /// Checks every field against the owning module's preconditions. Throws
    /// ConfigError naming the first offending field.
    void validate() const;
};

struct RunResult {
    int exit_code = 0;
    std::vector<std::filesystem::path> files;  // in write order
    std::string error;                         // set when exit_code != 0
    std::vector<std::string> messages;         // diagnostics such as the ingest report
};

/// Executes a manifest. Files are written to manifest.output_dir; on failure
/// every file written by this run is removed and the error is returned with
/// the command name as context.
RunResult run(const RunManifest& manifest);

}  // namespace hurstlab::cli

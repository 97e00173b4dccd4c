#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hurstlab/cli.hpp"

namespace hurstlab::cli {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                              : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::optional<double> parse_real(std::string_view s) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

std::optional<std::size_t> parse_index(std::string_view s) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + path.string() + "' for writing");
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw Error("write failed for '" + path.string() + "'");
}

}  // namespace

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string IngestReport::summary() const {
    std::ostringstream s;
    s << "ingest: " << rows_read << " rows read, " << rows_accepted << " accepted, " << rejections.size()
      << " rejected";
    for (std::size_t i = 0; i < rejections.size() && i < 10; ++i) {
        s << "\n  line " << rejections[i].line << ": " << rejections[i].reason;
    }
    if (rejections.size() > 10) s << "\n  ... " << rejections.size() - 10 << " more";
    return s.str();
}

IngestResult ingest_csv(const std::filesystem::path& path, const IngestOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read '" + path.string() + "'");

    std::string line;
    if (!std::getline(in, line)) throw Error("'" + path.string() + "' is empty");
    std::string_view header = line;
    if (header.starts_with("\xEF\xBB\xBF")) header.remove_prefix(3);
    const auto head = split_commas(header);
    if (head.size() != 2 || head[0] != "timestamp" || head[1] != "price") {
        throw Error("'" + path.string() + "': header must be \"timestamp,price\"");
    }

    IngestReport report;
    std::vector<PriceObservation> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        ++report.rows_read;
        const auto fields = split_commas(line);
        if (fields.size() != 2) {
            report.rejections.push_back({line_no, "expected 2 fields"});
            continue;
        }
        Timestamp ts;
        try {
            ts = parse_timestamp(fields[0]);
        } catch (const DomainError& e) {
            report.rejections.push_back({line_no, e.what()});
            continue;
        }
        const auto price = parse_real(fields[1]);
        if (!price) {
            report.rejections.push_back({line_no, "malformed price '" + std::string(fields[1]) + "'"});
            continue;
        }
        if (!(*price > 0.0) || !std::isfinite(*price)) {
            report.rejections.push_back({line_no, "non-positive price '" + std::string(fields[1]) + "'"});
            continue;
        }
        if (!rows.empty() && !(rows.back().timestamp < ts)) {
            report.rejections.push_back({line_no, "timestamp not after previous row"});
            continue;
        }
        rows.push_back({ts, *price});
    }
    report.rows_accepted = rows.size();

    if (rows.size() < 2) {
        throw Error("'" + path.string() + "': fewer than 2 valid rows\n" + report.summary());
    }
    const double rejected = static_cast<double>(report.rejections.size()) / static_cast<double>(report.rows_read);
    if (rejected > options.max_rejected_fraction) {
        throw Error("'" + path.string() + "': " + std::to_string(report.rejections.size()) +
                    " rejected rows exceed the limit of " + format_real(100.0 * options.max_rejected_fraction) +
                    "%\n" + report.summary());
    }
    return IngestResult{PriceSeries(std::move(rows)), std::move(report)};
}

void write_price_csv(const std::filesystem::path& path, const PriceSeries& prices) {
    auto out = open_for_write(path);
    out << "timestamp,price\n";
    for (const auto& o : prices.observations()) out << format_timestamp(o.timestamp) << ',' << format_real(o.price) << '\n';
    finish(out, path);
}

void write_hurst_series_csv(const std::filesystem::path& path, const local_hurst::LocalHurstSeries& series) {
    auto out = open_for_write(path);
    out << "t_index,timestamp,H,stderr\n";
    for (const auto& s : series.samples) {
        out << s.t_index << ',' << (s.timestamp ? format_timestamp(*s.timestamp) : std::string()) << ','
            << format_real(s.h) << ',' << format_real(s.fit_stderr) << '\n';
    }
    finish(out, path);
}

local_hurst::LocalHurstSeries read_hurst_series_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line) || trim(line) != "t_index,timestamp,H,stderr") {
        throw Error("'" + path.string() + "': header must be \"t_index,timestamp,H,stderr\"");
    }

    local_hurst::LocalHurstSeries series;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto f = split_commas(line);
        auto bad = [&] { return Error("'" + path.string() + "' line " + std::to_string(line_no) + ": malformed row"); };
        if (f.size() != 4) throw bad();
        local_hurst::LocalHurstSample s;
        const auto t = parse_index(f[0]);
        const auto h = parse_real(f[2]);
        const auto e = parse_real(f[3]);
        if (!t || !h || !e) throw bad();
        s.t_index = *t;
        if (!f[1].empty()) s.timestamp = parse_timestamp(f[1]);
        s.h = *h;
        s.fit_stderr = *e;
        series.samples.push_back(s);
    }
    if (series.samples.size() >= 2) {
        series.shift = series.samples[1].t_index - series.samples[0].t_index;
    }
    if (!series.samples.empty()) series.window = series.samples[0].t_index + 1;
    return series;
}

}  // namespace hurstlab::cli

#include "hurstlab/core.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>

namespace hurstlab {

namespace {

constexpr std::int64_t kMinutesPerDay = 24 * 60;

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

int parse_field(std::string_view text, std::size_t pos, std::size_t len) {
    if (pos + len > text.size()) throw DomainError("malformed timestamp '" + std::string(text) + "'");
    int value = 0;
    const char* first = text.data() + pos;
    auto [ptr, ec] = std::from_chars(first, first + len, value);
    if (ec != std::errc{} || ptr != first + len) {
        throw DomainError("malformed timestamp '" + std::string(text) + "'");
    }
    return value;
}

}  // namespace

std::int64_t trading_day(Timestamp ts, std::int64_t session_offset_minutes) {
    return floor_div(ts.minutes - session_offset_minutes, kMinutesPerDay);
}

Timestamp parse_timestamp(std::string_view text) {
    // YYYY-MM-DDTHH:MM[:SS]
    auto bad = [&] { return DomainError("malformed timestamp '" + std::string(text) + "'"); };
    if (text.size() != 16 && text.size() != 19) throw bad();
    if (text[4] != '-' || text[7] != '-' || (text[10] != 'T' && text[10] != ' ') || text[13] != ':') {
        throw bad();
    }
    if (text.size() == 19 && text[16] != ':') throw bad();

    const int y = parse_field(text, 0, 4);
    const int mo = parse_field(text, 5, 2);
    const int d = parse_field(text, 8, 2);
    const int hh = parse_field(text, 11, 2);
    const int mm = parse_field(text, 14, 2);
    if (text.size() == 19) {
        const int ss = parse_field(text, 17, 2);
        if (ss > 59) throw bad();
    }
    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(mo)},
                                          std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || hh > 23 || mm > 59) throw bad();

    const auto days = std::chrono::sys_days{ymd}.time_since_epoch().count();
    return Timestamp{static_cast<std::int64_t>(days) * kMinutesPerDay + hh * 60 + mm};
}

std::string format_timestamp(Timestamp ts) {
    const std::int64_t day = floor_div(ts.minutes, kMinutesPerDay);
    const std::int64_t minute_of_day = ts.minutes - day * kMinutesPerDay;
    const std::chrono::year_month_day ymd{std::chrono::sys_days{std::chrono::days{day}}};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(minute_of_day / 60), static_cast<int>(minute_of_day % 60));
    return buf;
}

PriceSeries::PriceSeries(std::vector<PriceObservation> observations)
    : observations_(std::move(observations)) {
    if (observations_.size() < 2) {
        throw DomainError("price series needs at least 2 observations, got " +
                          std::to_string(observations_.size()));
    }
    for (std::size_t i = 0; i < observations_.size(); ++i) {
        const double p = observations_[i].price;
        if (!(p > 0.0) || !std::isfinite(p)) {
            throw DomainError("non-positive or non-finite price at index " + std::to_string(i));
        }
        if (i > 0 && !(observations_[i - 1].timestamp < observations_[i].timestamp)) {
            throw DomainError("timestamps not strictly increasing at index " + std::to_string(i));
        }
    }
}

ReturnSeries::ReturnSeries(std::vector<Return> values) : values_(std::move(values)) {}

std::size_t ReturnSeries::crossing_count() const {
    std::size_t n = 0;
    for (const auto& r : values_) n += r.crosses_day ? 1 : 0;
    return n;
}

const char* to_string(Provenance p) {
    switch (p) {
        case Provenance::ingested: return "ingested";
        case Provenance::synthetic_fbm: return "synthetic-fbm";
        case Provenance::synthetic_levy: return "synthetic-levy";
        case Provenance::resampled: return "resampled";
    }
    return "unknown";
}

Profile::Profile(std::vector<double> values, std::optional<Provenance> provenance)
    : values_(std::move(values)), provenance_(provenance) {
    if (values_.size() < 2) {
        throw DomainError("profile needs at least 2 samples, got " + std::to_string(values_.size()));
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw DomainError("non-finite profile value at index " + std::to_string(i));
        }
    }
}

Profile Profile::slice(std::size_t first, std::size_t count) const {
    if (first + count > values_.size()) throw ConfigError("profile slice out of range");
    return Profile(std::vector<double>(values_.begin() + static_cast<std::ptrdiff_t>(first),
                                       values_.begin() + static_cast<std::ptrdiff_t>(first + count)),
                   provenance_);
}

ReturnSeries to_returns(const PriceSeries& prices, std::int64_t session_offset_minutes) {
    const auto obs = prices.observations();
    std::vector<Return> out;
    out.reserve(obs.size() - 1);
    for (std::size_t k = 0; k + 1 < obs.size(); ++k) {
        // PriceSeries already guarantees positivity; this guards hand-built inputs.
        if (!(obs[k].price > 0.0)) throw DomainError("non-positive price at index " + std::to_string(k));
        if (!(obs[k + 1].price > 0.0)) throw DomainError("non-positive price at index " + std::to_string(k + 1));
        out.push_back(Return{
            obs[k + 1].timestamp,
            std::log(obs[k + 1].price / obs[k].price),
            trading_day(obs[k].timestamp, session_offset_minutes) !=
                trading_day(obs[k + 1].timestamp, session_offset_minutes),
        });
    }
    return ReturnSeries(std::move(out));
}

Profile to_profile(std::span<const double> increments, double x0, std::optional<Provenance> provenance) {
    if (increments.empty()) {
        throw DomainError("cannot build a profile from an empty return series");
    }
    std::vector<double> x(increments.size() + 1);
    x[0] = x0;
    for (std::size_t k = 0; k < increments.size(); ++k) {
        if (!std::isfinite(increments[k])) {
            throw DomainError("non-finite return at index " + std::to_string(k));
        }
        x[k + 1] = x[k] + increments[k];
    }
    return Profile(std::move(x), provenance);
}

Profile to_profile(const ReturnSeries& returns, double x0, std::optional<Provenance> provenance) {
    std::vector<double> r;
    r.reserve(returns.size());
    for (const auto& v : returns.values()) r.push_back(v.value);
    return to_profile(std::span<const double>(r), x0, provenance);
}

}  // namespace hurstlab

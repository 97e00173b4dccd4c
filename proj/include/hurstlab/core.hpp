#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hurstlab {

/// Base class for every error raised by the library. The CLI maps these to a
/// nonzero exit status with the message echoed on stderr.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid numeric input (non-positive price, H outside (0,1), ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Parameters that are inconsistent with each other or with the data length.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// The estimator could not produce a value (too few scales, too short input).
class EstimationError : public Error {
public:
    using Error::Error;
};

/// Minutes since 1970-01-01 00:00 UTC.
struct Timestamp {
    std::int64_t minutes = 0;

    friend auto operator<=>(const Timestamp&, const Timestamp&) = default;
};

/// Days since epoch of the trading day `ts` belongs to. A positive
/// `session_offset_minutes` moves the day boundary later than midnight.
std::int64_t trading_day(Timestamp ts, std::int64_t session_offset_minutes = 0);

/// Parses "YYYY-MM-DDTHH:MM" (a space separator and a trailing ":SS" are
/// accepted; seconds are truncated). Throws DomainError on malformed text.
Timestamp parse_timestamp(std::string_view text);

/// Formats as "YYYY-MM-DDTHH:MM".
std::string format_timestamp(Timestamp ts);

struct PriceObservation {
    Timestamp timestamp;
    double price = 0.0;
};

/// Ordered price observations. Construction validates: at least two rows,
/// strictly increasing timestamps, strictly positive finite prices.
class PriceSeries {
public:
    explicit PriceSeries(std::vector<PriceObservation> observations);

    std::span<const PriceObservation> observations() const { return observations_; }
    std::size_t size() const { return observations_.size(); }

private:
    std::vector<PriceObservation> observations_;
};

struct Return {
    Timestamp timestamp;  // timestamp of the closing observation
    double value = 0.0;
    bool crosses_day = false;
};

/// Log returns. May be empty (e.g. after filtering); consumers that need a
/// minimum length check it themselves.
class ReturnSeries {
public:
    ReturnSeries() = default;
    explicit ReturnSeries(std::vector<Return> values);

    std::span<const Return> values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    bool empty() const { return values_.empty(); }

    std::size_t crossing_count() const;

private:
    std::vector<Return> values_;
};

enum class Provenance { ingested, synthetic_fbm, synthetic_levy, resampled };

const char* to_string(Provenance p);

/// Uniform-step path x(0..N-1) that DFA operates on. N >= 2, all values finite.
class Profile {
public:
    explicit Profile(std::vector<double> values,
                     std::optional<Provenance> provenance = std::nullopt);

    std::span<const double> values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    std::optional<Provenance> provenance() const { return provenance_; }

    /// Copy of the samples [first, first + count).
    Profile slice(std::size_t first, std::size_t count) const;

private:
    std::vector<double> values_;
    std::optional<Provenance> provenance_;
};

/// r[k] = ln(price[k+1] / price[k]). crosses_day is set when the two bounding
/// observations fall on different trading days.
ReturnSeries to_returns(const PriceSeries& prices, std::int64_t session_offset_minutes = 0);

/// Cumulative sum starting at x0; the result has returns.size() + 1 samples.
Profile to_profile(const ReturnSeries& returns, double x0,
                   std::optional<Provenance> provenance = std::nullopt);

/// Cumulative sum of raw increments starting at x0.
Profile to_profile(std::span<const double> increments, double x0,
                   std::optional<Provenance> provenance = std::nullopt);

}  // namespace hurstlab

#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace teflow {

// Calendar day. Ordered and hashable through its day count.
class Date {
public:
    constexpr Date() = default;
    constexpr explicit Date(std::chrono::sys_days days) : days_(days) {}
    constexpr Date(int y, unsigned m, unsigned d)
        : days_(std::chrono::year{y} / std::chrono::month{m} / std::chrono::day{d}) {}

    // Accepts YYYY-MM-DD, YYYY/MM/DD and YYYYMMDD. Throws DataError otherwise.
    static Date parse(std::string_view text);

    std::string iso() const;
    constexpr std::chrono::sys_days days() const { return days_; }
    constexpr Date next_day() const { return Date{days_ + std::chrono::days{1}}; }
    constexpr std::chrono::weekday weekday() const { return std::chrono::weekday{days_}; }

    constexpr auto operator<=>(const Date&) const = default;

private:
    std::chrono::sys_days days_{};
};

struct PricePoint {
    Date date;
    double close = 0.0;
};

// Daily close prices for one market. Dates strictly increasing, closes > 0.
struct PriceSeries {
    std::string symbol;
    std::vector<PricePoint> observations;

    std::size_t size() const { return observations.size(); }

    // Throws DataError if the ordering or positivity invariant is broken.
    void validate() const;
};

struct ReturnSeries {
    std::string symbol;
    std::vector<Date> dates;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
};

struct AlignedPair {
    ReturnSeries left;
    ReturnSeries right;
    std::vector<Date> dates;
};

enum class PriceFormat { yahoo_ohlc, two_column };

enum class AlignMode { pairwise, global };

struct ParseOptions {
    PriceFormat format = PriceFormat::two_column;
    // Column used for yahoo-ohlc files.
    std::string price_column = "Close";
    // Symbol to stamp on the series; defaults to the file stem.
    std::string symbol;
};

struct ParseResult {
    PriceSeries series;
    std::size_t dropped_rows = 0;
};

ParseResult parse_price_csv(const std::filesystem::path& path, const ParseOptions& options = {});
ParseResult parse_price_csv_text(std::string_view text, const ParseOptions& options = {});

// Writes "date,close" followed by one row per observation, closes in
// shortest round-trip form.
std::string format_two_column_csv(const PriceSeries& series);
void write_two_column_csv(const std::filesystem::path& path, const PriceSeries& series);

PriceFormat parse_price_format(std::string_view name);
AlignMode parse_align_mode(std::string_view name);
std::string_view to_string(PriceFormat format);
std::string_view to_string(AlignMode mode);

// Header "date,return".
std::string format_returns_csv(const ReturnSeries& returns);
void write_returns_csv(const std::filesystem::path& path, const ReturnSeries& returns);
ReturnSeries read_returns_csv(const std::filesystem::path& path);

// Log returns stamped with the later of the two dates.
ReturnSeries log_returns(const PriceSeries& prices);

// Restricts both series to their common dates. With lag > 0 the right series
// is delayed: left[p] is paired with right[p - lag] on the common calendar and
// the pair is stamped with the left dates.
AlignedPair align(const ReturnSeries& left, const ReturnSeries& right, int lag = 0);

// Restricts every series to the dates shared by all of them.
std::vector<ReturnSeries> align_global(const std::vector<ReturnSeries>& panel);

// Sorted intersection of two strictly increasing date vectors.
std::vector<Date> intersect_dates(const std::vector<Date>& a, const std::vector<Date>& b);

struct ManifestEntry {
    std::string symbol;
    std::filesystem::path path;
    std::string region;
};

// CSV with header "symbol,path,region". Relative paths resolve against the
// manifest's directory.
std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const std::vector<ManifestEntry>& entries);

}  // namespace teflow

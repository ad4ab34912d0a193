#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "teflow/ingest.hpp"

namespace teflow {

enum class SchemeKind { fixed_threshold, terciles, external };

// How a SymbolSequence was produced. For terciles the two thresholds are the
// empirical quantiles that were used.
struct Scheme {
    SchemeKind kind = SchemeKind::external;
    double threshold = 0.0;
    double lower_quantile = 0.0;
    double upper_quantile = 0.0;

    std::string describe() const;
};

// Discrete state sequence over the alphabet [0, alphabet). Dates are carried
// through from the source returns and may be empty for synthetic sequences,
// in which case alignment is positional.
struct SymbolSequence {
    std::string symbol;
    std::vector<Date> dates;
    std::vector<std::uint8_t> states;
    int alphabet = 3;
    Scheme scheme;

    std::size_t size() const { return states.size(); }
    bool dated() const { return !dates.empty(); }

    // Throws DataError on a state outside the alphabet or a date/state
    // length mismatch.
    void validate() const;
};

inline constexpr double kDefaultThreshold = 0.04;

// 0 for x <= -d, 1 for -d < x < d, 2 for x >= d.
std::uint8_t classify_fixed(double x, double d);

SymbolSequence symbolize_fixed(const ReturnSeries& returns, double d);

// Thresholds at the 1/3 and 2/3 empirical quantiles:
// 0 for x <= q1, 1 for q1 < x <= q2, 2 for x > q2. When q1 == q2 the values
// equal to that threshold map to 1.
SymbolSequence symbolize_terciles(const ReturnSeries& returns);

// Single-line digit string, e.g. "0121". Requires alphabet <= 10.
std::string to_digit_string(const SymbolSequence& seq);
SymbolSequence from_digit_string(std::string_view digits, int alphabet, std::string symbol = {});

// Reads a .sym file: either a bare digit line, or a CSV with header
// "date,state".
SymbolSequence read_symbol_file(const std::filesystem::path& path, int alphabet);
void write_symbol_file(const std::filesystem::path& path, const SymbolSequence& seq);

// Pair of equal-length sequences on a common calendar (or positional).
struct AlignedSymbols {
    SymbolSequence target;
    SymbolSequence source;
};

// Date-intersects two dated sequences; undated sequences must have equal
// length. With lag > 0 the source is delayed by lag steps.
AlignedSymbols align_symbols(const SymbolSequence& target, const SymbolSequence& source, int lag = 0);

}  // namespace teflow

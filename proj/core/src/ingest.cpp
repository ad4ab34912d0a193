#include "teflow/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <unordered_map>

#include "teflow/error.hpp"
#include "teflow/textio.hpp"

namespace teflow {

namespace {

bool parse_uint(std::string_view s, unsigned& out) {
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

bool parse_int(std::string_view s, int& out) {
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

std::string at_line(std::size_t line) {
    return " (line " + std::to_string(line) + ")";
}

constexpr std::string_view kYahooHeader = "Date,Open,High,Low,Close,Adj Close,Volume";
constexpr std::string_view kTwoColumnHeader = "date,close";

}  // namespace

Date Date::parse(std::string_view text) {
    text = trim(text);
    int y = 0;
    unsigned m = 0;
    unsigned d = 0;
    bool ok = false;
    if (text.size() == 10 && (text[4] == '-' || text[4] == '/') && text[7] == text[4]) {
        ok = parse_int(text.substr(0, 4), y) && parse_uint(text.substr(5, 2), m) &&
             parse_uint(text.substr(8, 2), d);
    } else if (text.size() == 8) {
        ok = parse_int(text.substr(0, 4), y) && parse_uint(text.substr(4, 2), m) &&
             parse_uint(text.substr(6, 2), d);
    }
    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m},
                                          std::chrono::day{d}};
    if (!ok || !ymd.ok()) {
        throw DataError("unparseable date '" + std::string(text) + "'");
    }
    return Date{std::chrono::sys_days{ymd}};
}

std::string Date::iso() const {
    const std::chrono::year_month_day ymd{days_};
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

void PriceSeries::validate() const {
    for (std::size_t n = 0; n < observations.size(); ++n) {
        if (!(observations[n].close > 0.0) || !std::isfinite(observations[n].close)) {
            throw DataError(symbol + ": non-positive price on " + observations[n].date.iso());
        }
        if (n > 0 && observations[n].date <= observations[n - 1].date) {
            throw DataError(symbol + ": dates not strictly increasing at " +
                            observations[n].date.iso());
        }
    }
}

ParseResult parse_price_csv_text(std::string_view text, const ParseOptions& options) {
    ParseResult result;
    result.series.symbol = options.symbol;

    if (text.substr(0, 3) == "\xEF\xBB\xBF") {
        text.remove_prefix(3);
    }

    std::size_t line_no = 0;
    std::size_t date_col = 0;
    std::size_t price_col = 1;
    std::size_t expected_fields = 2;
    bool header_seen = false;

    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (trim(line).empty()) {
            if (pos > text.size()) break;
            continue;
        }

        if (!header_seen) {
            header_seen = true;
            const auto fields = split_csv_line(line);
            if (options.format == PriceFormat::yahoo_ohlc) {
                if (line != kYahooHeader) {
                    throw DataError("header does not match yahoo-ohlc format" + at_line(line_no));
                }
                expected_fields = fields.size();
                const auto it = std::find(fields.begin(), fields.end(), options.price_column);
                if (it == fields.end()) {
                    throw DataError("price column '" + options.price_column + "' not in header");
                }
                price_col = static_cast<std::size_t>(it - fields.begin());
            } else if (line != kTwoColumnHeader) {
                throw DataError("header does not match two-column format" + at_line(line_no));
            }
            continue;
        }

        const auto fields = split_csv_line(line);
        if (fields.size() != expected_fields) {
            throw DataError("unparseable row: expected " + std::to_string(expected_fields) +
                            " fields" + at_line(line_no));
        }
        Date date;
        try {
            date = Date::parse(fields[date_col]);
        } catch (const DataError& e) {
            throw DataError(std::string(e.what()) + at_line(line_no));
        }
        const auto price_text = trim(fields[price_col]);
        if (price_text.empty() || price_text == "null" || price_text == "NA") {
            ++result.dropped_rows;
            continue;
        }
        double close = 0.0;
        if (!parse_number(price_text, close) || std::isnan(close)) {
            throw DataError("unparseable price '" + std::string(price_text) + "'" + at_line(line_no));
        }
        if (!(close > 0.0) || !std::isfinite(close)) {
            throw DataError("non-positive price" + at_line(line_no));
        }
        if (!result.series.observations.empty()) {
            const auto prev = result.series.observations.back().date;
            if (date == prev) {
                throw DataError("duplicate date " + date.iso() + at_line(line_no));
            }
            if (date < prev) {
                throw DataError("date " + date.iso() + " out of order" + at_line(line_no));
            }
        }
        result.series.observations.push_back({date, close});
    }
    if (!header_seen) {
        throw DataError("empty price file");
    }
    return result;
}

ParseResult parse_price_csv(const std::filesystem::path& path, const ParseOptions& options) {
    ParseOptions opts = options;
    if (opts.symbol.empty()) {
        opts.symbol = path.stem().string();
    }
    const auto text = read_file(path);
    try {
        return parse_price_csv_text(text, opts);
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

std::string format_two_column_csv(const PriceSeries& series) {
    std::string out{kTwoColumnHeader};
    out += '\n';
    for (const auto& obs : series.observations) {
        out += obs.date.iso();
        out += ',';
        out += format_number(obs.close);
        out += '\n';
    }
    return out;
}

void write_two_column_csv(const std::filesystem::path& path, const PriceSeries& series) {
    write_file(path, format_two_column_csv(series));
}

PriceFormat parse_price_format(std::string_view name) {
    if (name == "yahoo-ohlc") return PriceFormat::yahoo_ohlc;
    if (name == "two-column") return PriceFormat::two_column;
    throw UsageError("unknown price format '" + std::string(name) + "'");
}

AlignMode parse_align_mode(std::string_view name) {
    if (name == "pairwise" || name == "pairwise-intersection") return AlignMode::pairwise;
    if (name == "global" || name == "global-intersection") return AlignMode::global;
    throw UsageError("unknown alignment mode '" + std::string(name) + "'");
}

std::string_view to_string(PriceFormat format) {
    return format == PriceFormat::yahoo_ohlc ? "yahoo-ohlc" : "two-column";
}

std::string_view to_string(AlignMode mode) {
    return mode == AlignMode::pairwise ? "pairwise-intersection" : "global-intersection";
}

ReturnSeries log_returns(const PriceSeries& prices) {
    if (prices.size() < 2) {
        throw DataError(prices.symbol + ": need at least 2 prices for log returns");
    }
    ReturnSeries r;
    r.symbol = prices.symbol;
    r.dates.reserve(prices.size() - 1);
    r.values.reserve(prices.size() - 1);
    for (std::size_t n = 1; n < prices.size(); ++n) {
        const auto& prev = prices.observations[n - 1];
        const auto& cur = prices.observations[n];
        r.dates.push_back(cur.date);
        r.values.push_back(std::log(cur.close) - std::log(prev.close));
    }
    return r;
}

std::string format_returns_csv(const ReturnSeries& returns) {
    std::string out = "date,return\n";
    for (std::size_t n = 0; n < returns.size(); ++n) {
        out += returns.dates[n].iso();
        out += ',';
        out += format_number(returns.values[n]);
        out += '\n';
    }
    return out;
}

void write_returns_csv(const std::filesystem::path& path, const ReturnSeries& returns) {
    write_file(path, format_returns_csv(returns));
}

ReturnSeries read_returns_csv(const std::filesystem::path& path) {
    const auto text = read_file(path);
    ReturnSeries r;
    r.symbol = path.stem().string();
    std::size_t pos = 0;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (pos < text.size()) {
        auto eol = text.find('\n', pos);
        if (eol == std::string::npos) eol = text.size();
        const std::string_view line = trim(std::string_view(text).substr(pos, eol - pos));
        pos = eol + 1;
        ++line_no;
        if (line.empty()) continue;
        if (!header_seen) {
            header_seen = true;
            if (line != "date,return") {
                throw DataError(path.string() + ": expected header date,return");
            }
            continue;
        }
        const auto fields = split_csv_line(line);
        double v = 0.0;
        if (fields.size() != 2 || !parse_number(fields[1], v) || std::isnan(v)) {
            throw DataError(path.string() + ": unparseable row" + at_line(line_no));
        }
        Date d;
        try {
            d = Date::parse(fields[0]);
        } catch (const DataError& e) {
            throw DataError(path.string() + ": " + e.what() + at_line(line_no));
        }
        if (!r.dates.empty() && d <= r.dates.back()) {
            throw DataError(path.string() + ": dates not strictly increasing" + at_line(line_no));
        }
        r.dates.push_back(d);
        r.values.push_back(v);
    }
    return r;
}

std::vector<Date> intersect_dates(const std::vector<Date>& a, const std::vector<Date>& b) {
    std::vector<Date> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

namespace {

ReturnSeries restrict_to(const ReturnSeries& s, const std::vector<Date>& dates) {
    ReturnSeries out;
    out.symbol = s.symbol;
    out.dates = dates;
    out.values.reserve(dates.size());
    std::size_t j = 0;
    for (const auto& d : dates) {
        while (s.dates[j] < d) ++j;
        out.values.push_back(s.values[j]);
    }
    return out;
}

}  // namespace

AlignedPair align(const ReturnSeries& left, const ReturnSeries& right, int lag) {
    if (left.size() == 0 || right.size() == 0) {
        throw DataError("align: empty series");
    }
    if (lag < 0) {
        throw UsageError("align: lag must be non-negative");
    }
    auto common = intersect_dates(left.dates, right.dates);
    if (common.empty()) {
        throw DataError("align: no common dates between " + left.symbol + " and " + right.symbol);
    }
    AlignedPair pair;
    pair.left = restrict_to(left, common);
    pair.right = restrict_to(right, common);
    if (lag > 0) {
        const auto shift = static_cast<std::size_t>(lag);
        if (common.size() <= shift) {
            throw DataError("align: lag exceeds common window");
        }
        pair.left.dates.erase(pair.left.dates.begin(), pair.left.dates.begin() + lag);
        pair.left.values.erase(pair.left.values.begin(), pair.left.values.begin() + lag);
        pair.right.values.resize(pair.right.values.size() - shift);
        pair.right.dates = pair.left.dates;
    }
    pair.dates = pair.left.dates;
    return pair;
}

std::vector<ReturnSeries> align_global(const std::vector<ReturnSeries>& panel) {
    if (panel.empty()) {
        return {};
    }
    auto common = panel.front().dates;
    for (std::size_t i = 1; i < panel.size(); ++i) {
        common = intersect_dates(common, panel[i].dates);
    }
    if (common.empty()) {
        throw DataError("align: panel has no globally common dates");
    }
    std::vector<ReturnSeries> out;
    out.reserve(panel.size());
    for (const auto& s : panel) {
        out.push_back(restrict_to(s, common));
    }
    return out;
}

std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path) {
    const auto text = read_file(path);
    const auto base = path.parent_path();
    std::vector<ManifestEntry> entries;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto eol = text.find('\n', pos);
        if (eol == std::string::npos) eol = text.size();
        std::string_view line(text.data() + pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        const auto fields = split_csv_line(line);
        if (!header_seen) {
            header_seen = true;
            if (fields.size() != 3 || trim(fields[0]) != "symbol" || trim(fields[1]) != "path" ||
                trim(fields[2]) != "region") {
                throw DataError(path.string() + ": manifest header must be symbol,path,region");
            }
            continue;
        }
        if (fields.size() != 3) {
            throw DataError(path.string() + ": malformed manifest row" + at_line(line_no));
        }
        ManifestEntry e;
        e.symbol = std::string(trim(fields[0]));
        e.path = std::filesystem::path(std::string(trim(fields[1])));
        e.region = std::string(trim(fields[2]));
        if (e.symbol.empty()) {
            throw DataError(path.string() + ": empty symbol" + at_line(line_no));
        }
        if (e.path.is_relative()) {
            e.path = base / e.path;
        }
        for (const auto& other : entries) {
            if (other.symbol == e.symbol) {
                throw DataError(path.string() + ": duplicate symbol " + e.symbol + at_line(line_no));
            }
        }
        entries.push_back(std::move(e));
    }
    return entries;
}

void write_manifest(const std::filesystem::path& path, const std::vector<ManifestEntry>& entries) {
    std::string out = "symbol,path,region\n";
    for (const auto& e : entries) {
        out += e.symbol + "," + e.path.generic_string() + "," + e.region + "\n";
    }
    write_file(path, out);
}

}  // namespace teflow

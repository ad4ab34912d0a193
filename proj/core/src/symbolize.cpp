#include "teflow/symbolize.hpp"

#include <algorithm>
#include <cmath>

#include "teflow/error.hpp"
#include "teflow/textio.hpp"

namespace teflow {

std::string Scheme::describe() const {
    switch (kind) {
        case SchemeKind::fixed_threshold:
            return "fixed-threshold(d=" + format_number(threshold) + ")";
        case SchemeKind::terciles:
            return "terciles(q1=" + format_number(lower_quantile) +
                   ",q2=" + format_number(upper_quantile) + ")";
        case SchemeKind::external:
            break;
    }
    return "external";
}

void SymbolSequence::validate() const {
    if (alphabet < 2 || alphabet > 255) {
        throw DataError(symbol + ": alphabet size must be in [2, 255]");
    }
    if (!dates.empty() && dates.size() != states.size()) {
        throw DataError(symbol + ": date and state vectors differ in length");
    }
    for (auto s : states) {
        if (s >= alphabet) {
            throw DataError(symbol + ": state " + std::to_string(s) + " outside alphabet");
        }
    }
}

std::uint8_t classify_fixed(double x, double d) {
    if (x <= -d) return 0;
    if (x >= d) return 2;
    return 1;
}

SymbolSequence symbolize_fixed(const ReturnSeries& returns, double d) {
    if (!(d > 0.0) || !std::isfinite(d)) {
        throw UsageError("threshold d must be positive");
    }
    SymbolSequence seq;
    seq.symbol = returns.symbol;
    seq.dates = returns.dates;
    seq.alphabet = 3;
    seq.scheme = {SchemeKind::fixed_threshold, d, 0.0, 0.0};
    seq.states.reserve(returns.size());
    for (double x : returns.values) {
        seq.states.push_back(classify_fixed(x, d));
    }
    return seq;
}

SymbolSequence symbolize_terciles(const ReturnSeries& returns) {
    const auto n = returns.size();
    if (n < 3) {
        throw DataError(returns.symbol + ": tercile symbolization needs at least 3 samples");
    }
    auto sorted = returns.values;
    std::sort(sorted.begin(), sorted.end());
    // q1 is the smallest value with at least n/3 samples at or below it.
    const double q1 = sorted[(n + 2) / 3 - 1];
    const double q2 = sorted[(2 * n + 2) / 3 - 1];

    SymbolSequence seq;
    seq.symbol = returns.symbol;
    seq.dates = returns.dates;
    seq.alphabet = 3;
    seq.scheme = {SchemeKind::terciles, 0.0, q1, q2};
    seq.states.reserve(n);
    for (double x : returns.values) {
        std::uint8_t s;
        if (q1 == q2) {
            s = x < q1 ? 0 : (x > q2 ? 2 : 1);
        } else {
            s = x <= q1 ? 0 : (x <= q2 ? 1 : 2);
        }
        seq.states.push_back(s);
    }
    return seq;
}

std::string to_digit_string(const SymbolSequence& seq) {
    if (seq.alphabet > 10) {
        throw UsageError("digit strings need an alphabet of at most 10 states");
    }
    std::string out;
    out.reserve(seq.size());
    for (auto s : seq.states) {
        out.push_back(static_cast<char>('0' + s));
    }
    return out;
}

SymbolSequence from_digit_string(std::string_view digits, int alphabet, std::string symbol) {
    SymbolSequence seq;
    seq.symbol = std::move(symbol);
    seq.alphabet = alphabet;
    for (char c : trim(digits)) {
        if (c < '0' || c > '9' || c - '0' >= alphabet) {
            throw DataError("invalid state digit '" + std::string(1, c) + "'");
        }
        seq.states.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    seq.validate();
    return seq;
}

SymbolSequence read_symbol_file(const std::filesystem::path& path, int alphabet) {
    const auto text = read_file(path);
    const auto first_eol = text.find('\n');
    const std::string_view first = trim(std::string_view(text).substr(0, first_eol));
    if (first != "date,state") {
        auto seq = from_digit_string(first, alphabet, path.stem().string());
        return seq;
    }
    SymbolSequence seq;
    seq.symbol = path.stem().string();
    seq.alphabet = alphabet;
    std::size_t pos = first_eol == std::string::npos ? text.size() : first_eol + 1;
    std::size_t line_no = 1;
    while (pos < text.size()) {
        auto eol = text.find('\n', pos);
        if (eol == std::string::npos) eol = text.size();
        const std::string_view line = trim(std::string_view(text).substr(pos, eol - pos));
        pos = eol + 1;
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        double v = 0;
        if (fields.size() != 2 || !parse_number(fields[1], v) || v < 0 || v >= alphabet ||
            v != std::floor(v)) {
            throw DataError(path.string() + ": bad symbol row (line " + std::to_string(line_no) + ")");
        }
        const auto date = Date::parse(fields[0]);
        if (!seq.dates.empty() && date <= seq.dates.back()) {
            throw DataError(path.string() + ": dates not increasing (line " +
                            std::to_string(line_no) + ")");
        }
        seq.dates.push_back(date);
        seq.states.push_back(static_cast<std::uint8_t>(v));
    }
    seq.validate();
    return seq;
}

void write_symbol_file(const std::filesystem::path& path, const SymbolSequence& seq) {
    std::string out;
    if (seq.dated()) {
        out = "date,state\n";
        for (std::size_t i = 0; i < seq.size(); ++i) {
            out += seq.dates[i].iso();
            out += ',';
            out += std::to_string(seq.states[i]);
            out += '\n';
        }
    } else {
        out = to_digit_string(seq) + "\n";
    }
    write_file(path, out);
}

namespace {

SymbolSequence restrict_symbols(const SymbolSequence& s, const std::vector<Date>& dates) {
    SymbolSequence out;
    out.symbol = s.symbol;
    out.alphabet = s.alphabet;
    out.scheme = s.scheme;
    out.dates = dates;
    out.states.reserve(dates.size());
    std::size_t j = 0;
    for (const auto& d : dates) {
        while (s.dates[j] < d) ++j;
        out.states.push_back(s.states[j]);
    }
    return out;
}

}  // namespace

AlignedSymbols align_symbols(const SymbolSequence& target, const SymbolSequence& source, int lag) {
    if (lag < 0) {
        throw UsageError("lag must be non-negative");
    }
    if (target.alphabet != source.alphabet) {
        throw DataError("alphabet mismatch between " + target.symbol + " and " + source.symbol);
    }
    AlignedSymbols out;
    if (target.dated() && source.dated()) {
        const auto common = intersect_dates(target.dates, source.dates);
        if (common.empty()) {
            throw DataError("no common dates between " + target.symbol + " and " + source.symbol);
        }
        out.target = restrict_symbols(target, common);
        out.source = restrict_symbols(source, common);
    } else {
        if (target.size() != source.size()) {
            throw DataError("undated sequences " + target.symbol + " and " + source.symbol +
                            " differ in length");
        }
        out.target = target;
        out.source = source;
    }
    if (lag > 0) {
        const auto shift = static_cast<std::size_t>(lag);
        if (out.target.size() <= shift) {
            throw DataError("lag exceeds the common window");
        }
        out.target.states.erase(out.target.states.begin(), out.target.states.begin() + lag);
        out.source.states.resize(out.source.states.size() - shift);
        if (out.target.dated()) {
            out.target.dates.erase(out.target.dates.begin(), out.target.dates.begin() + lag);
            out.source.dates = out.target.dates;
        }
    }
    return out;
}

}  // namespace teflow

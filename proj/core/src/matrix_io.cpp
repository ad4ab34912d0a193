#include "teflow/matrix.hpp"

#include "teflow/error.hpp"
#include "teflow/textio.hpp"

namespace teflow {

SquareMatrix SquareMatrix::transposed() const {
    SquareMatrix t(symbols);
    const auto n = size();
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            t.at(c, r) = at(r, c);
        }
    }
    return t;
}

std::size_t SquareMatrix::index_of(std::string_view symbol) const {
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        if (symbols[i] == symbol) return i;
    }
    throw UsageError("unknown symbol '" + std::string(symbol) + "'");
}

std::string format_matrix_csv(const SquareMatrix& m, std::string_view corner) {
    std::string out{corner};
    for (const auto& s : m.symbols) {
        out += ',';
        out += s;
    }
    out += '\n';
    for (std::size_t r = 0; r < m.size(); ++r) {
        out += m.symbols[r];
        for (std::size_t c = 0; c < m.size(); ++c) {
            out += ',';
            out += format_number(m.at(r, c));
        }
        out += '\n';
    }
    return out;
}

void write_matrix_csv(const std::filesystem::path& path, const SquareMatrix& m,
                      std::string_view corner) {
    write_file(path, format_matrix_csv(m, corner));
}

SquareMatrix parse_matrix_csv(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        const auto line = trim(text.substr(pos, eol - pos));
        if (!line.empty()) lines.push_back(line);
        pos = eol + 1;
    }
    if (lines.empty()) {
        throw DataError("matrix CSV is empty");
    }
    const auto header = split_csv_line(lines[0]);
    std::vector<std::string> symbols;
    for (std::size_t i = 1; i < header.size(); ++i) {
        symbols.emplace_back(trim(header[i]));
    }
    const auto n = symbols.size();
    if (lines.size() != n + 1) {
        throw DataError("matrix CSV: expected " + std::to_string(n) + " data rows");
    }
    SquareMatrix m(symbols);
    for (std::size_t r = 0; r < n; ++r) {
        const auto fields = split_csv_line(lines[r + 1]);
        if (fields.size() != n + 1 || trim(fields[0]) != symbols[r]) {
            throw DataError("matrix CSV: malformed row " + std::to_string(r + 2));
        }
        for (std::size_t c = 0; c < n; ++c) {
            double v = 0;
            if (!parse_number(fields[c + 1], v)) {
                throw DataError("matrix CSV: bad value at row " + std::to_string(r + 2));
            }
            m.at(r, c) = v;
        }
    }
    return m;
}

SquareMatrix read_matrix_csv(const std::filesystem::path& path) {
    try {
        return parse_matrix_csv(read_file(path));
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

}  // namespace teflow

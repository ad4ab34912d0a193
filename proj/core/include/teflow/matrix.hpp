#pragma once

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace teflow {

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

inline bool is_missing(double v) { return std::isnan(v); }

// Labeled N x N matrix, row-major. Missing cells hold NaN.
struct SquareMatrix {
    std::vector<std::string> symbols;
    std::vector<double> values;

    SquareMatrix() = default;
    explicit SquareMatrix(std::vector<std::string> labels, double fill = kMissing)
        : symbols(std::move(labels)), values(symbols.size() * symbols.size(), fill) {}

    std::size_t size() const { return symbols.size(); }
    double& at(std::size_t row, std::size_t col) { return values[row * symbols.size() + col]; }
    double at(std::size_t row, std::size_t col) const { return values[row * symbols.size() + col]; }

    SquareMatrix transposed() const;
    std::size_t index_of(std::string_view symbol) const;
};

// CSV with a header row and a leading column of symbols; "NA" for missing
// cells; values in shortest round-trip form. The corner cell holds `corner`.
std::string format_matrix_csv(const SquareMatrix& m, std::string_view corner = "source\\target");
void write_matrix_csv(const std::filesystem::path& path, const SquareMatrix& m,
                      std::string_view corner = "source\\target");
SquareMatrix parse_matrix_csv(std::string_view text);
SquareMatrix read_matrix_csv(const std::filesystem::path& path);

}  // namespace teflow

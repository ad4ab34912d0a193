#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "teflow/matrix.hpp"
#include "teflow/network.hpp"

namespace teflow {

// Row-major 8-bit intensities. Higher values are lighter; missing cells are 0.
struct GrayscaleMap {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> pixels;
    double min_value = kMissing;
    double max_value = kMissing;

    std::uint8_t at(std::size_t x, std::size_t y) const { return pixels[y * width + x]; }
};

// source_on_x puts matrix rows (sources) on the x axis, so pixel (x, y)
// shows m.at(x, y). source_on_y shows m.at(y, x).
enum class Orientation { source_on_x, source_on_y };

Orientation parse_orientation(std::string_view name);

// pixel = round(255 (v - min) / (max - min)) over the non-missing cells; a
// map with min == max (or no values) is uniformly 128.
GrayscaleMap render_grayscale(const SquareMatrix& m, Orientation orientation = Orientation::source_on_x);

// Binary P5 with a "# scale min=<v> max=<v>" comment line.
std::string encode_pgm(const GrayscaleMap& map);
// ASCII P2 with the same header, one pixel row per line.
std::string encode_pgm_ascii(const GrayscaleMap& map);
void write_pgm(const std::filesystem::path& path, const GrayscaleMap& map, bool ascii = false);

// Reconstructed value at a pixel from the scale metadata.
double pixel_value(const GrayscaleMap& map, std::uint8_t pixel);

// Header "index,symbol,region,out_sum,out_mean,in_sum,in_mean", rows in
// input order with 1-based index. When the region changes between adjacent
// rows a trailing "# region_boundaries=<i>,<j>" line lists the indices after
// which a new region starts.
std::string format_profiles_csv(std::span<const FlowSummary> summaries);
void write_profiles_csv(const std::filesystem::path& path, std::span<const FlowSummary> summaries);

std::vector<std::size_t> region_boundaries(std::span<const FlowSummary> summaries);

}  // namespace teflow

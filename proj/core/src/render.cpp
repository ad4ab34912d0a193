#include "teflow/render.hpp"

#include <algorithm>
#include <cmath>

#include "teflow/error.hpp"
#include "teflow/textio.hpp"

namespace teflow {

Orientation parse_orientation(std::string_view name) {
    if (name == "source-on-x") return Orientation::source_on_x;
    if (name == "source-on-y") return Orientation::source_on_y;
    throw UsageError("unknown orientation '" + std::string(name) + "'");
}

GrayscaleMap render_grayscale(const SquareMatrix& m, Orientation orientation) {
    const auto n = m.size();
    if (n == 0) {
        throw UsageError("cannot render an empty matrix");
    }
    GrayscaleMap map;
    map.width = n;
    map.height = n;
    map.pixels.assign(n * n, 0);

    bool any = false;
    double lo = 0.0;
    double hi = 0.0;
    for (double v : m.values) {
        if (is_missing(v)) continue;
        if (!any) {
            lo = hi = v;
            any = true;
        } else {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    if (!any || lo == hi) {
        std::fill(map.pixels.begin(), map.pixels.end(), std::uint8_t{128});
        if (any) map.min_value = map.max_value = lo;
        return map;
    }
    map.min_value = lo;
    map.max_value = hi;
    for (std::size_t y = 0; y < n; ++y) {
        for (std::size_t x = 0; x < n; ++x) {
            const double v = orientation == Orientation::source_on_x ? m.at(x, y) : m.at(y, x);
            if (is_missing(v)) continue;
            const double scaled = std::round(255.0 * (v - lo) / (hi - lo));
            map.pixels[y * n + x] = static_cast<std::uint8_t>(std::clamp(scaled, 0.0, 255.0));
        }
    }
    return map;
}

namespace {

std::string pgm_header(const GrayscaleMap& map, char variant) {
    std::string out = "P";
    out += variant;
    out += "\n# scale min=" + format_number(map.min_value) + " max=" + format_number(map.max_value) + "\n";
    out += std::to_string(map.width) + " " + std::to_string(map.height) + "\n255\n";
    return out;
}

}  // namespace

std::string encode_pgm(const GrayscaleMap& map) {
    auto out = pgm_header(map, '5');
    out.append(reinterpret_cast<const char*>(map.pixels.data()), map.pixels.size());
    return out;
}

std::string encode_pgm_ascii(const GrayscaleMap& map) {
    auto out = pgm_header(map, '2');
    for (std::size_t y = 0; y < map.height; ++y) {
        for (std::size_t x = 0; x < map.width; ++x) {
            if (x > 0) out += ' ';
            out += std::to_string(map.at(x, y));
        }
        out += '\n';
    }
    return out;
}

void write_pgm(const std::filesystem::path& path, const GrayscaleMap& map, bool ascii) {
    write_file(path, ascii ? encode_pgm_ascii(map) : encode_pgm(map));
}

double pixel_value(const GrayscaleMap& map, std::uint8_t pixel) {
    if (is_missing(map.min_value) || map.min_value == map.max_value) return map.min_value;
    return map.min_value + (map.max_value - map.min_value) * static_cast<double>(pixel) / 255.0;
}

std::vector<std::size_t> region_boundaries(std::span<const FlowSummary> summaries) {
    std::vector<std::size_t> out;
    for (std::size_t i = 1; i < summaries.size(); ++i) {
        if (summaries[i].region != summaries[i - 1].region) out.push_back(i);
    }
    return out;
}

std::string format_profiles_csv(std::span<const FlowSummary> summaries) {
    std::string out = "index,symbol,region,out_sum,out_mean,in_sum,in_mean\n";
    for (std::size_t i = 0; i < summaries.size(); ++i) {
        const auto& s = summaries[i];
        out += std::to_string(i + 1) + "," + s.symbol + "," + s.region + "," +
               format_number(s.out_sum) + "," + format_number(s.out_mean) + "," +
               format_number(s.in_sum) + "," + format_number(s.in_mean) + "\n";
    }
    const auto bounds = region_boundaries(summaries);
    if (!bounds.empty()) {
        out += "# region_boundaries=";
        for (std::size_t b = 0; b < bounds.size(); ++b) {
            if (b > 0) out += ',';
            out += std::to_string(bounds[b]);
        }
        out += '\n';
    }
    return out;
}

void write_profiles_csv(const std::filesystem::path& path, std::span<const FlowSummary> summaries) {
    write_file(path, format_profiles_csv(summaries));
}

}  // namespace teflow

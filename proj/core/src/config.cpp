#include "teflow/config.hpp"

#include <charconv>

#include "teflow/error.hpp"
#include "teflow/textio.hpp"

namespace teflow {

KeyValues parse_key_values(std::string_view text) {
    KeyValues out;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < text.size()) {
        auto eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        auto line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw UsageError("config line " + std::to_string(line_no) + ": expected key = value");
        }
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw UsageError("config line " + std::to_string(line_no) + ": empty key");
        }
        out[std::string(key)] = std::string(value);
    }
    return out;
}

KeyValues read_key_values(const std::filesystem::path& path) {
    try {
        return parse_key_values(read_file(path));
    } catch (const DataError&) {
        throw UsageError("cannot read config file " + path.string());
    }
}

Discretization parse_discretization(std::string_view name) {
    if (name == "fixed-threshold" || name == "threshold") return Discretization::fixed_threshold;
    if (name == "terciles") return Discretization::terciles;
    throw UsageError("unknown discretization '" + std::string(name) + "'");
}

std::string_view to_string(Discretization d) {
    return d == Discretization::fixed_threshold ? "fixed-threshold" : "terciles";
}

GraphWeights parse_graph_weights(std::string_view name) {
    if (name == "raw") return GraphWeights::raw;
    if (name == "effective") return GraphWeights::effective;
    throw UsageError("graph weights must be raw or effective");
}

std::string_view to_string(GraphWeights w) {
    return w == GraphWeights::raw ? "raw" : "effective";
}

void PipelineConfig::validate() const {
    embedding.validate();
    if (manifest.empty()) throw UsageError("no manifest given");
    if (!(threshold > 0.0)) throw UsageError("threshold must be positive");
    if (lag < 0) throw UsageError("lag must be non-negative");
    if (realizations < 1) throw UsageError("surrogate count must be >= 1");
    if (jobs < 0) throw UsageError("jobs must be >= 0");
}

namespace {

template <typename T>
T parse_integer(std::string_view key, std::string_view value) {
    T out{};
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw UsageError("config key '" + std::string(key) + "': expected an integer");
    }
    return out;
}

double parse_real(std::string_view key, std::string_view value) {
    double out = 0.0;
    if (!parse_number(value, out) || is_missing(out)) {
        throw UsageError("config key '" + std::string(key) + "': expected a number");
    }
    return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw UsageError("config key '" + std::string(key) + "': expected true or false");
}

std::filesystem::path resolve(const std::filesystem::path& base, std::string_view value) {
    std::filesystem::path p{std::string(value)};
    return (p.is_relative() && !base.empty()) ? base / p : p;
}

}  // namespace

void apply_key_values(PipelineConfig& c, const KeyValues& values, const std::filesystem::path& base_dir) {
    for (const auto& [key, value] : values) {
        if (key.starts_with("synth.")) continue;
        if (key == "manifest") c.manifest = resolve(base_dir, value);
        else if (key == "format") c.format = parse_price_format(value);
        else if (key == "price_column") c.price_column = value;
        else if (key == "discretization") c.discretization = parse_discretization(value);
        else if (key == "threshold") c.threshold = parse_real(key, value);
        else if (key == "k") c.embedding.k = parse_integer<int>(key, value);
        else if (key == "l") c.embedding.l = parse_integer<int>(key, value);
        else if (key == "base") c.embedding.base = parse_log_base(value);
        else if (key == "align") c.align = parse_align_mode(value);
        else if (key == "lag") c.lag = parse_integer<int>(key, value);
        else if (key == "surrogates") c.realizations = parse_integer<int>(key, value);
        else if (key == "seed") c.seed = parse_integer<std::uint64_t>(key, value);
        else if (key == "structure") c.structure = parse_structure_kind(value);
        else if (key == "graph_weights") c.graph_weights = parse_graph_weights(value);
        else if (key == "orientation") c.orientation = parse_orientation(value);
        else if (key == "ascii_pgm") c.ascii_pgm = parse_bool(key, value);
        else if (key == "output") c.output_dir = resolve(base_dir, value);
        else if (key == "jobs") c.jobs = parse_integer<int>(key, value);
        else throw UsageError("unknown config key '" + key + "'");
    }
}

CoupledProcessSpec make_topology(std::string_view topology, std::size_t nodes, int alphabet,
                                 double epsilon, std::size_t length, std::uint64_t seed) {
    if (nodes < 2) throw UsageError("synth: need at least 2 nodes");
    std::vector<std::string> names;
    for (std::size_t i = 0; i < nodes; ++i) {
        names.push_back(nodes <= 26 ? std::string(1, static_cast<char>('A' + i)) : "S" + std::to_string(i));
    }
    if (topology == "pair") {
        if (nodes != 2) throw UsageError("synth: pair topology has exactly 2 nodes");
        return CoupledProcessSpec::chain(names, alphabet, epsilon, length, seed);
    }
    if (topology == "chain") return CoupledProcessSpec::chain(names, alphabet, epsilon, length, seed);
    if (topology == "star") return CoupledProcessSpec::star(names, alphabet, epsilon, length, seed);
    if (topology == "independent") {
        auto spec = CoupledProcessSpec::chain(names, alphabet, epsilon, length, seed);
        spec.topology.clear();
        return spec;
    }
    throw UsageError("synth: unknown topology '" + std::string(topology) + "'");
}

void apply_synth_values(SynthConfig& c, const KeyValues& values) {
    std::size_t nodes = c.spec.names.size();
    for (const auto& [key, value] : values) {
        if (!key.starts_with("synth.")) continue;
        const auto name = std::string_view(key).substr(6);
        if (name == "alphabet") c.spec.alphabet = parse_integer<int>(key, value);
        else if (name == "epsilon") c.spec.epsilon = parse_real(key, value);
        else if (name == "length") c.spec.length = parse_integer<std::size_t>(key, value);
        else if (name == "seed") c.spec.seed = parse_integer<std::uint64_t>(key, value);
        else if (name == "topology") c.topology = value;
        else if (name == "nodes") nodes = parse_integer<std::size_t>(key, value);
        else if (name == "step") c.step = parse_real(key, value);
        else throw UsageError("unknown config key '" + key + "'");
    }
    c.spec = make_topology(c.topology, nodes, c.spec.alphabet, c.spec.epsilon, c.spec.length, c.spec.seed);
}

}  // namespace teflow

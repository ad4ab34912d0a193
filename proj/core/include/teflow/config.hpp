#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "teflow/entropy.hpp"
#include "teflow/ingest.hpp"
#include "teflow/network.hpp"
#include "teflow/render.hpp"
#include "teflow/synth.hpp"

namespace teflow {

// Flat "key = value" text; '#' starts a comment. Later keys overwrite earlier.
using KeyValues = std::map<std::string, std::string, std::less<>>;

KeyValues parse_key_values(std::string_view text);
KeyValues read_key_values(const std::filesystem::path& path);

enum class Discretization { fixed_threshold, terciles };

Discretization parse_discretization(std::string_view name);
std::string_view to_string(Discretization d);

enum class GraphWeights { raw, effective };

GraphWeights parse_graph_weights(std::string_view name);
std::string_view to_string(GraphWeights w);

struct PipelineConfig {
    std::filesystem::path manifest;
    PriceFormat format = PriceFormat::two_column;
    std::string price_column = "Close";
    Discretization discretization = Discretization::fixed_threshold;
    double threshold = kDefaultThreshold;
    EmbeddingConfig embedding{};  // k = l = 1, bits
    AlignMode align = AlignMode::pairwise;
    int lag = 0;
    int realizations = 100;
    std::uint64_t seed = 0;
    StructureKind structure = StructureKind::max_branching;
    GraphWeights graph_weights = GraphWeights::raw;
    Orientation orientation = Orientation::source_on_x;
    bool ascii_pgm = false;
    std::filesystem::path output_dir = "teflow-out";
    int jobs = 0;

    void validate() const;
};

// Applies recognised keys; unknown keys throw UsageError. Relative manifest
// and output paths resolve against `base_dir`.
void apply_key_values(PipelineConfig& config, const KeyValues& values,
                      const std::filesystem::path& base_dir = {});

// Keys under "synth." configure a CoupledProcessSpec; see README.
struct SynthConfig {
    CoupledProcessSpec spec;
    std::string topology = "pair";
    double step = 0.05;
};

void apply_synth_values(SynthConfig& config, const KeyValues& values);

// Builds the node list and topology from `topology` ("pair", "chain" or
// "star") and a node count.
CoupledProcessSpec make_topology(std::string_view topology, std::size_t nodes, int alphabet,
                                 double epsilon, std::size_t length, std::uint64_t seed);

}  // namespace teflow

#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "teflow/matrix.hpp"

namespace teflow {

using RegionMap = std::map<std::string, std::string, std::less<>>;

// Per-market totals over the non-missing cells of a TE matrix. Means are
// missing when the corresponding row or column has no values.
struct FlowSummary {
    std::string symbol;
    std::string region;
    double out_sum = 0.0;
    double out_mean = kMissing;
    double in_sum = 0.0;
    double in_mean = kMissing;
    std::size_t out_count = 0;
    std::size_t in_count = 0;
};

// `te.at(j, i)` is the flow j -> i.
std::vector<FlowSummary> aggregate_flow(const SquareMatrix& te, const RegionMap& regions = {});

enum class FlowMode { outgoing, incoming };
enum class StructureKind { max_branching, greedy_attachment };

FlowMode parse_flow_mode(std::string_view name);
StructureKind parse_structure_kind(std::string_view name);
std::string_view to_string(FlowMode mode);
std::string_view to_string(StructureKind kind);

struct FlowEdge {
    std::size_t from;
    std::size_t to;
    double weight;

    auto operator<=>(const FlowEdge&) const = default;
};

// Directed graph over matrix symbols. Edges always point in the direction of
// information flow and are sorted by (from, to).
struct FlowGraph {
    std::vector<std::string> nodes;
    std::vector<std::string> regions;
    std::vector<FlowEdge> edges;
    StructureKind kind = StructureKind::max_branching;
    FlowMode mode = FlowMode::outgoing;
    double total_weight = 0.0;
    std::size_t components = 0;                  // weakly connected components
    std::vector<std::vector<std::size_t>> cycles;  // greedy attachment only
    std::vector<std::string> notes;              // tie-breaks and unattached nodes

    std::vector<std::size_t> in_degree() const;
    std::vector<std::size_t> out_degree() const;
};

// Maximum-weight branching (Chu-Liu/Edmonds with a virtual root). In outgoing
// mode every node has at most one incoming flow edge; in incoming mode the
// algorithm runs on the transposed matrix, so every node has at most one
// outgoing flow edge. Missing cells are not edges. Ties prefer real edges
// over leaving a node unattached, then lexicographically smaller symbols.
FlowGraph max_branching(const SquareMatrix& te, FlowMode mode, const RegionMap& regions = {});

// Outgoing: each node i attaches to its strongest source argmax_j T(j -> i).
// Incoming: each node i attaches to its strongest sink argmax_j T(i -> j).
// Ties go to the lexicographically smallest symbol and are recorded in notes.
// Cycles are kept and listed.
FlowGraph greedy_attachment(const SquareMatrix& te, FlowMode mode, const RegionMap& regions = {});

// Directed DOT with node attribute "region" and edge attribute "weight"
// (6 significant digits).
std::string format_dot(const FlowGraph& graph, std::string_view name);
void write_dot(const std::filesystem::path& path, const FlowGraph& graph, std::string_view name);

// Header "from,to,weight"; weights in shortest round-trip form.
std::string format_edge_csv(const FlowGraph& graph);
void write_edge_csv(const std::filesystem::path& path, const FlowGraph& graph);

}  // namespace teflow

#include "teflow/network.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

#include "teflow/error.hpp"
#include "teflow/textio.hpp"

namespace teflow {

std::vector<FlowSummary> aggregate_flow(const SquareMatrix& te, const RegionMap& regions) {
    const auto n = te.size();
    std::vector<FlowSummary> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto& s = out[i];
        s.symbol = te.symbols[i];
        if (auto it = regions.find(s.symbol); it != regions.end()) s.region = it->second;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            if (const double v = te.at(i, j); !is_missing(v)) {
                s.out_sum += v;
                ++s.out_count;
            }
            if (const double v = te.at(j, i); !is_missing(v)) {
                s.in_sum += v;
                ++s.in_count;
            }
        }
        if (s.out_count > 0) s.out_mean = s.out_sum / static_cast<double>(s.out_count);
        if (s.in_count > 0) s.in_mean = s.in_sum / static_cast<double>(s.in_count);
    }
    return out;
}

FlowMode parse_flow_mode(std::string_view name) {
    if (name == "outgoing" || name == "out") return FlowMode::outgoing;
    if (name == "incoming" || name == "in") return FlowMode::incoming;
    throw UsageError("unknown flow mode '" + std::string(name) + "'");
}

StructureKind parse_structure_kind(std::string_view name) {
    if (name == "max-branching" || name == "branching") return StructureKind::max_branching;
    if (name == "greedy-attachment" || name == "greedy") return StructureKind::greedy_attachment;
    throw UsageError("unknown graph structure '" + std::string(name) + "'");
}

std::string_view to_string(FlowMode mode) {
    return mode == FlowMode::outgoing ? "outgoing" : "incoming";
}

std::string_view to_string(StructureKind kind) {
    return kind == StructureKind::max_branching ? "max-branching" : "greedy-attachment";
}

std::vector<std::size_t> FlowGraph::in_degree() const {
    std::vector<std::size_t> d(nodes.size(), 0);
    for (const auto& e : edges) ++d[e.to];
    return d;
}

std::vector<std::size_t> FlowGraph::out_degree() const {
    std::vector<std::size_t> d(nodes.size(), 0);
    for (const auto& e : edges) ++d[e.from];
    return d;
}

namespace {

// Ranks symbols lexicographically; rank[i] is the position of symbols[i].
std::vector<std::size_t> lexicographic_rank(const std::vector<std::string>& symbols) {
    std::vector<std::size_t> order(symbols.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return symbols[a] < symbols[b]; });
    std::vector<std::size_t> rank(symbols.size());
    for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = r;
    return rank;
}

std::size_t count_components(std::size_t n, const std::vector<FlowEdge>& edges) {
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::size_t components = n;
    for (const auto& e : edges) {
        const auto a = find(e.from);
        const auto b = find(e.to);
        if (a != b) {
            parent[a] = b;
            --components;
        }
    }
    return components;
}

void fill_nodes(FlowGraph& g, const SquareMatrix& te, const RegionMap& regions) {
    g.nodes = te.symbols;
    g.regions.clear();
    for (const auto& s : g.nodes) {
        auto it = regions.find(s);
        g.regions.push_back(it == regions.end() ? std::string{} : it->second);
    }
}

void finish(FlowGraph& g) {
    std::sort(g.edges.begin(), g.edges.end());
    g.edges.erase(std::unique(g.edges.begin(), g.edges.end(),
                              [](const FlowEdge& a, const FlowEdge& b) {
                                  return a.from == b.from && a.to == b.to;
                              }),
                  g.edges.end());
    g.total_weight = 0.0;
    for (const auto& e : g.edges) g.total_weight += e.weight;
    g.components = count_components(g.nodes.size(), g.edges);
}

struct ArcEdge {
    std::size_t from;
    std::size_t to;
    double weight;
    std::size_t id;
};

// Lower is preferred among equal-weight candidates.
using TieRank = std::vector<std::size_t>;

// Chu-Liu/Edmonds maximum spanning arborescence rooted at `root` on nodes
// [0, n). Every non-root node must have an incoming edge. Returns the ids of
// the selected edges.
std::vector<std::size_t> edmonds(std::size_t n, std::size_t root, std::vector<ArcEdge> edges,
                                 const TieRank& tie_rank) {
    constexpr auto none = static_cast<std::size_t>(-1);
    std::vector<std::size_t> best(n, none);
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const auto& arc = edges[e];
        if (arc.to == root || arc.from == arc.to) continue;
        auto& b = best[arc.to];
        if (b == none || arc.weight > edges[b].weight ||
            (arc.weight == edges[b].weight && tie_rank[arc.id] < tie_rank[edges[b].id])) {
            b = e;
        }
    }
    for (std::size_t v = 0; v < n; ++v) {
        if (v != root && best[v] == none) {
            throw InvariantError("edmonds: node without incoming edge");
        }
    }

    // Find cycles among the chosen parent pointers.
    std::vector<std::size_t> cycle_id(n, none);
    std::vector<std::size_t> visited_by(n, none);
    std::size_t cycles = 0;
    for (std::size_t start = 0; start < n; ++start) {
        std::size_t v = start;
        while (v != root && visited_by[v] == none && cycle_id[v] == none) {
            visited_by[v] = start;
            v = edges[best[v]].from;
        }
        if (v != root && visited_by[v] == start && cycle_id[v] == none) {
            std::size_t u = v;
            do {
                cycle_id[u] = cycles;
                u = edges[best[u]].from;
            } while (u != v);
            ++cycles;
        }
    }

    if (cycles == 0) {
        std::vector<std::size_t> chosen;
        for (std::size_t v = 0; v < n; ++v) {
            if (v != root) chosen.push_back(edges[best[v]].id);
        }
        return chosen;
    }

    // Contract every cycle to a single node.
    std::vector<std::size_t> node_map(n, none);
    std::size_t next = 0;
    for (std::size_t v = 0; v < n; ++v) {
        if (cycle_id[v] == none) node_map[v] = next++;
    }
    const std::size_t first_cycle_node = next;
    for (std::size_t v = 0; v < n; ++v) {
        if (cycle_id[v] != none) node_map[v] = first_cycle_node + cycle_id[v];
    }
    const std::size_t contracted_n = first_cycle_node + cycles;

    std::vector<ArcEdge> contracted;
    // Original-level endpoint of each contracted edge, keyed by position.
    std::vector<std::size_t> entering_node;
    for (const auto& arc : edges) {
        const auto u = node_map[arc.from];
        const auto v = node_map[arc.to];
        if (u == v) continue;
        double w = arc.weight;
        if (cycle_id[arc.to] != none) w -= edges[best[arc.to]].weight;
        contracted.push_back({u, v, w, arc.id});
        entering_node.push_back(arc.to);
    }
    std::vector<std::size_t> id_to_target(tie_rank.size(), none);
    for (std::size_t e = 0; e < contracted.size(); ++e) id_to_target[contracted[e].id] = entering_node[e];

    auto chosen = edmonds(contracted_n, node_map[root], std::move(contracted), tie_rank);

    // Each cycle keeps all its edges except the one into the node where the
    // chosen entering edge lands.
    std::vector<std::size_t> broken(cycles, none);
    for (auto id : chosen) {
        const auto v = id_to_target[id];
        if (v != none && cycle_id[v] != none) broken[cycle_id[v]] = v;
    }
    for (std::size_t v = 0; v < n; ++v) {
        if (cycle_id[v] != none && broken[cycle_id[v]] != v) chosen.push_back(edges[best[v]].id);
    }
    return chosen;
}

}  // namespace

FlowGraph max_branching(const SquareMatrix& te, FlowMode mode, const RegionMap& regions) {
    const auto n = te.size();
    if (n < 2) {
        throw UsageError("max_branching needs at least 2 nodes");
    }
    const SquareMatrix w = mode == FlowMode::outgoing ? te : te.transposed();
    const auto rank = lexicographic_rank(te.symbols);

    // Real edges first, then virtual-root edges; tie rank follows
    // (is_root, rank[from], rank[to]).
    std::vector<ArcEdge> arcs;
    std::vector<std::size_t> tie_rank;
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = 0; v < n; ++v) {
            if (u == v || is_missing(w.at(u, v))) continue;
            arcs.push_back({u, v, w.at(u, v), arcs.size()});
            tie_rank.push_back(rank[u] * n + rank[v]);
        }
    }
    const std::size_t real_edges = arcs.size();
    for (std::size_t v = 0; v < n; ++v) {
        arcs.push_back({n, v, 0.0, arcs.size()});
        tie_rank.push_back(n * n + rank[v]);
    }
    const auto original = arcs;
    const auto chosen = edmonds(n + 1, n, std::move(arcs), tie_rank);

    FlowGraph g;
    g.kind = StructureKind::max_branching;
    g.mode = mode;
    fill_nodes(g, te, regions);
    for (auto id : chosen) {
        if (id >= real_edges) continue;
        const auto& arc = original[id];
        if (mode == FlowMode::outgoing) {
            g.edges.push_back({arc.from, arc.to, arc.weight});
        } else {
            g.edges.push_back({arc.to, arc.from, arc.weight});
        }
    }
    finish(g);
    return g;
}

FlowGraph greedy_attachment(const SquareMatrix& te, FlowMode mode, const RegionMap& regions) {
    const auto n = te.size();
    if (n < 2) {
        throw UsageError("greedy_attachment needs at least 2 nodes");
    }
    const auto rank = lexicographic_rank(te.symbols);
    FlowGraph g;
    g.kind = StructureKind::greedy_attachment;
    g.mode = mode;
    fill_nodes(g, te, regions);

    constexpr auto none = static_cast<std::size_t>(-1);
    std::vector<std::size_t> pointer(n, none);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t best = none;
        double best_w = 0.0;
        std::vector<std::size_t> tied;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double v = mode == FlowMode::outgoing ? te.at(j, i) : te.at(i, j);
            if (is_missing(v)) continue;
            if (best == none || v > best_w) {
                best = j;
                best_w = v;
                tied.assign(1, j);
            } else if (v == best_w) {
                tied.push_back(j);
                if (rank[j] < rank[best]) best = j;
            }
        }
        if (best == none) {
            g.notes.push_back(te.symbols[i] + ": no candidate, left unattached");
            continue;
        }
        if (tied.size() > 1) {
            std::sort(tied.begin(), tied.end(), [&](auto a, auto b) { return rank[a] < rank[b]; });
            std::string note = te.symbols[i] + ": tie between";
            for (auto t : tied) note += " " + te.symbols[t];
            note += ", chose " + te.symbols[best];
            g.notes.push_back(std::move(note));
        }
        pointer[i] = best;
        if (mode == FlowMode::outgoing) {
            g.edges.push_back({best, i, best_w});
        } else {
            g.edges.push_back({i, best, best_w});
        }
    }

    // Every node has at most one pointer, so each component holds at most
    // one cycle.
    std::vector<int> state(n, 0);  // 0 new, 1 on current walk, 2 done
    for (std::size_t start = 0; start < n; ++start) {
        std::vector<std::size_t> walk;
        std::size_t v = start;
        while (v != none && state[v] == 0) {
            state[v] = 1;
            walk.push_back(v);
            v = pointer[v];
        }
        if (v != none && state[v] == 1) {
            auto it = std::find(walk.begin(), walk.end(), v);
            std::vector<std::size_t> cycle(it, walk.end());
            std::rotate(cycle.begin(), std::min_element(cycle.begin(), cycle.end()), cycle.end());
            g.cycles.push_back(std::move(cycle));
        }
        for (auto u : walk) state[u] = 2;
    }
    std::sort(g.cycles.begin(), g.cycles.end());
    finish(g);
    return g;
}

namespace {

std::string dot_quote(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    out += '"';
    return out;
}

std::string six_digits(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

std::string format_dot(const FlowGraph& graph, std::string_view name) {
    std::string out = "digraph " + dot_quote(name) + " {\n";
    out += "  // structure=" + std::string(to_string(graph.kind)) +
           " mode=" + std::string(to_string(graph.mode)) +
           " edges=" + std::to_string(graph.edges.size()) +
           " components=" + std::to_string(graph.components) +
           " total_weight=" + six_digits(graph.total_weight) + "\n";
    for (const auto& cycle : graph.cycles) {
        out += "  // cycle:";
        for (auto v : cycle) out += " " + graph.nodes[v];
        out += "\n";
    }
    for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
        out += "  " + dot_quote(graph.nodes[i]) + " [region=" + dot_quote(graph.regions[i]) + "];\n";
    }
    for (const auto& e : graph.edges) {
        out += "  " + dot_quote(graph.nodes[e.from]) + " -> " + dot_quote(graph.nodes[e.to]) +
               " [weight=" + dot_quote(six_digits(e.weight)) + "];\n";
    }
    out += "}\n";
    return out;
}

void write_dot(const std::filesystem::path& path, const FlowGraph& graph, std::string_view name) {
    write_file(path, format_dot(graph, name));
}

std::string format_edge_csv(const FlowGraph& graph) {
    std::string out = "from,to,weight\n";
    for (const auto& e : graph.edges) {
        out += graph.nodes[e.from] + "," + graph.nodes[e.to] + "," + format_number(e.weight) + "\n";
    }
    return out;
}

void write_edge_csv(const std::filesystem::path& path, const FlowGraph& graph) {
    write_file(path, format_edge_csv(graph));
}

}  // namespace teflow

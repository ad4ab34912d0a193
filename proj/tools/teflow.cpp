// teflow: transfer-entropy flow analysis of market panels.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 internal invariant
// violation.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "teflow/config.hpp"
#include "teflow/entropy.hpp"
#include "teflow/error.hpp"
#include "teflow/ingest.hpp"
#include "teflow/network.hpp"
#include "teflow/pipeline.hpp"
#include "teflow/render.hpp"
#include "teflow/surrogate.hpp"
#include "teflow/symbolize.hpp"
#include "teflow/synth.hpp"
#include "teflow/textio.hpp"

namespace fs = std::filesystem;
using namespace teflow;

namespace {

struct RunArgs {
    std::string config;
    std::optional<std::string> manifest, format, price_column, discretization, base, align, structure,
        graph_weights, orientation, output;
    std::optional<double> threshold;
    bool terciles = false;
    std::optional<int> k, l, lag, surrogates, jobs;
    std::optional<std::uint64_t> seed;
    bool ascii = false;
};

void add_embedding_flags(CLI::App* cmd, int& k, int& l, std::string& base) {
    cmd->add_option("--k", k, "target history length")->capture_default_str();
    cmd->add_option("--l", l, "source history length")->capture_default_str();
    cmd->add_option("--base", base, "log base: 2, e or 10")->capture_default_str();
}

int run_cmd(const RunArgs& a) {
    PipelineConfig cfg;
    if (!a.config.empty()) {
        const fs::path path(a.config);
        apply_key_values(cfg, read_key_values(path), path.parent_path());
    }
    if (a.manifest) cfg.manifest = *a.manifest;
    if (a.format) cfg.format = parse_price_format(*a.format);
    if (a.price_column) cfg.price_column = *a.price_column;
    if (a.discretization) cfg.discretization = parse_discretization(*a.discretization);
    if (a.terciles) cfg.discretization = Discretization::terciles;
    if (a.threshold) {
        cfg.threshold = *a.threshold;
        cfg.discretization = Discretization::fixed_threshold;
    }
    if (a.k) cfg.embedding.k = *a.k;
    if (a.l) cfg.embedding.l = *a.l;
    if (a.base) cfg.embedding.base = parse_log_base(*a.base);
    if (a.align) cfg.align = parse_align_mode(*a.align);
    if (a.lag) cfg.lag = *a.lag;
    if (a.surrogates) cfg.realizations = *a.surrogates;
    if (a.seed) cfg.seed = *a.seed;
    if (a.structure) cfg.structure = parse_structure_kind(*a.structure);
    if (a.graph_weights) cfg.graph_weights = parse_graph_weights(*a.graph_weights);
    if (a.orientation) cfg.orientation = parse_orientation(*a.orientation);
    if (a.output) cfg.output_dir = *a.output;
    if (a.jobs) cfg.jobs = *a.jobs;
    if (a.ascii) cfg.ascii_pgm = true;

    const auto result = run_pipeline(cfg);
    for (const auto& p : result.artifacts) std::cout << p.string() << "\n";
    return 0;
}

fs::path default_output(const fs::path& input, const std::string& suffix, const std::string& ext) {
    auto stem = input.stem().string();
    if (stem.ends_with("_matrix")) stem.resize(stem.size() - 7);
    return input.parent_path() / (stem + suffix + ext);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Transfer-entropy information flow between time series"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(version()));

    // run
    RunArgs run;
    auto* run_app = app.add_subcommand("run", "Full pipeline from a manifest");
    run_app->add_option("--config", run.config, "key = value config file");
    run_app->add_option("--manifest", run.manifest, "CSV manifest: symbol,path,region");
    run_app->add_option("--format", run.format, "yahoo-ohlc | two-column");
    run_app->add_option("--price-column", run.price_column, "yahoo-ohlc price column");
    run_app->add_option("--discretization", run.discretization, "fixed-threshold | terciles");
    auto* thr = run_app->add_option("--threshold", run.threshold, "fixed threshold d");
    run_app->add_flag("--terciles", run.terciles, "per-series tercile thresholds")->excludes(thr);
    run_app->add_option("--k", run.k, "target history length");
    run_app->add_option("--l", run.l, "source history length");
    run_app->add_option("--base", run.base, "log base: 2, e or 10");
    run_app->add_option("--align", run.align, "pairwise | global");
    run_app->add_option("--lag", run.lag, "delay applied to the source series");
    run_app->add_option("--surrogates", run.surrogates, "shuffled realizations per pair");
    run_app->add_option("--seed", run.seed, "master seed");
    run_app->add_option("--structure", run.structure, "max-branching | greedy-attachment");
    run_app->add_option("--graph-weights", run.graph_weights, "raw | effective");
    run_app->add_option("--orientation", run.orientation, "source-on-x | source-on-y");
    run_app->add_flag("--ascii-pgm", run.ascii, "write P2 instead of P5");
    run_app->add_option("-o,--output", run.output, "output directory");
    run_app->add_option("--jobs", run.jobs, "worker threads (0 = all cores)");

    // returns
    std::string ret_in, ret_out, ret_format = "two-column", ret_column = "Close";
    auto* ret_app = app.add_subcommand("returns", "Price CSV to log-return CSV");
    ret_app->add_option("prices", ret_in)->required();
    ret_app->add_option("--format", ret_format)->capture_default_str();
    ret_app->add_option("--price-column", ret_column)->capture_default_str();
    ret_app->add_option("-o,--output", ret_out, "output path (default: <stem>_returns.csv)");

    // symbolize
    std::string sym_in, sym_out;
    std::optional<double> sym_threshold;
    bool sym_terciles = false;
    bool sym_digits = false;
    auto* sym_app = app.add_subcommand("symbolize", "Return CSV to ternary symbols");
    sym_app->add_option("returns", sym_in)->required();
    auto* sym_thr = sym_app->add_option("--threshold", sym_threshold, "fixed threshold d (default 0.04)");
    sym_app->add_flag("--terciles", sym_terciles)->excludes(sym_thr);
    sym_app->add_flag("--digits", sym_digits, "print the sequence as one digit line");
    sym_app->add_option("-o,--output", sym_out, "output path (default: <stem>.sym)");

    // te
    std::string te_target, te_source, te_base = "2";
    int te_k = 1, te_l = 1, te_lag = 0, te_alphabet = 3;
    auto* te_app = app.add_subcommand("te", "Transfer entropy in both directions for two symbol files");
    te_app->add_option("a", te_target)->required();
    te_app->add_option("b", te_source)->required();
    add_embedding_flags(te_app, te_k, te_l, te_base);
    te_app->add_option("--lag", te_lag)->capture_default_str();
    te_app->add_option("--alphabet", te_alphabet)->capture_default_str();

    // corr
    std::vector<std::string> corr_in;
    std::string corr_out = "corr_matrix.csv";
    auto* corr_app = app.add_subcommand("corr", "Cross-correlation matrix of return CSVs");
    corr_app->add_option("returns", corr_in)->required()->expected(2, -1);
    corr_app->add_option("-o,--output", corr_out)->capture_default_str();

    // surrogate
    std::string sur_a, sur_b, sur_base = "2", sur_out;
    int sur_k = 1, sur_l = 1, sur_m = 100, sur_alphabet = 3;
    std::uint64_t sur_seed = 0;
    auto* sur_app = app.add_subcommand("surrogate", "Shuffled-surrogate null for two symbol files");
    sur_app->add_option("a", sur_a)->required();
    sur_app->add_option("b", sur_b)->required();
    add_embedding_flags(sur_app, sur_k, sur_l, sur_base);
    sur_app->add_option("--surrogates", sur_m)->capture_default_str();
    sur_app->add_option("--seed", sur_seed)->capture_default_str();
    sur_app->add_option("--alphabet", sur_alphabet)->capture_default_str();
    sur_app->add_option("-o,--output", sur_out, "CSV path (default: stdout)");

    // graph
    std::string graph_in, graph_structure = "max-branching", graph_mode = "outgoing", graph_out,
                                    graph_edges, graph_manifest;
    auto* graph_app = app.add_subcommand("graph", "Spanning structure from a TE matrix CSV");
    graph_app->add_option("matrix", graph_in)->required();
    graph_app->add_option("--structure", graph_structure)->capture_default_str();
    graph_app->add_option("--mode", graph_mode)->capture_default_str();
    graph_app->add_option("--manifest", graph_manifest, "manifest supplying region labels");
    graph_app->add_option("-o,--output", graph_out, "DOT path (default: flow_<mode>.dot beside input)");
    graph_app->add_option("--edges", graph_edges, "also write an edge-list CSV");

    // render
    std::string render_in, render_out, render_orientation = "source-on-x";
    bool render_ascii = false;
    auto* render_app = app.add_subcommand("render", "Gray-scale PGM of a matrix CSV");
    render_app->add_option("matrix", render_in)->required();
    render_app->add_option("--orientation", render_orientation)->capture_default_str();
    render_app->add_flag("--ascii", render_ascii, "write P2");
    render_app->add_option("-o,--output", render_out, "output path (default: <stem>_map.pgm)");

    // synth
    std::string synth_config, synth_topology, synth_out = ".", synth_manifest, synth_kind = "prices";
    std::optional<int> synth_alphabet;
    std::optional<double> synth_epsilon, synth_step;
    std::optional<std::size_t> synth_length, synth_nodes;
    std::optional<std::uint64_t> synth_seed;
    auto* synth_app = app.add_subcommand("synth", "Coupled processes with known transfer entropy");
    synth_app->add_option("--config", synth_config, "config file with synth.* keys");
    synth_app->add_option("--alphabet", synth_alphabet);
    synth_app->add_option("--epsilon", synth_epsilon);
    synth_app->add_option("--length", synth_length);
    synth_app->add_option("--seed", synth_seed);
    synth_app->add_option("--topology", synth_topology, "pair | chain | star | independent");
    synth_app->add_option("--nodes", synth_nodes);
    synth_app->add_option("--step", synth_step, "log-return magnitude per state step");
    synth_app->add_option("--kind", synth_kind, "prices | symbols")->capture_default_str();
    synth_app->add_option("-o,--output", synth_out, "output directory")->capture_default_str();
    synth_app->add_option("--manifest", synth_manifest, "also write a manifest here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*run_app) return run_cmd(run);

        if (*ret_app) {
            ParseOptions opts;
            opts.format = parse_price_format(ret_format);
            opts.price_column = ret_column;
            const auto parsed = parse_price_csv(ret_in, opts);
            const auto r = log_returns(parsed.series);
            const fs::path out = ret_out.empty() ? default_output(ret_in, "_returns", ".csv") : fs::path(ret_out);
            write_returns_csv(out, r);
            std::cerr << "dropped rows: " << parsed.dropped_rows << "\n";
            std::cout << out.string() << "\n";
            return 0;
        }

        if (*sym_app) {
            const auto r = read_returns_csv(sym_in);
            const auto seq = sym_terciles ? symbolize_terciles(r)
                                          : symbolize_fixed(r, sym_threshold.value_or(kDefaultThreshold));
            if (sym_digits) {
                std::cout << to_digit_string(seq) << "\n";
                return 0;
            }
            auto stem = fs::path(sym_in).stem().string();
            if (stem.ends_with("_returns")) stem.resize(stem.size() - 8);
            const fs::path out = sym_out.empty() ? fs::path(sym_in).parent_path() / (stem + ".sym") : fs::path(sym_out);
            write_symbol_file(out, seq);
            std::cout << out.string() << "\n";
            return 0;
        }

        if (*te_app) {
            EmbeddingConfig cfg{te_k, te_l, parse_log_base(te_base)};
            const auto a = read_symbol_file(te_target, te_alphabet);
            const auto b = read_symbol_file(te_source, te_alphabet);
            const auto ab = align_symbols(b, a, te_lag);  // a -> b
            const auto ba = align_symbols(a, b, te_lag);  // b -> a
            std::cout << "T(" << a.symbol << "->" << b.symbol
                      << ") = " << format_number(transfer_entropy(ab.target, ab.source, cfg)) << "\n";
            std::cout << "T(" << b.symbol << "->" << a.symbol
                      << ") = " << format_number(transfer_entropy(ba.target, ba.source, cfg)) << "\n";
            return 0;
        }

        if (*corr_app) {
            std::vector<ReturnSeries> panel;
            for (const auto& p : corr_in) panel.push_back(read_returns_csv(p));
            const auto corr = cross_correlation_matrix(panel);
            for (const auto& issue : corr.issues) std::cerr << "warning: " << issue << "\n";
            write_matrix_csv(corr_out, corr.values, "symbol");
            std::cout << corr_out << "\n";
            return 0;
        }

        if (*sur_app) {
            EmbeddingConfig cfg{sur_k, sur_l, parse_log_base(sur_base)};
            const auto a = read_symbol_file(sur_a, sur_alphabet);
            const auto b = read_symbol_file(sur_b, sur_alphabet);
            const std::vector<SymbolSequence> panel{a, b};
            const auto reports = surrogate_panel(panel, cfg, {sur_m, sur_seed, 0, 0});
            const auto csv = format_surrogate_csv(reports);
            if (sur_out.empty()) {
                std::cout << csv;
            } else {
                write_file(sur_out, csv);
            }
            return 0;
        }

        if (*graph_app) {
            const auto m = read_matrix_csv(graph_in);
            RegionMap regions;
            if (!graph_manifest.empty()) {
                for (const auto& e : load_manifest(graph_manifest)) regions[e.symbol] = e.region;
            }
            const auto mode = parse_flow_mode(graph_mode);
            const auto g = parse_structure_kind(graph_structure) == StructureKind::max_branching
                               ? max_branching(m, mode, regions)
                               : greedy_attachment(m, mode, regions);
            const std::string name = mode == FlowMode::outgoing ? "flow_out" : "flow_in";
            const fs::path out = graph_out.empty() ? fs::path(graph_in).parent_path() / (name + ".dot") : fs::path(graph_out);
            write_dot(out, g, name);
            if (!graph_edges.empty()) write_edge_csv(graph_edges, g);
            for (const auto& note : g.notes) std::cerr << "note: " << note << "\n";
            std::cout << out.string() << "\n";
            return 0;
        }

        if (*render_app) {
            const auto m = read_matrix_csv(render_in);
            const fs::path out = render_out.empty() ? default_output(render_in, "_map", ".pgm") : fs::path(render_out);
            write_pgm(out, render_grayscale(m, parse_orientation(render_orientation)), render_ascii);
            std::cout << out.string() << "\n";
            return 0;
        }

        if (*synth_app) {
            SynthConfig sc;
            if (!synth_config.empty()) apply_synth_values(sc, read_key_values(synth_config));
            const auto nodes = synth_nodes.value_or(sc.spec.names.size());
            const auto topology = synth_topology.empty() ? sc.topology : synth_topology;
            sc.spec = make_topology(topology, nodes, synth_alphabet.value_or(sc.spec.alphabet),
                                    synth_epsilon.value_or(sc.spec.epsilon),
                                    synth_length.value_or(sc.spec.length), synth_seed.value_or(sc.spec.seed));
            const double step = synth_step.value_or(sc.step);
            const auto seqs = generate(sc.spec);
            const fs::path dir(synth_out);
            fs::create_directories(dir);
            std::vector<ManifestEntry> manifest;
            if (synth_kind == "prices") {
                for (const auto& p : to_price_panel(seqs, step)) {
                    const auto path = dir / (p.symbol + ".csv");
                    write_two_column_csv(path, p);
                    manifest.push_back({p.symbol, path, "synthetic"});
                    std::cout << path.string() << "\n";
                }
            } else if (synth_kind == "symbols") {
                for (const auto& s : seqs) {
                    const auto path = dir / (s.symbol + ".sym");
                    write_symbol_file(path, s);
                    std::cout << path.string() << "\n";
                }
            } else {
                throw UsageError("--kind must be prices or symbols");
            }
            if (!synth_manifest.empty()) {
                if (manifest.empty()) throw UsageError("--manifest needs --kind prices");
                const auto base = fs::absolute(fs::path(synth_manifest)).parent_path();
                for (auto& e : manifest) e.path = fs::relative(fs::absolute(e.path), base);
                write_manifest(synth_manifest, manifest);
            }
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "teflow: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "teflow: internal error: " << e.what() << "\n";
        return 3;
    }
    return 1;
}

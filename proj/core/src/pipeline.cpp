#include "teflow/pipeline.hpp"

#include "json.hpp"

#include "teflow/ingest.hpp"
#include "teflow/parallel.hpp"
#include "teflow/render.hpp"
#include "teflow/rng.hpp"
#include "teflow/symbolize.hpp"
#include "teflow/textio.hpp"

#ifndef TEFLOW_VERSION
#define TEFLOW_VERSION "0.0.0"
#endif

namespace teflow {

std::string_view version() { return TEFLOW_VERSION; }

namespace {

class ArtifactWriter {
public:
    explicit ArtifactWriter(std::filesystem::path dir) : dir_(std::move(dir)) {}

    ~ArtifactWriter() {
        if (committed_) return;
        std::error_code ec;
        for (const auto& p : written_) std::filesystem::remove(p, ec);
    }

    template <typename Write>
    void write(const std::string& name, Write&& fn) {
        const auto path = dir_ / name;
        fn(path);
        written_.push_back(path);
    }

    void commit() { committed_ = true; }
    const std::vector<std::filesystem::path>& written() const { return written_; }

private:
    std::filesystem::path dir_;
    std::vector<std::filesystem::path> written_;
    bool committed_ = false;
};

template <typename Fn>
auto stage(const char* name, Fn&& fn) {
    try {
        return fn();
    } catch (const StageError&) {
        throw;
    } catch (const Error& e) {
        throw StageError(name, e);
    } catch (const std::exception& e) {
        throw StageError(name, InvariantError(e.what()));
    }
}

nlohmann::ordered_json describe_config(const PipelineConfig& c) {
    nlohmann::ordered_json j;
    j["manifest"] = c.manifest.generic_string();
    j["format"] = to_string(c.format);
    j["price_column"] = c.price_column;
    j["discretization"] = to_string(c.discretization);
    j["threshold"] = c.threshold;
    j["k"] = c.embedding.k;
    j["l"] = c.embedding.l;
    j["base"] = to_string(c.embedding.base);
    j["align"] = to_string(c.align);
    j["lag"] = c.lag;
    j["surrogates"] = c.realizations;
    j["seed"] = c.seed;
    j["structure"] = to_string(c.structure);
    j["graph_weights"] = to_string(c.graph_weights);
    j["orientation"] = c.orientation == Orientation::source_on_x ? "source-on-x" : "source-on-y";
    j["ascii_pgm"] = c.ascii_pgm;
    return j;
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& config) {
    stage("config", [&] {
        config.validate();
        return 0;
    });

    struct Market {
        ManifestEntry entry;
        ReturnSeries returns;
        std::size_t prices = 0;
        std::size_t dropped = 0;
    };

    auto markets = stage("ingest", [&] {
        const auto manifest = load_manifest(config.manifest);
        if (manifest.size() < 2) {
            throw DataError("manifest lists fewer than 2 markets");
        }
        std::vector<Market> out(manifest.size());
        parallel_for(manifest.size(), config.jobs, [&](std::size_t i) {
            ParseOptions opts;
            opts.format = config.format;
            opts.price_column = config.price_column;
            opts.symbol = manifest[i].symbol;
            auto parsed = parse_price_csv(manifest[i].path, opts);
            out[i].entry = manifest[i];
            out[i].prices = parsed.series.size();
            out[i].dropped = parsed.dropped_rows;
            out[i].returns = log_returns(parsed.series);
        });
        if (config.align == AlignMode::global) {
            std::vector<ReturnSeries> panel;
            for (const auto& m : out) panel.push_back(m.returns);
            panel = align_global(panel);
            for (std::size_t i = 0; i < out.size(); ++i) out[i].returns = std::move(panel[i]);
        }
        return out;
    });

    std::vector<ReturnSeries> returns;
    RegionMap regions;
    for (const auto& m : markets) {
        returns.push_back(m.returns);
        regions[m.entry.symbol] = m.entry.region;
    }

    const auto symbols = stage("symbolize", [&] {
        std::vector<SymbolSequence> out;
        for (const auto& r : returns) {
            out.push_back(config.discretization == Discretization::fixed_threshold
                              ? symbolize_fixed(r, config.threshold)
                              : symbolize_terciles(r));
        }
        return out;
    });

    PipelineResult result;
    result.te = stage("te", [&] {
        return te_matrix(symbols, config.embedding, {config.jobs, config.lag});
    });
    result.correlation = stage("corr", [&] { return cross_correlation_matrix(returns, config.jobs); });
    result.surrogates = stage("surrogate", [&] {
        SurrogateOptions opts;
        opts.realizations = config.realizations;
        opts.seed = config.seed;
        opts.jobs = config.jobs;
        opts.lag = config.lag;
        return surrogate_panel(symbols, config.embedding, opts);
    });

    stage("network", [&] {
        result.profiles = aggregate_flow(result.te.values, regions);
        const SquareMatrix weights = config.graph_weights == GraphWeights::raw
                                         ? result.te.values
                                         : effective_te_matrix(result.te.values.symbols, result.surrogates);
        auto build = [&](FlowMode mode) {
            return config.structure == StructureKind::max_branching
                       ? max_branching(weights, mode, regions)
                       : greedy_attachment(weights, mode, regions);
        };
        result.flow_out = build(FlowMode::outgoing);
        result.flow_in = build(FlowMode::incoming);
        return 0;
    });

    ArtifactWriter out(config.output_dir);
    stage("render", [&] {
        std::error_code ec;
        std::filesystem::create_directories(config.output_dir, ec);
        if (ec) throw DataError("cannot create output directory " + config.output_dir.string());

        out.write("te_matrix.csv", [&](const auto& p) { write_matrix_csv(p, result.te.values); });
        out.write("corr_matrix.csv", [&](const auto& p) { write_matrix_csv(p, result.correlation.values, "symbol"); });
        out.write("te_map.pgm", [&](const auto& p) {
            write_pgm(p, render_grayscale(result.te.values, config.orientation), config.ascii_pgm);
        });
        out.write("corr_map.pgm", [&](const auto& p) {
            write_pgm(p, render_grayscale(result.correlation.values, config.orientation), config.ascii_pgm);
        });
        out.write("flow_profiles.csv", [&](const auto& p) { write_profiles_csv(p, result.profiles); });
        out.write("surrogates.csv", [&](const auto& p) { write_surrogate_csv(p, result.surrogates); });
        out.write("flow_out.dot", [&](const auto& p) { write_dot(p, result.flow_out, "flow_out"); });
        out.write("flow_in.dot", [&](const auto& p) { write_dot(p, result.flow_in, "flow_in"); });
        out.write("flow_out_edges.csv", [&](const auto& p) { write_edge_csv(p, result.flow_out); });
        out.write("flow_in_edges.csv", [&](const auto& p) { write_edge_csv(p, result.flow_in); });
        return 0;
    });

    stage("metadata", [&] {
        nlohmann::ordered_json meta;
        meta["tool"] = "teflow";
        meta["version"] = version();
        meta["config"] = describe_config(config);
        meta["rng"] = {{"engine", kEngineName},
                       {"seed_derivation", kSeedDerivation},
                       {"master_seed", config.seed},
                       {"surrogate_pair_seed", "derive_seed(master, [stage_tag(\"surrogate\"), source*N+target])"}};
        nlohmann::ordered_json series = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < markets.size(); ++i) {
            series.push_back({{"symbol", markets[i].entry.symbol},
                              {"region", markets[i].entry.region},
                              {"path", markets[i].entry.path.generic_string()},
                              {"prices", markets[i].prices},
                              {"dropped_rows", markets[i].dropped},
                              {"returns", returns[i].size()},
                              {"scheme", symbols[i].scheme.describe()}});
        }
        meta["series"] = series;
        nlohmann::ordered_json samples = nlohmann::ordered_json::array();
        const auto n = result.te.size();
        for (std::size_t r = 0; r < n; ++r) {
            std::vector<std::size_t> row(result.te.samples.begin() + static_cast<std::ptrdiff_t>(r * n),
                                         result.te.samples.begin() + static_cast<std::ptrdiff_t>((r + 1) * n));
            samples.push_back(row);
        }
        meta["te_samples"] = samples;
        meta["issues"] = {{"te", result.te.issues}, {"corr", result.correlation.issues}};
        meta["graphs"] = {
            {"flow_out", {{"edges", result.flow_out.edges.size()},
                          {"components", result.flow_out.components},
                          {"total_weight", result.flow_out.total_weight},
                          {"notes", result.flow_out.notes}}},
            {"flow_in", {{"edges", result.flow_in.edges.size()},
                         {"components", result.flow_in.components},
                         {"total_weight", result.flow_in.total_weight},
                         {"notes", result.flow_in.notes}}}};
        std::vector<std::string> names;
        for (const auto& p : out.written()) names.push_back(p.filename().string());
        names.push_back("run_metadata.json");
        meta["artifacts"] = names;
        out.write("run_metadata.json", [&](const auto& p) { write_file(p, meta.dump(2) + "\n"); });
        return 0;
    });

    out.commit();
    result.artifacts = out.written();
    return result;
}

}  // namespace teflow

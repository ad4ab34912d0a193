#include <gtest/gtest.h>

#include "json.hpp"

#include "teflow/pipeline.hpp"
#include "teflow/synth.hpp"
#include "teflow/textio.hpp"
#include "test_support.hpp"

using namespace teflow;
using teflow::testing::TempDir;

namespace {

// Five synthetic markets (star around A) written as two-column CSVs with a
// manifest next to them.
std::filesystem::path write_panel(const TempDir& dir, std::size_t length = 600) {
    const auto spec = CoupledProcessSpec::star({"A", "B", "C", "D", "E"}, 3, 0.8, length, 17);
    const auto prices = to_price_panel(generate(spec), 0.05);
    std::vector<ManifestEntry> entries;
    const char* regions[] = {"Americas", "Americas", "Asia-Pacific", "Europe", "Europe"};
    for (std::size_t i = 0; i < prices.size(); ++i) {
        const auto file = "prices/" + prices[i].symbol + ".csv";
        std::filesystem::create_directories(dir.path() / "prices");
        write_two_column_csv(dir.path() / file, prices[i]);
        entries.push_back({prices[i].symbol, file, regions[i]});
    }
    write_manifest(dir / "manifest.csv", entries);
    return dir / "manifest.csv";
}

PipelineConfig config_for(const std::filesystem::path& manifest, const std::filesystem::path& out) {
    PipelineConfig c;
    c.manifest = manifest;
    c.output_dir = out;
    c.realizations = 20;
    c.seed = 7;
    return c;
}

}  // namespace

TEST(Pipeline, WritesEveryArtifact) {
    TempDir dir("pipeline");
    const auto result = run_pipeline(config_for(write_panel(dir), dir / "out"));
    for (const char* name : kPipelineArtifacts) {
        EXPECT_TRUE(std::filesystem::exists(dir.path() / "out" / name)) << name;
    }
    EXPECT_EQ(result.artifacts.size(), std::size(kPipelineArtifacts));

    const auto te = read_matrix_csv(dir.path() / "out" / "te_matrix.csv");
    EXPECT_EQ(te.symbols, (std::vector<std::string>{"A", "B", "C", "D", "E"}));
    for (std::size_t i = 0; i < te.values.size(); ++i) {
        const double a = te.values[i];
        const double b = result.te.values.values[i];
        EXPECT_TRUE((is_missing(a) && is_missing(b)) || a == b);
    }
    const auto corr = read_matrix_csv(dir.path() / "out" / "corr_matrix.csv");
    EXPECT_EQ(corr.at(2, 2), 1.0);

    const auto pgm = read_file(dir.path() / "out" / "te_map.pgm");
    EXPECT_EQ(pgm.substr(0, 3), "P5\n");
    EXPECT_NE(pgm.find("\n5 5\n255\n"), std::string::npos);

    const auto profiles = read_file(dir.path() / "out" / "flow_profiles.csv");
    EXPECT_EQ(profiles.substr(0, profiles.find('\n')), "index,symbol,region,out_sum,out_mean,in_sum,in_mean");
    EXPECT_NE(profiles.find("# region_boundaries=2,3\n"), std::string::npos);

    const auto surrogates = read_file(dir.path() / "out" / "surrogates.csv");
    EXPECT_EQ(std::count(surrogates.begin(), surrogates.end(), '\n'), 21);

    const auto dot = read_file(dir.path() / "out" / "flow_out.dot");
    EXPECT_EQ(dot.substr(0, 20), "digraph \"flow_out\" {");
    for (const char* follower : {"B", "C", "D", "E"}) {
        EXPECT_NE(dot.find(std::string("\"A\" -> \"") + follower + "\""), std::string::npos) << follower;
    }

    const auto meta = nlohmann::json::parse(read_file(dir.path() / "out" / "run_metadata.json"));
    EXPECT_EQ(meta["config"]["threshold"], 0.04);
    EXPECT_EQ(meta["config"]["k"], 1);
    EXPECT_EQ(meta["config"]["surrogates"], 20);
    EXPECT_EQ(meta["config"]["seed"], 7);
    EXPECT_EQ(meta["rng"]["engine"], "mt19937_64");
    EXPECT_EQ(meta["series"].size(), 5u);
    EXPECT_EQ(meta["series"][0]["returns"], 600);
    EXPECT_EQ(meta["te_samples"][0][1], 599);
    EXPECT_EQ(meta["version"], std::string(version()));
    EXPECT_EQ(meta["artifacts"].size(), std::size(kPipelineArtifacts));
}

TEST(Pipeline, RerunsAreByteIdenticalForAnyJobCount) {
    TempDir dir("pipeline-det");
    const auto manifest = write_panel(dir, 400);
    auto one = config_for(manifest, dir / "one");
    one.jobs = 1;
    auto many = config_for(manifest, dir / "many");
    many.jobs = 4;
    auto again = config_for(manifest, dir / "again");
    again.jobs = 1;
    run_pipeline(one);
    run_pipeline(many);
    run_pipeline(again);
    for (const char* name : kPipelineArtifacts) {
        const auto a = read_file(dir.path() / "one" / name);
        EXPECT_EQ(a, read_file(dir.path() / "many" / name)) << name;
        EXPECT_EQ(a, read_file(dir.path() / "again" / name)) << name;
    }
}

TEST(Pipeline, UnreadableFileFailsInIngest) {
    TempDir dir("pipeline-bad");
    write_panel(dir, 100);
    std::filesystem::remove(dir.path() / "prices" / "C.csv");
    try {
        run_pipeline(config_for(dir / "manifest.csv", dir / "out"));
        FAIL() << "expected a stage error";
    } catch (const StageError& e) {
        EXPECT_EQ(e.stage(), "ingest");
        EXPECT_EQ(e.exit_code(), 2);
        EXPECT_NE(std::string(e.what()).find("stage 'ingest' failed"), std::string::npos);
    }
    for (const char* name : kPipelineArtifacts) {
        EXPECT_FALSE(std::filesystem::exists(dir.path() / "out" / name)) << name;
    }
}

TEST(Pipeline, MissingManifestIsUsageError) {
    PipelineConfig c;
    try {
        run_pipeline(c);
        FAIL() << "expected a stage error";
    } catch (const StageError& e) {
        EXPECT_EQ(e.stage(), "config");
        EXPECT_EQ(e.exit_code(), 1);
    }
}

TEST(Pipeline, EffectiveWeightsAndGreedyStructure) {
    TempDir dir("pipeline-eff");
    auto c = config_for(write_panel(dir, 800), dir / "out");
    c.graph_weights = GraphWeights::effective;
    c.structure = StructureKind::greedy_attachment;
    c.discretization = Discretization::terciles;
    c.ascii_pgm = true;
    const auto result = run_pipeline(c);
    EXPECT_EQ(result.flow_out.kind, StructureKind::greedy_attachment);
    for (const auto& e : result.flow_out.edges) {
        if (result.flow_out.nodes[e.to] != "A") EXPECT_EQ(result.flow_out.nodes[e.from], "A");
    }
    EXPECT_EQ(read_file(dir.path() / "out" / "te_map.pgm").substr(0, 3), "P2\n");
}

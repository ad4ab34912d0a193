#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "teflow/config.hpp"
#include "teflow/entropy.hpp"
#include "teflow/error.hpp"
#include "teflow/network.hpp"
#include "teflow/surrogate.hpp"

namespace teflow {

std::string_view version();

// Failure inside run_pipeline; keeps the exit category of the cause.
class StageError : public Error {
public:
    StageError(std::string stage, const Error& cause)
        : Error(cause.kind(), "stage '" + stage + "' failed: " + cause.what()), stage_(std::move(stage)) {}

    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

struct PipelineResult {
    TEMatrix te;
    CorrelationMatrix correlation;
    std::vector<SurrogateReport> surrogates;
    std::vector<FlowSummary> profiles;
    FlowGraph flow_out;
    FlowGraph flow_in;
    std::vector<std::filesystem::path> artifacts;
};

// Artifact file names written into the output directory.
inline constexpr const char* kPipelineArtifacts[] = {
    "te_matrix.csv",      "corr_matrix.csv",    "te_map.pgm",
    "corr_map.pgm",       "flow_profiles.csv",  "surrogates.csv",
    "flow_out.dot",       "flow_in.dot",        "run_metadata.json",
    "flow_out_edges.csv", "flow_in_edges.csv",
};

// ingest -> symbolize -> te -> corr -> surrogate -> network -> render ->
// metadata. On failure every artifact written so far is removed and a
// StageError naming the stage is thrown.
PipelineResult run_pipeline(const PipelineConfig& config);

}  // namespace teflow

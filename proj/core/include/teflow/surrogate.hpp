#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "teflow/entropy.hpp"
#include "teflow/symbolize.hpp"

namespace teflow {

struct SurrogateReport {
    std::string source;
    std::string target;
    double observed_te = 0.0;
    double null_mean = 0.0;
    double null_std = 0.0;    // sample standard deviation; 0 when M == 1
    double null_q95 = 0.0;    // empirical 95th percentile of the null
    double z_score = kMissing;  // missing when null_std == 0
    int realizations = 0;
    std::uint64_t seed = 0;
};

// Uniform random permutation of the states (Fisher-Yates on mt19937_64).
// Dates are kept in place; only the states move.
SymbolSequence shuffle_sequence(const SymbolSequence& seq, std::uint64_t seed);

// Observed TE(source -> target) on the aligned inputs, and M re-estimates on
// independently shuffled copies of both sequences. Realization r shuffles the
// target with derive_seed(seed, {r, 0}) and the source with
// derive_seed(seed, {r, 1}).
SurrogateReport null_distribution(const SymbolSequence& target, const SymbolSequence& source,
                                  const EmbeddingConfig& config, int realizations,
                                  std::uint64_t seed);

// Observed TE minus the null mean. Negative values are reported as-is.
double effective_te(const SurrogateReport& report);

struct SurrogateOptions {
    int realizations = 100;
    std::uint64_t seed = 0;
    int jobs = 0;
    int lag = 0;
};

// Reports for every ordered pair, row-major over (source, target) with the
// diagonal skipped. Pair p uses seed derive_seed(master, {stage_tag("surrogate"), p})
// with p = source * N + target. Pairs that cannot be aligned are omitted.
std::vector<SurrogateReport> surrogate_panel(std::span<const SymbolSequence> panel,
                                             const EmbeddingConfig& config,
                                             const SurrogateOptions& options);

// Effective-TE matrix built from panel reports; cells without a report stay
// missing.
SquareMatrix effective_te_matrix(const std::vector<std::string>& symbols,
                                 std::span<const SurrogateReport> reports);

// Header: pair,observed,null_mean,null_std,z,M,seed; pair is "SOURCE->TARGET".
std::string format_surrogate_csv(std::span<const SurrogateReport> reports);
void write_surrogate_csv(const std::filesystem::path& path, std::span<const SurrogateReport> reports);

}  // namespace teflow

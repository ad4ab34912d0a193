#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "teflow/matrix.hpp"
#include "teflow/symbolize.hpp"

namespace teflow {

enum class LogBase { two, e, ten };

LogBase parse_log_base(std::string_view name);
std::string_view to_string(LogBase base);
// ln(base); divide a value in nats by this to convert.
double log_base_nats(LogBase base);

// History lengths: k for the target process, l for the source process.
struct EmbeddingConfig {
    int k = 1;
    int l = 1;
    LogBase base = LogBase::two;

    void validate() const;
};

// Plug-in histogram of (next target state, target history, source history)
// over every usable window. Keys pack the triple with base-alphabet digits:
//   key = (next * A^k + target_history) * A^l + source_history
// where each history has its most recent symbol as the least significant
// digit. Entries are sorted by key and every stored count is >= 1.
class JointCounts {
public:
    struct Entry {
        std::uint64_t key;
        std::uint64_t count;
    };

    JointCounts(int alphabet, EmbeddingConfig config, std::vector<Entry> entries);

    int alphabet() const { return alphabet_; }
    const EmbeddingConfig& config() const { return config_; }
    std::uint64_t total() const { return total_; }
    std::span<const Entry> entries() const { return entries_; }

    std::uint64_t target_span() const { return target_span_; }  // A^k
    std::uint64_t source_span() const { return source_span_; }  // A^l

    std::uint64_t key(std::uint64_t next, std::uint64_t target_history,
                      std::uint64_t source_history) const {
        return (next * target_span_ + target_history) * source_span_ + source_history;
    }
    // Count for a key; zero when absent.
    std::uint64_t count(std::uint64_t next, std::uint64_t target_history,
                        std::uint64_t source_history) const;

private:
    int alphabet_;
    EmbeddingConfig config_;
    std::uint64_t target_span_;
    std::uint64_t source_span_;
    std::uint64_t total_ = 0;
    std::vector<Entry> entries_;
};

// One window per t in [max(k,l) - 1, N - 2]; total = N - max(k, l).
JointCounts count_joint(std::span<const std::uint8_t> target, std::span<const std::uint8_t> source,
                        int alphabet, const EmbeddingConfig& config);
JointCounts count_joint(const SymbolSequence& target, const SymbolSequence& source,
                        const EmbeddingConfig& config);

enum class RateKind { target_only, joint };

// Conditional entropy of the next target state given the target history
// (target_only) or given both histories (joint), in the configured base.
double entropy_rate(const JointCounts& counts, RateKind which);

// h_target_only - h_joint. Values in (-1e-12, 0) are clamped to 0; anything
// more negative throws InvariantError.
double transfer_entropy_decomposed(const JointCounts& counts);

// Direct sum of p(n, i, j) log[p(n | i, j) / p(n | i)]; same clamp rule.
double transfer_entropy_direct(const JointCounts& counts);

inline constexpr double kNegativeClamp = 1e-12;

// TE from source to target on already aligned, equal-length sequences.
double transfer_entropy(const SymbolSequence& target, const SymbolSequence& source,
                        const EmbeddingConfig& config);

// values.at(j, i) = T_{j -> i}; diagonal and infeasible pairs are missing.
struct TEMatrix {
    SquareMatrix values;
    std::vector<std::size_t> samples;  // usable windows per ordered pair, row-major
    EmbeddingConfig config;
    int alphabet = 3;
    std::vector<std::string> issues;

    std::size_t size() const { return values.size(); }
    std::size_t samples_at(std::size_t row, std::size_t col) const {
        return samples[row * values.size() + col];
    }
};

struct PairwiseOptions {
    int jobs = 0;
    int lag = 0;
};

// Every ordered pair (source j, target i), j != i: date-align, count, estimate.
// Output is bitwise identical for any number of jobs.
TEMatrix te_matrix(std::span<const SymbolSequence> panel, const EmbeddingConfig& config,
                   const PairwiseOptions& options = {});

struct CorrelationMatrix {
    SquareMatrix values;
    std::vector<std::string> issues;

    std::size_t size() const { return values.size(); }
};

// Pearson correlation; NaN when either side has zero variance or fewer than
// two samples.
double pearson(std::span<const double> a, std::span<const double> b);

// Pairwise date-aligned Pearson correlation; diagonal exactly 1.
CorrelationMatrix cross_correlation_matrix(std::span<const ReturnSeries> panel, int jobs = 0);

}  // namespace teflow

#include "teflow/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "teflow/error.hpp"
#include "teflow/parallel.hpp"
#include "teflow/rng.hpp"
#include "teflow/textio.hpp"

namespace teflow {

SymbolSequence shuffle_sequence(const SymbolSequence& seq, std::uint64_t seed) {
    SymbolSequence out = seq;
    Engine eng(seed);
    fisher_yates(std::span<std::uint8_t>(out.states), eng);
    return out;
}

namespace {

// Shuffles `states` in place from a fresh engine; avoids copying the
// sequence metadata in the realization loop.
void shuffle_states(std::vector<std::uint8_t>& states, std::uint64_t seed) {
    Engine eng(seed);
    fisher_yates(std::span<std::uint8_t>(states), eng);
}

}  // namespace

SurrogateReport null_distribution(const SymbolSequence& target, const SymbolSequence& source,
                                  const EmbeddingConfig& config, int realizations,
                                  std::uint64_t seed) {
    if (realizations < 1) {
        throw UsageError("surrogate realizations must be >= 1");
    }
    if (target.alphabet != source.alphabet) {
        throw DataError("null_distribution: alphabet mismatch");
    }
    SurrogateReport report;
    report.source = source.symbol;
    report.target = target.symbol;
    report.realizations = realizations;
    report.seed = seed;
    report.observed_te =
        transfer_entropy_decomposed(count_joint(target.states, source.states, target.alphabet, config));

    std::vector<double> null(static_cast<std::size_t>(realizations));
    std::vector<std::uint8_t> t_states;
    std::vector<std::uint8_t> s_states;
    for (int r = 0; r < realizations; ++r) {
        t_states = target.states;
        s_states = source.states;
        const auto ru = static_cast<std::uint64_t>(r);
        shuffle_states(t_states, derive_seed(seed, {ru, 0}));
        shuffle_states(s_states, derive_seed(seed, {ru, 1}));
        null[static_cast<std::size_t>(r)] =
            transfer_entropy_decomposed(count_joint(t_states, s_states, target.alphabet, config));
    }

    const double m = static_cast<double>(realizations);
    report.null_mean = std::accumulate(null.begin(), null.end(), 0.0) / m;
    if (realizations > 1) {
        double ss = 0.0;
        for (double v : null) ss += (v - report.null_mean) * (v - report.null_mean);
        report.null_std = std::sqrt(ss / (m - 1.0));
    }
    auto sorted = null;
    std::sort(sorted.begin(), sorted.end());
    // Nearest-rank percentile.
    const auto rank = static_cast<std::size_t>(std::ceil(0.95 * m));
    report.null_q95 = sorted[std::max<std::size_t>(rank, 1) - 1];
    if (report.null_std > 0.0) {
        report.z_score = (report.observed_te - report.null_mean) / report.null_std;
    }
    return report;
}

double effective_te(const SurrogateReport& report) {
    return report.observed_te - report.null_mean;
}

std::vector<SurrogateReport> surrogate_panel(std::span<const SymbolSequence> panel,
                                             const EmbeddingConfig& config,
                                             const SurrogateOptions& options) {
    config.validate();
    const auto n = panel.size();
    const auto stage = stage_tag("surrogate");
    std::vector<SurrogateReport> slots(n * n);
    std::vector<char> filled(n * n, 0);
    parallel_for(n * n, options.jobs, [&](std::size_t cell) {
        const auto source = cell / n;
        const auto target = cell % n;
        if (source == target) return;
        AlignedSymbols aligned;
        try {
            aligned = align_symbols(panel[target], panel[source], options.lag);
            const auto depth = static_cast<std::size_t>(std::max(config.k, config.l));
            if (aligned.target.size() <= depth) return;
        } catch (const DataError&) {
            return;
        }
        slots[cell] = null_distribution(aligned.target, aligned.source, config, options.realizations,
                                        derive_seed(options.seed, {stage, cell}));
        filled[cell] = 1;
    });
    std::vector<SurrogateReport> out;
    for (std::size_t cell = 0; cell < n * n; ++cell) {
        if (filled[cell]) out.push_back(std::move(slots[cell]));
    }
    return out;
}

SquareMatrix effective_te_matrix(const std::vector<std::string>& symbols,
                                 std::span<const SurrogateReport> reports) {
    SquareMatrix m(symbols);
    for (const auto& r : reports) {
        m.at(m.index_of(r.source), m.index_of(r.target)) = effective_te(r);
    }
    return m;
}

std::string format_surrogate_csv(std::span<const SurrogateReport> reports) {
    std::string out = "pair,observed,null_mean,null_std,z,M,seed\n";
    for (const auto& r : reports) {
        out += r.source + "->" + r.target;
        out += ',' + format_number(r.observed_te);
        out += ',' + format_number(r.null_mean);
        out += ',' + format_number(r.null_std);
        out += ',' + format_number(r.z_score);
        out += ',' + std::to_string(r.realizations);
        out += ',' + std::to_string(r.seed);
        out += '\n';
    }
    return out;
}

void write_surrogate_csv(const std::filesystem::path& path, std::span<const SurrogateReport> reports) {
    write_file(path, format_surrogate_csv(reports));
}

}  // namespace teflow

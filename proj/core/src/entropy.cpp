#include "teflow/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "teflow/error.hpp"
#include "teflow/parallel.hpp"

namespace teflow {

LogBase parse_log_base(std::string_view name) {
    if (name == "2") return LogBase::two;
    if (name == "e") return LogBase::e;
    if (name == "10") return LogBase::ten;
    throw UsageError("log base must be one of 2, e, 10 (got '" + std::string(name) + "')");
}

std::string_view to_string(LogBase base) {
    switch (base) {
        case LogBase::two: return "2";
        case LogBase::e: return "e";
        case LogBase::ten: return "10";
    }
    return "?";
}

double log_base_nats(LogBase base) {
    switch (base) {
        case LogBase::two: return std::log(2.0);
        case LogBase::e: return 1.0;
        case LogBase::ten: return std::log(10.0);
    }
    return 1.0;
}

void EmbeddingConfig::validate() const {
    if (k < 1 || l < 1) {
        throw UsageError("history lengths k and l must be >= 1");
    }
}

namespace {

std::uint64_t checked_pow(int alphabet, int exponent) {
    std::uint64_t out = 1;
    const auto a = static_cast<std::uint64_t>(alphabet);
    for (int i = 0; i < exponent; ++i) {
        if (out > std::numeric_limits<std::uint64_t>::max() / a) {
            throw UsageError("alphabet^(1+k+l) does not fit in 64 bits");
        }
        out *= a;
    }
    return out;
}

// Largest key space counted with a dense histogram.
constexpr std::uint64_t kDenseLimit = 1u << 16;

// Counts of a projection of the joint key space. Dense when small,
// otherwise a sorted vector searched by binary search.
class Marginal {
public:
    template <typename Project>
    Marginal(std::span<const JointCounts::Entry> entries, std::uint64_t dim, Project project)
        : dense_(dim <= kDenseLimit) {
        if (dense_) {
            table_.assign(dim, 0);
            for (const auto& e : entries) table_[project(e.key)] += e.count;
        } else {
            sparse_.reserve(entries.size());
            for (const auto& e : entries) sparse_.push_back({project(e.key), e.count});
            std::sort(sparse_.begin(), sparse_.end(),
                      [](const auto& a, const auto& b) { return a.key < b.key; });
            std::vector<JointCounts::Entry> merged;
            for (const auto& e : sparse_) {
                if (!merged.empty() && merged.back().key == e.key) {
                    merged.back().count += e.count;
                } else {
                    merged.push_back(e);
                }
            }
            sparse_ = std::move(merged);
        }
    }

    std::uint64_t get(std::uint64_t key) const {
        if (dense_) return table_[key];
        auto it = std::lower_bound(sparse_.begin(), sparse_.end(), key,
                                   [](const auto& e, std::uint64_t k) { return e.key < k; });
        return (it != sparse_.end() && it->key == key) ? it->count : 0;
    }

    template <typename Visit>
    void for_each(Visit visit) const {
        if (dense_) {
            for (std::uint64_t k = 0; k < table_.size(); ++k) {
                if (table_[k] != 0) visit(k, table_[k]);
            }
        } else {
            for (const auto& e : sparse_) visit(e.key, e.count);
        }
    }

private:
    bool dense_;
    std::vector<std::uint64_t> table_;
    std::vector<JointCounts::Entry> sparse_;
};

double clamp_te(double te, const char* form) {
    if (te < 0.0) {
        if (te > -kNegativeClamp) return 0.0;
        throw InvariantError(std::string("negative plug-in transfer entropy (") + form +
                             "): " + std::to_string(te));
    }
    return te;
}

}  // namespace

JointCounts::JointCounts(int alphabet, EmbeddingConfig config, std::vector<Entry> entries)
    : alphabet_(alphabet),
      config_(config),
      target_span_(checked_pow(alphabet, config.k)),
      source_span_(checked_pow(alphabet, config.l)),
      entries_(std::move(entries)) {
    for (const auto& e : entries_) total_ += e.count;
}

std::uint64_t JointCounts::count(std::uint64_t next, std::uint64_t target_history,
                                 std::uint64_t source_history) const {
    const auto k = key(next, target_history, source_history);
    auto it = std::lower_bound(entries_.begin(), entries_.end(), k,
                               [](const Entry& e, std::uint64_t v) { return e.key < v; });
    return (it != entries_.end() && it->key == k) ? it->count : 0;
}

JointCounts count_joint(std::span<const std::uint8_t> target, std::span<const std::uint8_t> source,
                        int alphabet, const EmbeddingConfig& config) {
    config.validate();
    if (alphabet < 2) {
        throw UsageError("alphabet size must be >= 2");
    }
    if (target.size() != source.size()) {
        throw DataError("count_joint: target and source lengths differ (" +
                        std::to_string(target.size()) + " vs " + std::to_string(source.size()) + ")");
    }
    const auto n = target.size();
    const auto depth = static_cast<std::size_t>(std::max(config.k, config.l));
    if (n <= depth) {
        throw DataError("count_joint: sequence of length " + std::to_string(n) +
                        " has no usable window for history " + std::to_string(depth));
    }
    const auto a = static_cast<std::uint64_t>(alphabet);
    const auto cells = checked_pow(alphabet, 1 + config.k + config.l);
    const auto target_span = checked_pow(alphabet, config.k);
    const auto source_span = checked_pow(alphabet, config.l);

    for (std::size_t t = 0; t < n; ++t) {
        if (target[t] >= alphabet || source[t] >= alphabet) {
            throw DataError("count_joint: state outside alphabet at position " + std::to_string(t));
        }
    }

    // Rolling histories ending at t = depth - 1.
    std::uint64_t ih = 0;
    std::uint64_t jh = 0;
    for (std::size_t t = depth - static_cast<std::size_t>(config.k); t < depth; ++t) ih = ih * a + target[t];
    for (std::size_t t = depth - static_cast<std::size_t>(config.l); t < depth; ++t) jh = jh * a + source[t];

    std::vector<JointCounts::Entry> entries;
    auto key_at = [&](std::size_t t) {
        return (static_cast<std::uint64_t>(target[t + 1]) * target_span + ih) * source_span + jh;
    };
    auto advance = [&](std::size_t t) {
        ih = (ih * a + target[t + 1]) % target_span;
        jh = (jh * a + source[t + 1]) % source_span;
    };

    if (cells <= kDenseLimit) {
        std::vector<std::uint64_t> hist(cells, 0);
        for (std::size_t t = depth - 1; t + 1 < n; ++t) {
            ++hist[key_at(t)];
            advance(t);
        }
        for (std::uint64_t k = 0; k < cells; ++k) {
            if (hist[k] != 0) entries.push_back({k, hist[k]});
        }
    } else {
        std::vector<std::uint64_t> keys;
        keys.reserve(n - depth);
        for (std::size_t t = depth - 1; t + 1 < n; ++t) {
            keys.push_back(key_at(t));
            advance(t);
        }
        std::sort(keys.begin(), keys.end());
        for (auto k : keys) {
            if (!entries.empty() && entries.back().key == k) {
                ++entries.back().count;
            } else {
                entries.push_back({k, 1});
            }
        }
    }
    return JointCounts(alphabet, config, std::move(entries));
}

JointCounts count_joint(const SymbolSequence& target, const SymbolSequence& source,
                        const EmbeddingConfig& config) {
    if (target.alphabet != source.alphabet) {
        throw DataError("count_joint: alphabet mismatch");
    }
    return count_joint(target.states, source.states, target.alphabet, config);
}

double entropy_rate(const JointCounts& counts, RateKind which) {
    if (counts.total() == 0) {
        throw DataError("entropy_rate: empty counts");
    }
    const double total = static_cast<double>(counts.total());
    const auto is = counts.target_span();
    const auto js = counts.source_span();
    const auto a = static_cast<std::uint64_t>(counts.alphabet());
    double h = 0.0;
    if (which == RateKind::joint) {
        const Marginal histories(counts.entries(), is * js, [&](std::uint64_t key) { return key % (is * js); });
        for (const auto& e : counts.entries()) {
            const double c = static_cast<double>(e.count);
            h -= c / total * std::log(c / static_cast<double>(histories.get(e.key % (is * js))));
        }
    } else {
        const Marginal next_and_target(counts.entries(), a * is, [&](std::uint64_t key) { return key / js; });
        const Marginal target_history(counts.entries(), is, [&](std::uint64_t key) { return (key / js) % is; });
        next_and_target.for_each([&](std::uint64_t key, std::uint64_t count) {
            const double c = static_cast<double>(count);
            h -= c / total * std::log(c / static_cast<double>(target_history.get(key % is)));
        });
    }
    // -0.0 for deterministic inputs reads oddly in exports.
    return h == 0.0 ? 0.0 : h / log_base_nats(counts.config().base);
}

double transfer_entropy_decomposed(const JointCounts& counts) {
    return clamp_te(entropy_rate(counts, RateKind::target_only) - entropy_rate(counts, RateKind::joint),
                    "decomposed");
}

double transfer_entropy_direct(const JointCounts& counts) {
    if (counts.total() == 0) {
        throw DataError("transfer_entropy_direct: empty counts");
    }
    const double total = static_cast<double>(counts.total());
    const auto is = counts.target_span();
    const auto js = counts.source_span();
    const auto a = static_cast<std::uint64_t>(counts.alphabet());
    const Marginal histories(counts.entries(), is * js, [&](std::uint64_t key) { return key % (is * js); });
    const Marginal next_and_target(counts.entries(), a * is, [&](std::uint64_t key) { return key / js; });
    const Marginal target_history(counts.entries(), is, [&](std::uint64_t key) { return (key / js) % is; });

    double te = 0.0;
    for (const auto& e : counts.entries()) {
        const double c = static_cast<double>(e.count);
        const double p_full = c / static_cast<double>(histories.get(e.key % (is * js)));
        const double p_own = static_cast<double>(next_and_target.get(e.key / js)) /
                             static_cast<double>(target_history.get((e.key / js) % is));
        te += c / total * std::log(p_full / p_own);
    }
    return clamp_te(te / log_base_nats(counts.config().base), "direct");
}

double transfer_entropy(const SymbolSequence& target, const SymbolSequence& source,
                        const EmbeddingConfig& config) {
    return transfer_entropy_decomposed(count_joint(target, source, config));
}

TEMatrix te_matrix(std::span<const SymbolSequence> panel, const EmbeddingConfig& config,
                   const PairwiseOptions& options) {
    config.validate();
    const auto n = panel.size();
    if (n < 2) {
        throw UsageError("te_matrix needs at least 2 series");
    }
    std::vector<std::string> symbols;
    for (const auto& s : panel) {
        if (s.alphabet != panel.front().alphabet) {
            throw DataError("te_matrix: series use different alphabets");
        }
        symbols.push_back(s.symbol);
    }

    TEMatrix out;
    out.values = SquareMatrix(symbols);
    out.samples.assign(n * n, 0);
    out.config = config;
    out.alphabet = panel.front().alphabet;

    std::vector<std::string> pair_issue(n * n);
    parallel_for(n * n, options.jobs, [&](std::size_t cell) {
        const auto source = cell / n;
        const auto target = cell % n;
        if (source == target) return;
        try {
            const auto aligned = align_symbols(panel[target], panel[source], options.lag);
            const auto counts = count_joint(aligned.target, aligned.source, config);
            out.values.at(source, target) = transfer_entropy_decomposed(counts);
            out.samples[cell] = counts.total();
        } catch (const DataError& e) {
            pair_issue[cell] = symbols[source] + "->" + symbols[target] + ": " + e.what();
        }
    });
    for (auto& issue : pair_issue) {
        if (!issue.empty()) out.issues.push_back(std::move(issue));
    }
    return out;
}

double pearson(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw DataError("pearson: length mismatch");
    }
    const auto n = a.size();
    if (n < 2) return kMissing;
    double ma = 0.0;
    double mb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double saa = 0.0;
    double sbb = 0.0;
    double sab = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double da = a[i] - ma;
        const double db = b[i] - mb;
        saa += da * da;
        sbb += db * db;
        sab += da * db;
    }
    if (saa == 0.0 || sbb == 0.0) return kMissing;
    return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

CorrelationMatrix cross_correlation_matrix(std::span<const ReturnSeries> panel, int jobs) {
    const auto n = panel.size();
    if (n < 2) {
        throw UsageError("cross_correlation_matrix needs at least 2 series");
    }
    std::vector<std::string> symbols;
    for (const auto& s : panel) symbols.push_back(s.symbol);

    CorrelationMatrix out;
    out.values = SquareMatrix(symbols);
    for (std::size_t i = 0; i < n; ++i) out.values.at(i, i) = 1.0;

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);

    std::vector<std::string> pair_issue(pairs.size());
    parallel_for(pairs.size(), jobs, [&](std::size_t p) {
        const auto [i, j] = pairs[p];
        double r = kMissing;
        try {
            const auto aligned = align(panel[i], panel[j]);
            r = pearson(aligned.left.values, aligned.right.values);
            if (is_missing(r)) {
                pair_issue[p] = symbols[i] + "," + symbols[j] + ": zero variance on common window";
            }
        } catch (const DataError& e) {
            pair_issue[p] = symbols[i] + "," + symbols[j] + ": " + e.what();
        }
        out.values.at(i, j) = r;
        out.values.at(j, i) = r;
    });
    for (auto& issue : pair_issue) {
        if (!issue.empty()) out.issues.push_back(std::move(issue));
    }
    return out;
}

}  // namespace teflow

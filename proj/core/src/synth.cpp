#include "teflow/synth.hpp"

#include <cmath>
#include <map>

#include "teflow/error.hpp"
#include "teflow/rng.hpp"

namespace teflow {

void CoupledProcessSpec::validate() const {
    if (alphabet < 2 || alphabet > 255) {
        throw UsageError("synth: alphabet must be in [2, 255]");
    }
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
        throw UsageError("synth: epsilon must be in [0, 1]");
    }
    if (names.empty()) {
        throw UsageError("synth: at least one process is required");
    }
    std::vector<int> drivers(names.size(), 0);
    for (const auto& [driver, follower] : topology) {
        if (driver >= names.size() || follower >= names.size() || driver == follower) {
            throw UsageError("synth: invalid topology edge");
        }
        if (++drivers[follower] > 1) {
            throw UsageError("synth: follower " + names[follower] + " has more than one driver");
        }
    }
}

CoupledProcessSpec CoupledProcessSpec::pair(int alphabet, double epsilon, std::size_t length,
                                            std::uint64_t seed) {
    CoupledProcessSpec spec;
    spec.alphabet = alphabet;
    spec.epsilon = epsilon;
    spec.length = length;
    spec.seed = seed;
    return spec;
}

CoupledProcessSpec CoupledProcessSpec::chain(std::vector<std::string> names, int alphabet,
                                             double epsilon, std::size_t length, std::uint64_t seed) {
    CoupledProcessSpec spec = pair(alphabet, epsilon, length, seed);
    spec.names = std::move(names);
    spec.topology.clear();
    for (std::size_t i = 1; i < spec.names.size(); ++i) spec.topology.emplace_back(i - 1, i);
    return spec;
}

CoupledProcessSpec CoupledProcessSpec::star(std::vector<std::string> names, int alphabet,
                                            double epsilon, std::size_t length, std::uint64_t seed) {
    CoupledProcessSpec spec = pair(alphabet, epsilon, length, seed);
    spec.names = std::move(names);
    spec.topology.clear();
    for (std::size_t i = 1; i < spec.names.size(); ++i) spec.topology.emplace_back(0, i);
    return spec;
}

std::vector<SymbolSequence> generate(const CoupledProcessSpec& spec) {
    spec.validate();
    const auto nodes = spec.names.size();
    constexpr auto none = static_cast<std::size_t>(-1);
    std::vector<std::size_t> driver(nodes, none);
    for (const auto& [d, f] : spec.topology) driver[f] = d;

    std::vector<SymbolSequence> out(nodes);
    std::vector<Engine> engines;
    const auto stage = stage_tag("synth");
    for (std::size_t v = 0; v < nodes; ++v) {
        out[v].symbol = spec.names[v];
        out[v].alphabet = spec.alphabet;
        out[v].states.resize(spec.length);
        engines.emplace_back(derive_seed(spec.seed, {stage, v}));
    }
    const auto a = static_cast<std::uint64_t>(spec.alphabet);
    for (std::size_t t = 0; t < spec.length; ++t) {
        for (std::size_t v = 0; v < nodes; ++v) {
            auto& eng = engines[v];
            if (driver[v] == none) {
                out[v].states[t] = static_cast<std::uint8_t>(uniform_below(eng, a));
                continue;
            }
            // Draw both variates every step so streams stay aligned across epsilon.
            const double coin = uniform_unit(eng);
            const auto fresh = static_cast<std::uint8_t>(uniform_below(eng, a));
            out[v].states[t] = (t > 0 && coin < spec.epsilon) ? out[driver[v]].states[t - 1] : fresh;
        }
    }
    return out;
}

double analytic_te(int alphabet, double epsilon, LogBase base) {
    if (alphabet < 2 || !(epsilon >= 0.0 && epsilon <= 1.0)) {
        throw UsageError("analytic_te: need alphabet >= 2 and epsilon in [0, 1]");
    }
    const double a = alphabet;
    const double q = epsilon + (1.0 - epsilon) / a;
    const double r = (1.0 - epsilon) / a;
    auto term = [](double p, double ratio) { return p > 0.0 ? p * std::log(ratio) : 0.0; };
    const double nats = term(q, q * a) + (a - 1.0) * term(r, r * a);
    return nats / log_base_nats(base);
}

namespace {

double log_in(LogBase base, double x) {
    switch (base) {
        case LogBase::two: return std::log2(x);
        case LogBase::ten: return std::log10(x);
        case LogBase::e: break;
    }
    return std::log(x);
}

}  // namespace

double brute_force_te(const SymbolSequence& target, const SymbolSequence& source,
                      const EmbeddingConfig& config) {
    if (config.k < 1 || config.l < 1) {
        throw UsageError("brute_force_te: k and l must be >= 1");
    }
    if (target.size() != source.size()) {
        throw DataError("brute_force_te: length mismatch");
    }
    const int a = target.alphabet;
    const int k = config.k;
    const int l = config.l;
    const int depth = std::max(k, l);
    const int n = static_cast<int>(target.size());
    if (n - depth < 1) {
        throw DataError("brute_force_te: no usable window");
    }

    using Tuple = std::vector<int>;
    std::map<Tuple, double> joint;        // (next, i-hist, j-hist)
    std::map<Tuple, double> hist_both;    // (i-hist, j-hist)
    std::map<Tuple, double> next_own;     // (next, i-hist)
    std::map<Tuple, double> own;          // (i-hist)
    double windows = 0.0;
    for (int t = depth - 1; t <= n - 2; ++t) {
        Tuple ih;
        Tuple jh;
        for (int m = t - k + 1; m <= t; ++m) ih.push_back(target.states[static_cast<std::size_t>(m)]);
        for (int m = t - l + 1; m <= t; ++m) jh.push_back(source.states[static_cast<std::size_t>(m)]);
        const int next = target.states[static_cast<std::size_t>(t + 1)];

        Tuple full{next};
        full.insert(full.end(), ih.begin(), ih.end());
        full.insert(full.end(), jh.begin(), jh.end());
        Tuple both = ih;
        both.insert(both.end(), jh.begin(), jh.end());
        Tuple no{next};
        no.insert(no.end(), ih.begin(), ih.end());

        joint[full] += 1.0;
        hist_both[both] += 1.0;
        next_own[no] += 1.0;
        own[ih] += 1.0;
        windows += 1.0;
    }

    auto lookup = [](const std::map<Tuple, double>& m, const Tuple& key) {
        auto it = m.find(key);
        return it == m.end() ? 0.0 : it->second;
    };

    // Odometer over every tuple in the alphabet^(1+k+l) space.
    const int width = 1 + k + l;
    Tuple digits(static_cast<std::size_t>(width), 0);
    double te = 0.0;
    while (true) {
        const double c = lookup(joint, digits);
        if (c > 0.0) {
            const Tuple ih(digits.begin() + 1, digits.begin() + 1 + k);
            const Tuple both(digits.begin() + 1, digits.end());
            const Tuple no(digits.begin(), digits.begin() + 1 + k);
            const double p_joint = c / windows;
            const double p_cond_full = c / lookup(hist_both, both);
            const double p_cond_own = lookup(next_own, no) / lookup(own, ih);
            te += p_joint * log_in(config.base, p_cond_full / p_cond_own);
        }
        int pos = width - 1;
        while (pos >= 0 && ++digits[static_cast<std::size_t>(pos)] == a) {
            digits[static_cast<std::size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0) break;
    }
    return te;
}

std::vector<PriceSeries> to_price_panel(const std::vector<SymbolSequence>& sequences, double step,
                                        Date start) {
    if (!(step > 0.0)) {
        throw UsageError("synth: price step must be positive");
    }
    std::vector<PriceSeries> out;
    for (const auto& seq : sequences) {
        PriceSeries p;
        p.symbol = seq.symbol;
        Date day = start;
        auto skip_weekend = [&] {
            while (day.weekday() == std::chrono::Saturday || day.weekday() == std::chrono::Sunday) {
                day = day.next_day();
            }
        };
        skip_weekend();
        double log_price = std::log(100.0);
        p.observations.push_back({day, 100.0});
        const double centre = (seq.alphabet - 1) / 2.0;
        for (auto s : seq.states) {
            day = day.next_day();
            skip_weekend();
            log_price += (static_cast<double>(s) - centre) * step;
            p.observations.push_back({day, std::exp(log_price)});
        }
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace teflow

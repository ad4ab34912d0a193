#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "teflow/entropy.hpp"
#include "teflow/ingest.hpp"
#include "teflow/symbolize.hpp"

namespace teflow {

// Discrete processes on `names.size()` nodes. Nodes without a driver are
// i.i.d. uniform over the alphabet. A follower copies its driver's previous
// state with probability epsilon and is otherwise uniform.
struct CoupledProcessSpec {
    int alphabet = 3;
    double epsilon = 1.0;
    std::size_t length = 100000;
    std::uint64_t seed = 0;
    std::vector<std::string> names{"A", "B"};
    std::vector<std::pair<std::size_t, std::size_t>> topology{{0, 1}};  // (driver, follower)

    void validate() const;

    static CoupledProcessSpec pair(int alphabet, double epsilon, std::size_t length, std::uint64_t seed);
    // names[0] -> names[1] -> ... -> names[n-1]
    static CoupledProcessSpec chain(std::vector<std::string> names, int alphabet, double epsilon,
                                    std::size_t length, std::uint64_t seed);
    // names[0] drives every other node.
    static CoupledProcessSpec star(std::vector<std::string> names, int alphabet, double epsilon,
                                   std::size_t length, std::uint64_t seed);
};

// Undated sequences, one per node. Node v draws from its own engine seeded
// with derive_seed(seed, {stage_tag("synth"), v}).
std::vector<SymbolSequence> generate(const CoupledProcessSpec& spec);

// Closed-form T(driver -> follower) for k = l = 1:
//   q log(qA) + (A - 1) r log(rA),  q = eps + (1 - eps)/A,  r = (1 - eps)/A.
double analytic_te(int alphabet, double epsilon, LogBase base = LogBase::two);

// Transfer entropy by explicit enumeration of every (next, target history,
// source history) tuple with separately tallied marginals. Shares no code
// with the entropy estimator; used as its oracle.
double brute_force_te(const SymbolSequence& target, const SymbolSequence& source,
                      const EmbeddingConfig& config);

// Price paths whose log returns are (state - (A-1)/2) * step, starting at 100
// on `start` and advancing over weekdays.
std::vector<PriceSeries> to_price_panel(const std::vector<SymbolSequence>& sequences, double step,
                                        Date start = Date{2000, 1, 3});

}  // namespace teflow

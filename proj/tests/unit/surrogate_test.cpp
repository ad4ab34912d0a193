#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "teflow/error.hpp"
#include "teflow/rng.hpp"
#include "teflow/surrogate.hpp"
#include "teflow/synth.hpp"
#include "test_support.hpp"

using namespace teflow;
using teflow::testing::random_sequence;
using teflow::testing::sequence;

TEST(Rng, EngineMatchesStandardReferenceValue) {
    // The standard requires the 10000th output of a default-seeded
    // mt19937_64 to be 9981545732273789042.
    Engine eng;
    eng.discard(9999);
    EXPECT_EQ(eng(), 9981545732273789042ull);
}

TEST(Rng, DerivedSeedsDifferByTag) {
    EXPECT_EQ(derive_seed(7, {1, 2}), derive_seed(7, {1, 2}));
    EXPECT_NE(derive_seed(7, {1, 2}), derive_seed(7, {2, 1}));
    EXPECT_NE(derive_seed(7, {1}), derive_seed(8, {1}));
    EXPECT_NE(stage_tag("surrogate"), stage_tag("synth"));
}

TEST(Rng, UniformBelowStaysInRange) {
    Engine eng(3);
    std::vector<int> hist(7, 0);
    for (int i = 0; i < 70000; ++i) ++hist[uniform_below(eng, 7)];
    for (int c : hist) EXPECT_NEAR(c, 10000, 500);
}

TEST(Shuffle, PreservesMultisetAndDates) {
    std::mt19937_64 gen(2);
    auto seq = random_sequence(gen, 500, 3);
    Date d{2010, 1, 4};
    for (std::size_t i = 0; i < seq.size(); ++i, d = d.next_day()) seq.dates.push_back(d);
    const auto shuffled = shuffle_sequence(seq, 99);
    EXPECT_EQ(shuffled.dates, seq.dates);
    auto a = seq.states;
    auto b = shuffled.states;
    EXPECT_NE(a, b);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    EXPECT_EQ(a, b);
    EXPECT_EQ(shuffle_sequence(seq, 99).states, shuffled.states);
    EXPECT_NE(shuffle_sequence(seq, 100).states, shuffled.states);
}

TEST(Shuffle, AllPermutationsEquallyLikely) {
    const auto seq = sequence({0, 1, 2});
    std::map<std::vector<std::uint8_t>, int> tally;
    for (std::uint64_t s = 0; s < 60000; ++s) ++tally[shuffle_sequence(seq, s).states];
    ASSERT_EQ(tally.size(), 6u);
    for (const auto& [perm, count] : tally) EXPECT_NEAR(count, 10000, 500);
}

TEST(NullDistribution, RealizationSeedsFollowDerivation) {
    std::mt19937_64 gen(5);
    const auto t = random_sequence(gen, 300, 3, "T");
    const auto s = random_sequence(gen, 300, 3, "S");
    const auto report = null_distribution(t, s, {1, 1}, 1, 1234);
    const double expected = transfer_entropy(shuffle_sequence(t, derive_seed(1234, {0, 0})),
                                             shuffle_sequence(s, derive_seed(1234, {0, 1})), {1, 1});
    EXPECT_EQ(report.null_mean, expected);
    EXPECT_EQ(report.null_std, 0.0);
    EXPECT_EQ(report.null_q95, expected);
    EXPECT_TRUE(is_missing(report.z_score));
    EXPECT_EQ(report.observed_te, transfer_entropy(t, s, {1, 1}));
    EXPECT_EQ(report.source, "S");
    EXPECT_EQ(report.target, "T");
    EXPECT_THROW(null_distribution(t, s, {1, 1}, 0, 1), UsageError);
}

TEST(NullDistribution, SampleStatistics) {
    std::mt19937_64 gen(6);
    const auto t = random_sequence(gen, 400, 3);
    const auto s = random_sequence(gen, 400, 3);
    const int m = 40;
    std::vector<double> null;
    for (int r = 0; r < m; ++r) {
        const auto ru = static_cast<std::uint64_t>(r);
        null.push_back(transfer_entropy(shuffle_sequence(t, derive_seed(77, {ru, 0})),
                                        shuffle_sequence(s, derive_seed(77, {ru, 1})), {1, 1}));
    }
    double mean = 0.0;
    for (double v : null) mean += v;
    mean /= m;
    double ss = 0.0;
    for (double v : null) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / (m - 1));
    std::sort(null.begin(), null.end());

    const auto report = null_distribution(t, s, {1, 1}, m, 77);
    EXPECT_NEAR(report.null_mean, mean, 1e-15);
    EXPECT_NEAR(report.null_std, sd, 1e-15);
    EXPECT_EQ(report.null_q95, null[37]);  // ceil(0.95 * 40) = 38th smallest
    EXPECT_NEAR(report.z_score, (report.observed_te - mean) / sd, 1e-9);
    EXPECT_NEAR(effective_te(report), report.observed_te - mean, 1e-15);
}

TEST(NullDistribution, IndependentPairsAreConsistentWithNull) {
    int within = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        std::mt19937_64 gen(seed);
        const auto t = random_sequence(gen, 2000, 3);
        const auto s = random_sequence(gen, 2000, 3);
        const auto r = null_distribution(t, s, {1, 1}, 100, seed);
        EXPECT_LT(r.null_mean, 0.02);
        if (std::abs(r.observed_te - r.null_mean) <= 3.0 * r.null_std) ++within;
    }
    EXPECT_GE(within, 18);
}

TEST(NullDistribution, StrongCouplingStandsOut) {
    const auto seqs = generate(CoupledProcessSpec::pair(3, 1.0, 2000, 4));
    const auto r = null_distribution(seqs[1], seqs[0], {1, 1}, 100, 4);
    EXPECT_GT(r.z_score, 50.0);
}

TEST(SurrogatePanel, OrderSeedsAndDeterminism) {
    std::mt19937_64 gen(9);
    std::vector<SymbolSequence> panel;
    for (const char* name : {"A", "B", "C"}) panel.push_back(random_sequence(gen, 300, 3, name));
    const SurrogateOptions serial{20, 555, 1, 0};
    const SurrogateOptions threaded{20, 555, 3, 0};
    const auto reports = surrogate_panel(panel, {1, 1}, serial);
    const auto again = surrogate_panel(panel, {1, 1}, threaded);
    ASSERT_EQ(reports.size(), 6u);
    const std::vector<std::pair<std::string, std::string>> order{
        {"A", "B"}, {"A", "C"}, {"B", "A"}, {"B", "C"}, {"C", "A"}, {"C", "B"}};
    for (std::size_t p = 0; p < reports.size(); ++p) {
        EXPECT_EQ(reports[p].source, order[p].first);
        EXPECT_EQ(reports[p].target, order[p].second);
        const auto s = panel[0].symbol == reports[p].source ? 0u : (reports[p].source == "B" ? 1u : 2u);
        const auto t = reports[p].target == "A" ? 0u : (reports[p].target == "B" ? 1u : 2u);
        EXPECT_EQ(reports[p].seed, derive_seed(555, {stage_tag("surrogate"), s * 3 + t}));
        EXPECT_EQ(reports[p].null_mean, again[p].null_mean);
        EXPECT_EQ(reports[p].null_std, again[p].null_std);
    }
    EXPECT_EQ(format_surrogate_csv(reports), format_surrogate_csv(again));

    const auto eff = effective_te_matrix({"A", "B", "C"}, reports);
    EXPECT_TRUE(is_missing(eff.at(0, 0)));
    EXPECT_EQ(eff.at(1, 2), effective_te(reports[3]));
}

TEST(SurrogateCsv, Layout) {
    SurrogateReport r;
    r.source = "GSPC";
    r.target = "N225";
    r.observed_te = 0.5;
    r.null_mean = 0.25;
    r.null_std = 0.125;
    r.z_score = 2.0;
    r.realizations = 10;
    r.seed = 42;
    SurrogateReport flat = r;
    flat.null_std = 0.0;
    flat.z_score = kMissing;
    const std::vector<SurrogateReport> rows{r, flat};
    EXPECT_EQ(format_surrogate_csv(rows),
              "pair,observed,null_mean,null_std,z,M,seed\n"
              "GSPC->N225,0.5,0.25,0.125,2,10,42\n"
              "GSPC->N225,0.5,0.25,0,NA,10,42\n");
}

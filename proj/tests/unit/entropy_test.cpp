#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "teflow/entropy.hpp"
#include "teflow/error.hpp"
#include "teflow/synth.hpp"
#include "test_support.hpp"

using namespace teflow;
using teflow::testing::random_sequence;
using teflow::testing::sequence;

namespace {

const double kLog2Of3 = std::log2(3.0);

}  // namespace

TEST(CountJoint, HandEnumeratedWindows) {
    const auto s = sequence({0, 1, 2});
    const auto c = count_joint(s, s, {1, 1});
    EXPECT_EQ(c.total(), 2u);
    ASSERT_EQ(c.entries().size(), 2u);
    EXPECT_EQ(c.count(1, 0, 0), 1u);
    EXPECT_EQ(c.count(2, 1, 1), 1u);
    EXPECT_EQ(c.count(0, 0, 0), 0u);

    const auto flat = sequence({1, 1, 1, 1});
    const auto cf = count_joint(flat, flat, {1, 1});
    ASSERT_EQ(cf.entries().size(), 1u);
    EXPECT_EQ(cf.count(1, 1, 1), 3u);

    const auto five = sequence({0, 1, 2, 0, 1});
    EXPECT_EQ(count_joint(five, five, {2, 1}).total(), 3u);
    EXPECT_EQ(count_joint(five, five, {1, 3}).total(), 2u);
}

TEST(CountJoint, HistoryEncodingMostRecentLeastSignificant) {
    // Window t = 1: next = target[2], target history (target[0], target[1]),
    // source history source[1].
    const auto target = sequence({2, 1, 0});
    const auto source = sequence({0, 2, 1});
    const auto c = count_joint(target, source, {2, 1});
    ASSERT_EQ(c.total(), 1u);
    EXPECT_EQ(c.count(0, 2 * 3 + 1, 2), 1u);
}

TEST(CountJoint, Errors) {
    EXPECT_THROW(count_joint(sequence({0, 1, 2}), sequence({0, 1}), {1, 1}), DataError);
    EXPECT_THROW(count_joint(sequence({0}), sequence({0}), {1, 1}), DataError);
    EXPECT_THROW(count_joint(sequence({0, 1}), sequence({0, 1}), {2, 1}), DataError);
    EXPECT_THROW(count_joint(sequence({0, 1, 2}), sequence({0, 1, 2}), {0, 1}), UsageError);
}

TEST(EntropyRate, ConstantSequenceIsZero) {
    const auto s = sequence({1, 1, 1, 1, 1});
    const auto c = count_joint(s, s, {1, 1});
    EXPECT_EQ(entropy_rate(c, RateKind::target_only), 0.0);
    EXPECT_EQ(entropy_rate(c, RateKind::joint), 0.0);
    EXPECT_EQ(transfer_entropy_direct(c), 0.0);
    EXPECT_EQ(transfer_entropy_decomposed(c), 0.0);
}

TEST(EntropyRate, UniformTernaryApproachesLog3) {
    std::mt19937_64 gen(99);
    const auto target = random_sequence(gen, 100000, 3);
    const auto source = random_sequence(gen, 100000, 3);
    const auto c = count_joint(target, source, {1, 1});
    EXPECT_NEAR(entropy_rate(c, RateKind::target_only), kLog2Of3, 0.01);
}

TEST(EntropyRate, ConditioningNeverIncreasesEntropy) {
    std::mt19937_64 gen(4);
    for (int trial = 0; trial < 200; ++trial) {
        const int a = 2 + trial % 3;
        const auto n = 5 + static_cast<std::size_t>(trial) * 3;
        const auto c = count_joint(random_sequence(gen, n, a), random_sequence(gen, n, a),
                                   {1 + trial % 2, 1 + (trial / 2) % 2});
        EXPECT_LE(entropy_rate(c, RateKind::joint), entropy_rate(c, RateKind::target_only) + 1e-12);
    }
}

TEST(TransferEntropy, FullCopyDriverReachesLog3AndReverseIsSmall) {
    const auto seqs = generate(CoupledProcessSpec::pair(3, 1.0, 100000, 17));
    const auto& driver = seqs[0];
    const auto& follower = seqs[1];
    EXPECT_NEAR(transfer_entropy(follower, driver, {1, 1}), kLog2Of3, 0.01);
    EXPECT_LE(transfer_entropy(driver, follower, {1, 1}), 0.01);
}

TEST(TransferEntropy, IndependentSourceGivesSmallPositiveBias) {
    std::mt19937_64 gen(8);
    const auto te = transfer_entropy(random_sequence(gen, 100000, 3), random_sequence(gen, 100000, 3), {1, 1});
    EXPECT_GE(te, 0.0);
    EXPECT_LT(te, 0.001);
}

TEST(TransferEntropy, DirectEqualsDecomposedOnRandomInputs) {
    std::mt19937_64 gen(1);
    double worst = 0.0;
    for (int seed = 0; seed < 100; ++seed) {
        const auto t = random_sequence(gen, 1000, 3);
        const auto s = random_sequence(gen, 1000, 3);
        const auto c = count_joint(t, s, {1 + seed % 2, 1 + (seed / 2) % 2});
        worst = std::max(worst, std::abs(transfer_entropy_direct(c) - transfer_entropy_decomposed(c)));
    }
    EXPECT_LT(worst, 1e-12);
}

TEST(TransferEntropy, SingleKeyIsZero) {
    const JointCounts c(3, {1, 1}, {{5, 40}});
    EXPECT_EQ(transfer_entropy_direct(c), 0.0);
    EXPECT_EQ(transfer_entropy_decomposed(c), 0.0);
}

TEST(TransferEntropy, NonNegativeAndAsymmetric) {
    std::mt19937_64 gen(12);
    for (int trial = 0; trial < 300; ++trial) {
        const auto n = 3 + static_cast<std::size_t>(trial % 40);
        const auto t = random_sequence(gen, n, 2 + trial % 3);
        const auto s = random_sequence(gen, n, t.alphabet);
        EXPECT_GE(transfer_entropy(t, s, {1, 1}), 0.0);
    }
    const auto seqs = generate(CoupledProcessSpec::pair(3, 0.7, 5000, 3));
    EXPECT_NE(transfer_entropy(seqs[1], seqs[0], {1, 1}), transfer_entropy(seqs[0], seqs[1], {1, 1}));
}

TEST(TransferEntropy, RelabelingInvariance) {
    std::mt19937_64 gen(21);
    const std::vector<std::uint8_t> perm{2, 0, 1};
    for (int trial = 0; trial < 50; ++trial) {
        auto t = random_sequence(gen, 300, 3);
        auto s = random_sequence(gen, 300, 3);
        const double before = transfer_entropy(t, s, {1, 2});
        for (auto& v : t.states) v = perm[v];
        for (auto& v : s.states) v = perm[v];
        EXPECT_NEAR(transfer_entropy(t, s, {1, 2}), before, 1e-12);
    }
}

TEST(TransferEntropy, MatchesEnumerationOracleOnShortBinarySequences) {
    std::mt19937_64 gen(77);
    for (int trial = 0; trial < 500; ++trial) {
        const auto n = 3 + static_cast<std::size_t>(trial % 10);  // N <= 12
        const EmbeddingConfig cfg{1 + trial % 2, 1 + (trial / 2) % 2};
        if (n <= static_cast<std::size_t>(std::max(cfg.k, cfg.l))) continue;
        const auto t = random_sequence(gen, n, 2);
        const auto s = random_sequence(gen, n, 2);
        const auto c = count_joint(t, s, cfg);
        const double oracle = brute_force_te(t, s, cfg);
        EXPECT_NEAR(transfer_entropy_decomposed(c), oracle, 1e-12);
        EXPECT_NEAR(transfer_entropy_direct(c), oracle, 1e-12);
    }
}

TEST(TransferEntropy, SparseKeySpaceMatchesOracle) {
    // 3^(1+5+5) cells exceeds the dense histogram limit.
    std::mt19937_64 gen(5);
    const auto t = random_sequence(gen, 400, 3);
    const auto s = random_sequence(gen, 400, 3);
    const EmbeddingConfig cfg{5, 5};
    const auto c = count_joint(t, s, cfg);
    EXPECT_NEAR(transfer_entropy_decomposed(c), brute_force_te(t, s, cfg), 1e-12);
    EXPECT_NEAR(transfer_entropy_direct(c), transfer_entropy_decomposed(c), 1e-12);
}

TEST(TransferEntropy, LogBaseConversion) {
    std::mt19937_64 gen(6);
    const auto t = random_sequence(gen, 500, 3);
    const auto s = random_sequence(gen, 500, 3);
    const double bits = transfer_entropy(t, s, {1, 1, LogBase::two});
    EXPECT_NEAR(transfer_entropy(t, s, {1, 1, LogBase::e}), bits * std::log(2.0), 1e-12);
    EXPECT_NEAR(transfer_entropy(t, s, {1, 1, LogBase::ten}), bits * std::log10(2.0), 1e-12);
    EXPECT_THROW(parse_log_base("3"), UsageError);
}

TEST(TransferEntropy, MeanBiasMatchesFirstOrderApproximation) {
    // (A-1) A^k (A^l - 1) / (2 N ln 2) bits for independent uniform inputs.
    const int a = 3;
    const std::size_t n = 2000;
    const double predicted = (a - 1) * a * (a - 1) / (2.0 * n * std::log(2.0));
    std::mt19937_64 gen(2000);
    double sum = 0.0;
    for (int seed = 0; seed < 200; ++seed) {
        sum += transfer_entropy(random_sequence(gen, n, a), random_sequence(gen, n, a), {1, 1});
    }
    const double mean = sum / 200.0;
    EXPECT_GE(mean, 0.5 * predicted);
    EXPECT_LE(mean, 2.0 * predicted);
}

TEST(TEMatrix, IdenticalSeriesAreSymmetric) {
    std::mt19937_64 gen(3);
    auto a = random_sequence(gen, 500, 3, "A");
    auto b = a;
    b.symbol = "B";
    const std::vector<SymbolSequence> panel{a, b};
    const auto m = te_matrix(panel, {1, 1});
    EXPECT_EQ(m.values.at(0, 1), m.values.at(1, 0));
    EXPECT_TRUE(is_missing(m.values.at(0, 0)));
    EXPECT_EQ(m.samples_at(0, 1), 499u);
}

TEST(TEMatrix, TwentyFivePanelFillsSixHundredPairsDeterministically) {
    std::mt19937_64 gen(25);
    std::vector<SymbolSequence> panel;
    for (int i = 0; i < 25; ++i) panel.push_back(random_sequence(gen, 2000, 3, "M" + std::to_string(i)));
    const auto serial = te_matrix(panel, {1, 1}, {1, 0});
    const auto parallel = te_matrix(panel, {1, 1}, {4, 0});
    int filled = 0;
    for (std::size_t r = 0; r < 25; ++r) {
        for (std::size_t c = 0; c < 25; ++c) {
            if (r == c) continue;
            EXPECT_GE(serial.values.at(r, c), 0.0);
            ++filled;
        }
    }
    EXPECT_EQ(filled, 600);
    EXPECT_EQ(std::memcmp(serial.values.values.data(), parallel.values.values.data(),
                          serial.values.values.size() * sizeof(double)),
              0);
    EXPECT_TRUE(serial.issues.empty());
}

TEST(TEMatrix, PlantedChainDirectionality) {
    const auto seqs = generate(CoupledProcessSpec::chain({"A", "B", "C"}, 3, 1.0, 100000, 9));
    const auto m = te_matrix(seqs, {1, 1});
    const double ab = m.values.at(0, 1);
    const double bc = m.values.at(1, 2);
    const double ba = m.values.at(1, 0);
    const double cb = m.values.at(2, 1);
    EXPECT_GE(ab, 5.0 * ba);
    EXPECT_GE(ab, 5.0 * cb);
    EXPECT_GE(bc, 5.0 * ba);
    EXPECT_GE(bc, 5.0 * cb);
}

TEST(TEMatrix, DisjointCalendarsBecomeMissing) {
    auto a = sequence({0, 1, 2, 0}, 3, "A");
    auto b = sequence({1, 1, 2, 0}, 3, "B");
    auto c = sequence({2, 1, 0, 0}, 3, "C");
    Date d{2000, 1, 3};
    for (int i = 0; i < 4; ++i, d = d.next_day()) {
        a.dates.push_back(d);
        b.dates.push_back(d);
    }
    for (int i = 0; i < 4; ++i, d = d.next_day()) c.dates.push_back(d);
    const std::vector<SymbolSequence> panel{a, b, c};
    const auto m = te_matrix(panel, {1, 1});
    EXPECT_FALSE(is_missing(m.values.at(0, 1)));
    EXPECT_TRUE(is_missing(m.values.at(0, 2)));
    EXPECT_TRUE(is_missing(m.values.at(2, 1)));
    EXPECT_EQ(m.issues.size(), 4u);
    EXPECT_THROW(te_matrix(std::span(panel).first(1), {1, 1}), UsageError);
}

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "teflow/entropy.hpp"
#include "teflow/error.hpp"

using namespace teflow;

namespace {

ReturnSeries dated(std::string symbol, std::vector<double> values, Date start = Date{2001, 2, 5}) {
    ReturnSeries r;
    r.symbol = std::move(symbol);
    r.values = std::move(values);
    for (std::size_t i = 0; i < r.values.size(); ++i, start = start.next_day()) r.dates.push_back(start);
    return r;
}

std::vector<double> gaussian(std::mt19937_64& gen, std::size_t n) {
    std::normal_distribution<double> dist(0.0, 0.01);
    std::vector<double> v(n);
    for (auto& x : v) x = dist(gen);
    return v;
}

// Textbook single-pass form with long double accumulators.
double oracle_corr(const std::vector<double>& a, const std::vector<double>& b) {
    long double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
    const auto n = static_cast<long double>(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        sa += a[i];
        sb += b[i];
        saa += static_cast<long double>(a[i]) * a[i];
        sbb += static_cast<long double>(b[i]) * b[i];
        sab += static_cast<long double>(a[i]) * b[i];
    }
    const long double cov = n * sab - sa * sb;
    const long double va = n * saa - sa * sa;
    const long double vb = n * sbb - sb * sb;
    return static_cast<double>(cov / std::sqrt(va * vb));
}

}  // namespace

TEST(Pearson, MatchesSinglePassOracle) {
    std::mt19937_64 gen(31);
    for (int trial = 0; trial < 50; ++trial) {
        auto a = gaussian(gen, 200);
        auto b = gaussian(gen, 200);
        for (std::size_t i = 0; i < b.size(); ++i) b[i] += 0.3 * (trial % 5) * a[i];
        EXPECT_NEAR(pearson(a, b), oracle_corr(a, b), 1e-9);
    }
}

TEST(Pearson, LinearRelationsAndDegenerateInputs) {
    const std::vector<double> a{1, 2, 3, 4, 5};
    const std::vector<double> up{3, 5, 7, 9, 11};
    const std::vector<double> down{-1, -2, -3, -4, -5};
    const std::vector<double> flat{2, 2, 2, 2, 2};
    EXPECT_NEAR(pearson(a, up), 1.0, 1e-15);
    EXPECT_NEAR(pearson(a, down), -1.0, 1e-15);
    EXPECT_TRUE(std::isnan(pearson(a, flat)));
    EXPECT_TRUE(std::isnan(pearson(std::vector<double>{1.0}, std::vector<double>{2.0})));
    EXPECT_THROW(pearson(a, std::vector<double>{1, 2}), DataError);
}

TEST(Pearson, AffineInvariance) {
    std::mt19937_64 gen(8);
    const auto a = gaussian(gen, 500);
    const auto b = gaussian(gen, 500);
    auto scaled = a;
    for (auto& x : scaled) x = 7.5 * x - 3.0;
    EXPECT_NEAR(pearson(scaled, b), pearson(a, b), 1e-12);
}

TEST(CorrelationMatrix, SymmetricUnitDiagonalBounded) {
    std::mt19937_64 gen(44);
    std::vector<ReturnSeries> panel;
    for (int i = 0; i < 6; ++i) panel.push_back(dated("S" + std::to_string(i), gaussian(gen, 300)));
    for (std::size_t i = 1; i < panel.size(); ++i) {
        for (std::size_t t = 0; t < 300; ++t) panel[i].values[t] += 0.5 * panel[i - 1].values[t];
    }
    const auto m = cross_correlation_matrix(panel, 3);
    for (std::size_t i = 0; i < 6; ++i) {
        EXPECT_EQ(m.values.at(i, i), 1.0);
        for (std::size_t j = 0; j < 6; ++j) {
            EXPECT_EQ(m.values.at(i, j), m.values.at(j, i));
            EXPECT_LE(std::abs(m.values.at(i, j)), 1.0);
        }
    }
    EXPECT_NEAR(m.values.at(0, 1), oracle_corr(panel[0].values, panel[1].values), 1e-9);
}

TEST(CorrelationMatrix, IndependentSeriesAreNearlyUncorrelated) {
    std::mt19937_64 gen(10000);
    std::vector<ReturnSeries> panel;
    for (int i = 0; i < 4; ++i) panel.push_back(dated("S" + std::to_string(i), gaussian(gen, 10000)));
    const auto m = cross_correlation_matrix(panel);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            if (i != j) EXPECT_LT(std::abs(m.values.at(i, j)), 0.05);
}

TEST(CorrelationMatrix, UsesCommonDatesOnly) {
    // B starts two days later; only the overlap is used.
    const auto a = dated("A", {0.01, -0.02, 0.03, 0.01, -0.01});
    const auto b = dated("B", {0.03, 0.01, -0.01}, Date{2001, 2, 7});
    const std::vector<ReturnSeries> panel{a, b};
    const auto m = cross_correlation_matrix(panel);
    EXPECT_NEAR(m.values.at(0, 1), 1.0, 1e-12);

    const auto c = dated("C", {0.01, 0.02}, Date{2005, 1, 3});
    const std::vector<ReturnSeries> disjoint{a, c};
    const auto md = cross_correlation_matrix(disjoint);
    EXPECT_TRUE(is_missing(md.values.at(0, 1)));
    EXPECT_EQ(md.issues.size(), 1u);
}

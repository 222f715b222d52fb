#include <gtest/gtest.h>

#include <random>

#include "../oracles/oracles.hpp"
#include "../support.hpp"
#include "spatcorr/classical_corr.hpp"
#include "spatcorr/error.hpp"

using namespace spatcorr;
using V = std::vector<double>;

namespace {

ErrorKind kind_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorKind::Io;
}

}  // namespace

TEST(Pearson, Examples) {
    EXPECT_NEAR(pearson(V{0, 1, 2}, V{1, 3, 5}).r, 1.0, 1e-15);
    EXPECT_NEAR(pearson(V{1, 2, 3}, V{2, 1, 3}).r, 0.5, 1e-15);
    EXPECT_NEAR(oracle::pearson({1, 2, 3}, {2, 1, 3}), 0.5, 1e-15);
    EXPECT_NEAR(pearson(V{1, 2, 3}, V{3, 2, 1}).r, -1.0, 1e-15);
    EXPECT_EQ(pearson(V{1, 2, 3}, V{3, 2, 1}).n, 3u);
}

TEST(Pearson, Errors) {
    EXPECT_EQ(kind_of([] { pearson(V{1, 1, 1}, V{1, 2, 3}); }), ErrorKind::DegenerateInput);
    EXPECT_EQ(kind_of([] { pearson(V{1, 2, 3}, V{1, 2}); }), ErrorKind::Shape);
    EXPECT_EQ(kind_of([] { pearson(V{1, 2}, V{1, 2}); }), ErrorKind::Shape);
}

TEST(Pearson, PValue) {
    // t = 0.5 * sqrt(1 / 0.75) with 1 df: two-sided p = 1 - 2 atan(t) / pi.
    const double t = 0.5 * std::sqrt(1.0 / 0.75);
    EXPECT_NEAR(pearson(V{1, 2, 3}, V{2, 1, 3}).p_value, 1.0 - 2.0 * std::atan(t) / M_PI, 1e-12);
    EXPECT_EQ(pearson(V{0, 1, 2}, V{1, 3, 5}).p_value, 0.0);
    EXPECT_NEAR(correlation_p_value(0.0, 10), 1.0, 1e-15);
}

TEST(Spearman, Examples) {
    EXPECT_NEAR(spearman(V{1, 2, 3, 4}, V{1, 3, 2, 4}).r, 0.8, 1e-15);
    EXPECT_NEAR(oracle::spearman_tie_free({1, 2, 3, 4}, {1, 3, 2, 4}), 0.8, 1e-15);
    EXPECT_NEAR(spearman(V{1, 5, 9, 20}, V{-3, 0, 0.5, 100}).r, 1.0, 1e-15);
    EXPECT_NEAR(spearman(V{1, 1, 2}, V{3, 3, 7}).r, 1.0, 1e-15);
    EXPECT_EQ(spearman(V{1, 1, 2}, V{3, 3, 7}).method, CorrMethod::Spearman);
}

TEST(Spearman, MidRanks) {
    EXPECT_EQ(average_ranks(V{1, 1, 2}), (V{1.5, 1.5, 3}));
    EXPECT_EQ(average_ranks(V{3, 1, 3, 3}), (V{3, 1, 3, 3}));
    EXPECT_EQ(average_ranks(V{5, 4, 3}), (V{3, 2, 1}));
}

TEST(Spearman, AllTiedIsDegenerate) {
    EXPECT_EQ(kind_of([] { spearman(V{2, 2, 2}, V{1, 2, 3}); }), ErrorKind::DegenerateInput);
}

TEST(CorrProperty, BoundedSymmetricInvariant) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-10, 10);
    std::uniform_int_distribution<int> nd(3, 30);
    for (int trial = 0; trial < 500; ++trial) {
        const int n = nd(rng);
        V x(n), y(n);
        for (int i = 0; i < n; ++i) x[i] = u(rng), y[i] = 0.3 * x[i] + u(rng);
        for (auto m : {CorrMethod::Pearson, CorrMethod::Spearman}) {
            const double r = correlate(x, y, m).r;
            EXPECT_LE(std::abs(r), 1.0 + 1e-12);
            EXPECT_NEAR(correlate(y, x, m).r, r, 1e-12);
            V ax(n), my(n);
            for (int i = 0; i < n; ++i) ax[i] = 2.5 * x[i] - 7.0, my[i] = std::exp(y[i] / 4.0);
            EXPECT_NEAR(correlate(ax, y, m).r, r, 1e-12);
            if (m == CorrMethod::Spearman) EXPECT_NEAR(correlate(x, my, m).r, r, 1e-12);
            EXPECT_GE(correlate(x, y, m).p_value, 0.0);
            EXPECT_LE(correlate(x, y, m).p_value, 1.0);
        }
    }
}

TEST(CorrProperty, SpearmanIsPearsonOnAverageRanks) {
    std::mt19937_64 rng(12);
    std::uniform_int_distribution<int> small(0, 5), nd(3, 25);
    int checked = 0;
    while (checked < 500) {
        const int n = nd(rng);
        V x(n), y(n);
        for (int i = 0; i < n; ++i) x[i] = small(rng), y[i] = small(rng) + 0.5 * x[i];
        const auto rx = oracle::ranks(x), ry = oracle::ranks(y);
        if (std::all_of(rx.begin(), rx.end(), [&](double v) { return v == rx[0]; })) continue;
        if (std::all_of(ry.begin(), ry.end(), [&](double v) { return v == ry[0]; })) continue;
        EXPECT_EQ(average_ranks(x), rx);
        EXPECT_EQ(spearman(x, y).r, pearson(average_ranks(x), average_ranks(y)).r);
        EXPECT_NEAR(spearman(x, y).r, oracle::spearman(x, y), 1e-12);
        ++checked;
    }
}

namespace {

SampleTable banded(const V& ys, const V& a, const V& b) {
    std::vector<SampleRow> rows;
    for (std::size_t i = 0; i < ys.size(); ++i)
        rows.push_back(test::row("s" + std::to_string(i), 0, ys[i], {{"a", a[i]}, {"b", b[i]}}));
    return SampleTable({"a", "b"}, rows);
}

}  // namespace

TEST(Stratified, SingleStratumEqualsPooled) {
    const auto t = banded({1, 2, 3, 4, 5}, {1, 3, 2, 5, 4}, {2, 1, 4, 3, 6});
    const auto rep = stratified_correlation(t, "a", "b", Stratification({{"all", 0, 10}}), CorrMethod::Spearman);
    ASSERT_EQ(rep.per_stratum.size(), 1u);
    EXPECT_EQ(rep.per_stratum[0].result.r, rep.pooled.r);
    EXPECT_EQ(rep.per_stratum[0].result.p_value, rep.pooled.p_value);
    EXPECT_EQ(rep.per_stratum[0].result.n, rep.pooled.n);
    EXPECT_EQ(rep.neutralization_gap, 0.0);
}

TEST(Stratified, GapAndCounts) {
    const auto t = banded({1, 2, 3, 4, 11, 12, 13, 14}, {1, 2, 3, 4, 5, 6, 7, 8}, {1, 3, 2, 4, 8, 7, 5, 6});
    const auto rep = stratified_correlation(t, "a", "b", Stratification({{"lo", 0, 10}, {"hi", 10, 20}}),
                                            CorrMethod::Pearson);
    EXPECT_EQ(rep.pooled.n, rep.per_stratum[0].result.n + rep.per_stratum[1].result.n);
    const double gap = std::min(std::abs(rep.per_stratum[0].result.r - rep.pooled.r),
                                std::abs(rep.per_stratum[1].result.r - rep.pooled.r));
    EXPECT_DOUBLE_EQ(rep.neutralization_gap, gap);
    EXPECT_EQ(rep.per_stratum[0].result.method, CorrMethod::Pearson);
}

TEST(Stratified, SmallStratumNamed) {
    const auto t = banded({1, 2, 3, 11, 12}, {1, 2, 3, 4, 5}, {1, 3, 2, 4, 8});
    try {
        stratified_correlation(t, "a", "b", Stratification({{"lo", 0, 10}, {"hi", 10, 20}}), CorrMethod::Spearman);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::StratumTooSmall);
        EXPECT_NE(std::string(e.what()).find("hi"), std::string::npos);
    }
}

TEST(Stratified, EmptyTableAndMissingVariable) {
    EXPECT_EQ(kind_of([] {
                  stratified_correlation(SampleTable({"a", "b"}, {}), "a", "b", Stratification({{"x", 0, 1}}),
                                         CorrMethod::Pearson);
              }),
              ErrorKind::EmptyInput);
    const auto t = banded({1, 2, 3}, {1, 2, 3}, {1, 3, 2});
    EXPECT_EQ(kind_of([&] { stratified_correlation(t, "a", "zz", Stratification({{"x", 0, 10}}), CorrMethod::Pearson); }),
              ErrorKind::Shape);
}

TEST(Regression, SinglePredictor) {
    EXPECT_NEAR(ancestral_regression({2.0, {1.0}, {1.5}, {0.6}, {{1.0}}}), 1.8, 1e-15);
}

TEST(Regression, NoCorrelation) {
    EXPECT_EQ(ancestral_regression({3.0, {1.0, 2.0}, {4.0, -1.0}, {0.0, 0.0}, {{1, 0.3}, {0.3, 1}}}), 0.0);
}

TEST(Regression, IdentityPredictors) {
    EXPECT_NEAR(ancestral_regression({1.0, {1, 1}, {2, 5}, {0.5, 0.2}, {{1, 0}, {0, 1}}}), 2.0, 1e-15);
}

TEST(Regression, Errors) {
    EXPECT_EQ(kind_of([] { ancestral_regression({1.0, {1, 1}, {2, 5}, {0.5, 0.2}, {{1, 1}, {1, 1}}}); }),
              ErrorKind::DegeneratePredictors);
    EXPECT_EQ(kind_of([] { ancestral_regression({1.0, {1, 1}, {2}, {0.5, 0.2}, {{1, 0}, {0, 1}}}); }),
              ErrorKind::Shape);
    EXPECT_EQ(kind_of([] { ancestral_regression({1.0, {1, 1}, {2, 5}, {0.5, 0.2}, {{1, 0.2}, {0.1, 1}}}); }),
              ErrorKind::InvalidArgument);
    EXPECT_EQ(kind_of([] { ancestral_regression({-1.0, {1}, {2}, {0.5}, {{1}}}); }), ErrorKind::InvalidArgument);
}

TEST(RegressionProperty, IdentityMatchesExplicitSum) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> r(-1, 1), s(0.1, 5), h(-3, 3);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + trial % 5;
        RegressionSpec spec{s(rng), {}, {}, {}, {}};
        double expect = 0;
        for (int i = 0; i < n; ++i) {
            spec.sigmas_p.push_back(s(rng));
            spec.deviations_h.push_back(h(rng));
            spec.r_qp.push_back(r(rng));
            expect += spec.r_qp[i] * spec.sigma_q / spec.sigmas_p[i] * spec.deviations_h[i];
        }
        spec.r_pp.assign(n, std::vector<double>(n, 0.0));
        for (int i = 0; i < n; ++i) spec.r_pp[i][i] = 1.0;
        EXPECT_NEAR(ancestral_regression(spec), expect, 1e-12);
    }
}

#include "../oracles/regression_case.hpp"

TEST(RegressionProperty, MatchesStandardizedLeastSquares) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const auto c = oracle::regression_case(rng, 1 + trial % 5);
        EXPECT_NEAR(ancestral_regression(c.spec), c.least_squares, 1e-8);
    }
}

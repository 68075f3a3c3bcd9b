#include <tcb/appearance.hpp>

#include <gtest/gtest.h>

#include <random>

#include "support/oracles.hpp"

namespace tcb {
namespace {

Embedding vec(std::initializer_list<double> values) {
    Embedding e(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double v : values) e(i++) = v;
    return e;
}

TEST(Cosine, IdenticalVectorsGiveOne) {
    const Embedding a = vec({1.0, 2.0, -1.0});
    EXPECT_DOUBLE_EQ(cosine(a, a), 1.0);
}

TEST(Cosine, OrthogonalVectorsGiveZero) {
    EXPECT_DOUBLE_EQ(cosine(vec({1.0, 0.0}), vec({0.0, 1.0})), 0.0);
}

TEST(Cosine, ScaleInvariant) {
    const Embedding a = vec({0.2, -0.4, 0.9});
    EXPECT_NEAR(cosine(a, 3.0 * a), 1.0, 1e-12);
}

TEST(Cosine, RejectsBadInput) {
    EXPECT_THROW(cosine(vec({1.0, 0.0}), vec({1.0, 0.0, 0.0})), ValidationError);
    EXPECT_THROW(cosine(vec({0.0, 0.0}), vec({1.0, 0.0})), ValidationError);
}

TEST(EmaUpdate, GammaZeroKeepsOld) {
    const auto result = ema_update(vec({2.0, 0.0}), vec({0.0, 1.0}), 0.0);
    EXPECT_FALSE(result.degenerate);
    EXPECT_NEAR(result.value(0), 1.0, 1e-12);  // normalised old
    EXPECT_NEAR(result.value(1), 0.0, 1e-12);
}

TEST(EmaUpdate, GammaOneTakesNew) {
    const auto result = ema_update(vec({1.0, 0.0}), vec({0.0, 5.0}), 1.0);
    EXPECT_NEAR(result.value(0), 0.0, 1e-12);
    EXPECT_NEAR(result.value(1), 1.0, 1e-12);
}

TEST(EmaUpdate, BlendMatchesFormulaBeforeNormalisation) {
    // (1-0.1)*(1,0) + 0.1*(0,1) = (0.9, 0.1)
    const auto result = ema_update(vec({1.0, 0.0}), vec({0.0, 1.0}), 0.1);
    const double norm = std::hypot(0.9, 0.1);
    EXPECT_NEAR(result.value(0), 0.9 / norm, 1e-12);
    EXPECT_NEAR(result.value(1), 0.1 / norm, 1e-12);
}

TEST(EmaUpdate, OutputAlwaysUnitNorm) {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> gamma_dist(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        Embedding old_e(8), new_e(8);
        for (int d = 0; d < 8; ++d) {
            old_e(d) = gauss(rng);
            new_e(d) = gauss(rng);
        }
        const auto result = ema_update(old_e, new_e, gamma_dist(rng));
        if (!result.degenerate) {
            EXPECT_NEAR(result.value.norm(), 1.0, 1e-12);
        }
    }
}

TEST(EmaUpdate, ExactCancellationIsDegenerate) {
    // old = -(gamma / (1 - gamma)) * new with gamma = 0.5 -> blend is zero
    const Embedding old_e = vec({1.0, -2.0});
    const Embedding new_e = vec({-1.0, 2.0});
    const auto result = ema_update(old_e, new_e, 0.5);
    EXPECT_TRUE(result.degenerate);
    EXPECT_EQ(result.value(0), old_e(0));
    EXPECT_EQ(result.value(1), old_e(1));
}

FeatureMap random_map(std::mt19937_64& rng, int h, int w, int c) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    FeatureMap fmap = FeatureMap::zeros(h, w, c);
    for (Eigen::Index i = 0; i < fmap.cells.rows(); ++i) {
        for (int d = 0; d < c; ++d) fmap.cells(i, d) = gauss(rng);
    }
    return fmap;
}

TEST(Correlate, PlantedMatchPeaksAtOne) {
    FeatureMap fmap = FeatureMap::zeros(2, 2, 3);
    // orthogonal fillers, template planted at (x=1, y=0)
    fmap.cell(0, 0) = vec({0.0, 1.0, 0.0}).transpose();
    fmap.cell(1, 0) = vec({2.0, 0.0, 0.0}).transpose();
    fmap.cell(0, 1) = vec({0.0, 3.0, 0.0}).transpose();
    fmap.cell(1, 1) = vec({0.0, 0.0, 4.0}).transpose();

    TemplateSet templates;
    templates.templates.push_back(vec({1.0, 0.0, 0.0}));
    templates.track_ids.push_back(7);

    const CorrelationResult result = correlate(templates, fmap);
    ASSERT_EQ(result.heatmaps.size(), 1u);
    EXPECT_NEAR(result.heatmaps[0].values(0, 1), 1.0, 1e-12);
    EXPECT_NEAR(result.heatmaps[0].values(0, 0), 0.0, 1e-12);
    EXPECT_NEAR(result.heatmaps[0].values(1, 0), 0.0, 1e-12);
    EXPECT_NEAR(result.heatmaps[0].values(1, 1), 0.0, 1e-12);
}

TEST(Correlate, EmptyTemplateSet) {
    std::mt19937_64 rng(2);
    const FeatureMap fmap = random_map(rng, 3, 3, 4);
    EXPECT_TRUE(correlate({}, fmap).heatmaps.empty());
}

TEST(Correlate, MatchesNaiveLoop) {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const FeatureMap fmap = random_map(rng, 4, 4, 8);
    TemplateSet templates;
    for (int k = 0; k < 3; ++k) {
        Embedding z(8);
        for (int d = 0; d < 8; ++d) z(d) = gauss(rng);
        templates.templates.push_back(z);
        templates.track_ids.push_back(k);
    }
    const CorrelationResult result = correlate(templates, fmap);
    const auto reference = testing::naive_correlate(templates, fmap);
    for (int k = 0; k < 3; ++k) {
        EXPECT_LT((result.heatmaps[k].values - reference[k]).cwiseAbs().maxCoeff(), 1e-6);
        EXPECT_LE(result.heatmaps[k].values.cwiseAbs().maxCoeff(), 1.0 + 1e-12);
    }
}

TEST(Correlate, InvariantToPositiveRescaling) {
    std::mt19937_64 rng(13);
    const FeatureMap fmap = random_map(rng, 3, 5, 6);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Embedding z(6);
    for (int d = 0; d < 6; ++d) z(d) = gauss(rng);

    TemplateSet a, b;
    a.templates = {z};
    a.track_ids = {1};
    b.templates = {Embedding(4.5 * z)};
    b.track_ids = {1};
    const auto map_a = correlate(a, fmap).heatmaps[0].values;
    const auto map_b = correlate(b, fmap).heatmaps[0].values;
    EXPECT_LT((map_a - map_b).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Correlate, ParallelSplitBitStable) {
    std::mt19937_64 rng(21);
    const FeatureMap fmap = random_map(rng, 8, 8, 16);
    std::normal_distribution<double> gauss(0.0, 1.0);
    TemplateSet templates;
    for (int k = 0; k < 6; ++k) {
        Embedding z(16);
        for (int d = 0; d < 16; ++d) z(d) = gauss(rng);
        templates.templates.push_back(z);
        templates.track_ids.push_back(k);
    }
    const auto serial = correlate(templates, fmap, 1);
    const auto parallel = correlate(templates, fmap, 4);
    for (int k = 0; k < 6; ++k) {
        EXPECT_TRUE(serial.heatmaps[k].values == parallel.heatmaps[k].values)
            << "template " << k << " differs across schedules";
    }
}

TEST(Correlate, ZeroCellFlaggedNotFatal) {
    FeatureMap fmap = FeatureMap::zeros(2, 2, 3);
    fmap.cell(0, 0) = vec({1.0, 0.0, 0.0}).transpose();
    // remaining cells stay zero (padded border)
    TemplateSet templates;
    templates.templates.push_back(vec({1.0, 0.0, 0.0}));
    templates.track_ids.push_back(1);

    const CorrelationResult result = correlate(templates, fmap);
    EXPECT_EQ(result.degenerate_cells, 3);
    EXPECT_NEAR(result.heatmaps[0].values(0, 0), 1.0, 1e-12);
    EXPECT_EQ(result.heatmaps[0].values(1, 1), 0.0);
}

TEST(Correlate, DimensionMismatchRejected) {
    std::mt19937_64 rng(4);
    const FeatureMap fmap = random_map(rng, 2, 2, 4);
    TemplateSet templates;
    templates.templates.push_back(vec({1.0, 0.0}));
    templates.track_ids.push_back(1);
    EXPECT_THROW(correlate(templates, fmap), ValidationError);
}

}  // namespace
}  // namespace tcb

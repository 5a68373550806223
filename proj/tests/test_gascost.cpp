// Copyright 2026 The dcai-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "dcai/gascost.hpp"

namespace dcai::gas {
namespace {

constexpr ModelKind kPerc = ModelKind::perceptron;
constexpr ModelKind kNb = ModelKind::naive_bayes;
constexpr ModelKind kNcc = ModelKind::nearest_centroid;

struct Measured {
    ModelKind kind;
    Layout layout;
    SampleShape shape;
    std::array<std::int64_t, 4> gas;  // deploy, update, refund, reward
};

// Reference measurements for the three dataset scales.
const std::vector<Measured>& measured() {
    static const std::vector<Measured> kRows = {
        {kNb, Layout::sparse, {1000, 15}, {55'511'446, 281'447, 172'216, 136'800}},
        {kNcc, Layout::sparse, {1000, 15}, {67'139'037, 356'345, 176'797, 141'253}},
        {kPerc, Layout::sparse, {1000, 15}, {30'967'145, 263'517, 138'028, 102'484}},
        {kNb, Layout::dense, {9, 9}, {10'113'606, 222'523, 151'070, 115'525}},
        {kNcc, Layout::dense, {9, 9}, {9'734'985, 243'164, 146'790, 111'245}},
        {kPerc, Layout::dense, {9, 9}, {8'977'816, 227'047, 133'745, 98'238}},
        {kNb, Layout::sparse, {1000, 20}, {55'423'682, 332'636, 189'954, 154'538}},
        {kNcc, Layout::sparse, {1000, 20}, {67'136'669, 422'476, 196'375, 160'831}},
        {kPerc, Layout::sparse, {1000, 20}, {30'875'193, 332'927, 145'601, 110'157}},
    };
    return kRows;
}

TEST(Gas, ComputeConstantIsTheLeastSquaresFitOnTheNineFeatureRows) {
    GasCostModel zero;
    zero.compute_per_feature = 0;
    double num = 0, den = 0;
    for (const auto& r : measured()) {
        if (r.shape.dimension != 9) continue;
        const GasTally tallies[] = {update_tally(r.kind, r.layout, r.shape), refund_tally(r.kind, r.layout, r.shape),
                                    reward_tally(r.kind, r.layout, r.shape)};
        for (int a = 0; a < 3; ++a) {
            const double k = static_cast<double>(tallies[a].compute_features);
            num += k * static_cast<double>(r.gas[a + 1] - tallies[a].total(zero));
            den += k * k;
        }
    }
    EXPECT_EQ(std::llround(num / den), GasCostModel{}.compute_per_feature);
}

TEST(Gas, CodeBytesReproduceNineFeatureDeployments) {
    for (const auto& r : measured()) {
        if (r.shape.dimension != 9) continue;
        EXPECT_NEAR(static_cast<double>(estimate_deploy(r.kind, r.layout, 9)), static_cast<double>(r.gas[0]), 200.0);
    }
}

TEST(Gas, PerceptronFakeNewsWithinHalf) {
    const auto p = cost_profile(kPerc, Layout::sparse, {1000, 15}).totals();
    const std::array<std::int64_t, 4> reference = {30'967'145, 263'517, 138'028, 102'484};
    for (int i = 0; i < 4; ++i) {
        EXPECT_GE(p[i], reference[i] / 2) << i;
        EXPECT_LE(p[i], reference[i] * 3 / 2) << i;
    }
}

TEST(Gas, NineFeatureUpdatePerceptronWithinHalf) {
    const auto u = estimate_update(kPerc, Layout::dense, {9, 9});
    EXPECT_GE(u, 227'047 / 2);
    EXPECT_LE(u, 227'047 * 3 / 2);
}

TEST(Gas, PerceptronHasCheapestRefundAndRewardAtEveryMeasuredScale) {
    for (std::size_t i = 0; i < measured().size(); i += 3) {
        const auto& perc = measured()[i + 2];
        ASSERT_EQ(perc.kind, kPerc);
        const auto p = cost_profile(kPerc, perc.layout, perc.shape).totals();
        for (std::size_t j = i; j < i + 2; ++j) {
            const auto o = cost_profile(measured()[j].kind, measured()[j].layout, measured()[j].shape).totals();
            EXPECT_LT(p[2], o[2]);
            EXPECT_LT(p[3], o[3]);
            // The reference measurements agree.
            EXPECT_LT(perc.gas[2], measured()[j].gas[2]);
            EXPECT_LT(perc.gas[3], measured()[j].gas[3]);
        }
    }
}

TEST(Gas, DeploymentOrderingAtTextScale) {
    for (const auto& preset : {preset_from_string("fakenews"), preset_from_string("imdb")}) {
        const auto perc = estimate_deploy(kPerc, preset.layout, preset.shape.dimension);
        const auto nb = estimate_deploy(kNb, preset.layout, preset.shape.dimension);
        const auto ncc = estimate_deploy(kNcc, preset.layout, preset.shape.dimension);
        EXPECT_GT(ncc, nb);
        EXPECT_GT(nb, perc);
        const double ratio = static_cast<double>(nb) / static_cast<double>(perc);
        EXPECT_GE(ratio, 1.4);
        EXPECT_LE(ratio, 2.2);
    }
}

TEST(Gas, DeploymentSpreadAtNineDense) {
    const auto perc = estimate_deploy(kPerc, Layout::dense, 9);
    const auto nb = estimate_deploy(kNb, Layout::dense, 9);
    const auto ncc = estimate_deploy(kNcc, Layout::dense, 9);
    EXPECT_LT(perc, nb);
    EXPECT_LT(perc, ncc);
    const auto hi = std::max({perc, nb, ncc});
    EXPECT_LE(static_cast<double>(hi) / static_cast<double>(perc), 1.15);
}

TEST(Gas, RefundExceedsRewardEverywhere) {
    for (const auto& preset : presets())
        for (auto kind : {kPerc, kNb, kNcc})
            for (auto layout : {Layout::dense, Layout::sparse})
                EXPECT_GT(estimate_refund(kind, layout, preset.shape), estimate_reward(kind, layout, preset.shape))
                    << preset.name << ' ' << to_string(kind);
}

TEST(Gas, SparseNccUpdateCheaperThanDense) {
    EXPECT_LT(estimate_update(kNcc, Layout::sparse, {1000, 20}), estimate_update(kNcc, Layout::dense, {1000, 20}));
}

TEST(Gas, MonotoneInDimensionAndActive) {
    for (auto kind : {kPerc, kNb, kNcc})
        for (auto layout : {Layout::dense, Layout::sparse}) {
            for (std::size_t d = 1; d < 60; ++d) {
                EXPECT_LE(estimate_deploy(kind, layout, d), estimate_deploy(kind, layout, d + 1));
                for (std::size_t a = 0; a <= d; ++a) {
                    const SampleShape s{d, a}, wider{d + 1, a};
                    EXPECT_LE(estimate_update(kind, layout, s), estimate_update(kind, layout, wider));
                    EXPECT_LE(estimate_refund(kind, layout, s), estimate_refund(kind, layout, wider));
                    EXPECT_LE(estimate_reward(kind, layout, s), estimate_reward(kind, layout, wider));
                    if (a < d) {
                        const SampleShape more{d, a + 1};
                        EXPECT_LE(estimate_update(kind, layout, s), estimate_update(kind, layout, more));
                        EXPECT_LE(estimate_refund(kind, layout, s), estimate_refund(kind, layout, more));
                        EXPECT_LE(estimate_reward(kind, layout, s), estimate_reward(kind, layout, more));
                    }
                }
            }
        }
}

TEST(Gas, TalliesReproduceTotals) {
    const GasCostModel m;
    for (const auto& preset : presets())
        for (auto kind : {kPerc, kNb, kNcc}) {
            const auto p = cost_profile(kind, preset.layout, preset.shape);
            const GasTally* tallies[] = {&p.deploy, &p.update, &p.refund, &p.reward};
            for (int i = 0; i < 4; ++i) {
                const GasTally& t = *tallies[i];
                const std::int64_t by_hand =
                    t.transactions * 21'000 + t.contract_creations * 32'000 + t.code_bytes * 200 +
                    t.first_writes * 20'000 + t.rewrites * 5'000 + t.reads * 800 + t.calldata_nonzero_bytes * 16 +
                    t.calldata_zero_bytes * 4 + t.compute_features * m.compute_per_feature + t.value_transfers * 9'000;
                EXPECT_EQ(by_hand, p.totals()[i]);
            }
        }
}

TEST(Gas, DegenerateCases) {
    const GasCostModel m;
    EXPECT_THROW(estimate_deploy(kPerc, Layout::dense, 0), std::invalid_argument);
    EXPECT_EQ(estimate_deploy(kPerc, Layout::dense, 1), 32'000 + 200 * code_bytes(kPerc) + 2 * 20'000);

    // No active features and no record: base transaction plus calldata only.
    const auto bare = update_tally(kPerc, Layout::sparse, {10, 0}, false);
    EXPECT_EQ(bare.total(m), 21'000 + bare.calldata_nonzero_bytes * 16 + bare.calldata_zero_bytes * 4);
    EXPECT_EQ(bare.reads + bare.rewrites + bare.first_writes + bare.compute_features, 0);

    for (auto kind : {kPerc, kNb, kNcc}) {
        const SampleShape none{10, 0};
        const auto diff = estimate_refund(kind, Layout::sparse, none) - estimate_reward(kind, Layout::sparse, none);
        EXPECT_EQ(diff, 5'000 + 20'000);
    }
    EXPECT_THROW(estimate_update(kPerc, Layout::sparse, {5, 6}), std::invalid_argument);
    EXPECT_THROW(preset_from_string("mnist"), std::invalid_argument);
}

TEST(Gas, ConstantsArePositive) {
    const GasCostModel m;
    for (auto v : {m.tx_base, m.storage_slot_first_write, m.storage_slot_rewrite, m.storage_slot_read,
                   m.calldata_nonzero_byte, m.calldata_zero_byte, m.deploy_byte, m.deploy_base, m.value_transfer,
                   m.compute_per_feature})
        EXPECT_GT(v, 0);
}

TEST(Gas, ReportLayout) {
    std::vector<CostProfile> cols;
    for (auto kind : {kNb, kNcc, kPerc}) cols.push_back(cost_profile(kind, Layout::sparse, {1000, 15}));
    std::ostringstream csv, text;
    write_report_csv(cols, csv);
    write_report_text(cols, text);
    std::istringstream in(csv.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "action,Naive Bayes,Sparse Nearest Centroid,Sparse Perceptron");
    std::getline(in, line);
    EXPECT_EQ(line.rfind("Deployment,", 0), 0u);
    EXPECT_NE(text.str().find("28,797,800"), std::string::npos);
    EXPECT_NE(text.str().find("Reward"), std::string::npos);
}

}  // namespace
}  // namespace dcai::gas

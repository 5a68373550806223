// Copyright 2026 The dcai-sim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "dcai/models.hpp"

namespace dcai::gas {

/// First-order EVM pricing (Istanbul-era constants).
struct GasCostModel {
    std::int64_t tx_base = 21'000;
    std::int64_t storage_slot_first_write = 20'000;
    std::int64_t storage_slot_rewrite = 5'000;
    std::int64_t storage_slot_read = 800;
    std::int64_t calldata_nonzero_byte = 16;
    std::int64_t calldata_zero_byte = 4;
    std::int64_t deploy_byte = 200;
    std::int64_t deploy_base = 32'000;
    std::int64_t value_transfer = 9'000;
    /// Arithmetic and memory per feature visited; fitted to the 9-feature dense
    /// update, refund and reward measurements by least squares, then frozen.
    std::int64_t compute_per_feature = 3'545;
};

/// Counts of priced EVM events behind one estimate.
struct GasTally {
    std::int64_t transactions = 0;
    std::int64_t contract_creations = 0;
    std::int64_t code_bytes = 0;
    std::int64_t first_writes = 0;
    std::int64_t rewrites = 0;
    std::int64_t reads = 0;
    std::int64_t calldata_nonzero_bytes = 0;
    std::int64_t calldata_zero_bytes = 0;
    std::int64_t compute_features = 0;
    std::int64_t value_transfers = 0;

    std::int64_t total(const GasCostModel& m) const noexcept;
    GasTally& operator+=(const GasTally& o) noexcept;
    friend bool operator==(const GasTally&, const GasTally&) = default;
};

/// Size of the samples a deployment handles.
struct SampleShape {
    std::size_t dimension = 1;
    std::size_t active = 1;  // nonzero features per sample; sparse models only touch these
};

/// Bytecode size per model architecture, fitted to the 9-feature deployments.
std::int64_t code_bytes(ModelKind kind) noexcept;
/// Storage slots the model occupies at deployment.
std::int64_t model_slots(ModelKind kind, Layout layout, std::size_t dimension, std::size_t classes = 2) noexcept;

GasTally deploy_tally(ModelKind kind, Layout layout, std::size_t dimension, std::size_t classes = 2);
/// Update that changes the model; `with_record` adds the contribution record and per-class bookkeeping.
GasTally update_tally(ModelKind kind, Layout layout, SampleShape shape, bool with_record = true);
GasTally refund_tally(ModelKind kind, Layout layout, SampleShape shape);
GasTally reward_tally(ModelKind kind, Layout layout, SampleShape shape);

std::int64_t estimate_deploy(ModelKind kind, Layout layout, std::size_t dimension, std::size_t classes = 2,
                             const GasCostModel& m = {});
std::int64_t estimate_update(ModelKind kind, Layout layout, SampleShape shape, const GasCostModel& m = {});
std::int64_t estimate_refund(ModelKind kind, Layout layout, SampleShape shape, const GasCostModel& m = {});
std::int64_t estimate_reward(ModelKind kind, Layout layout, SampleShape shape, const GasCostModel& m = {});

struct CostProfile {
    ModelKind kind;
    Layout layout;
    SampleShape shape;
    GasTally deploy, update, refund, reward;

    std::array<std::int64_t, 4> totals(const GasCostModel& m = {}) const noexcept;
};

CostProfile cost_profile(ModelKind kind, Layout layout, SampleShape shape);

/// Dataset scales: fakenews (1000 bigrams, 15 active), fitness (9 dense),
/// imdb (1000 words, 20 active), synthetic (9 dense).
struct Preset {
    std::string name;
    SampleShape shape;
    Layout layout;
};

Preset preset_from_string(std::string_view name);
const std::vector<Preset>& presets();

/// Rows Deployment/Update/Refund/Reward, one column per profile.
void write_report_csv(const std::vector<CostProfile>& columns, std::ostream& out, const GasCostModel& m = {});
void write_report_text(const std::vector<CostProfile>& columns, std::ostream& out, const GasCostModel& m = {});

}  // namespace dcai::gas

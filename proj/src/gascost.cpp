// Copyright 2026 The dcai-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "dcai/gascost.hpp"

#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace dcai::gas {
namespace {

constexpr std::int64_t kSelectorBytes = 4;
// An ABI word carrying a small integer: two significant bytes, thirty zero bytes.
constexpr std::int64_t kWordNonzeroBytes = 2;
constexpr std::int64_t kWordZeroBytes = 30;
// Contribution record: contributor, submission time, label and flags, initial and remaining deposit.
constexpr std::int64_t kRecordSlots = 5;

std::int64_t as_int(std::size_t v) { return static_cast<std::int64_t>(v); }

void add_calldata(GasTally& t, std::int64_t words) {
    t.calldata_nonzero_bytes += kSelectorBytes + words * kWordNonzeroBytes;
    t.calldata_zero_bytes += words * kWordZeroBytes;
}

/// Features a model reads or writes for one sample.
std::int64_t touched(ModelKind kind, Layout layout, SampleShape shape) {
    if (shape.active > shape.dimension) throw std::invalid_argument("active features exceed dimensionality");
    if (kind == ModelKind::naive_bayes || layout == Layout::sparse) return as_int(shape.active);
    return as_int(shape.dimension);
}

GasTally prediction_and_record(ModelKind kind, Layout layout, SampleShape shape) {
    const std::int64_t k = touched(kind, layout, shape);
    GasTally t;
    t.transactions = 1;
    add_calldata(t, k + 4);  // offset, length, sample words, label, submission time
    t.reads = kRecordSlots;
    t.rewrites = 2;  // remaining deposit, claim bookkeeping
    t.value_transfers = 1;
    switch (kind) {
        case ModelKind::perceptron:
            t.reads += k + 1;
            t.compute_features = k;
            break;
        case ModelKind::naive_bayes:
            t.reads += 2 * k + 4;
            t.compute_features = 2 * k;
            break;
        case ModelKind::nearest_centroid:
            if (layout == Layout::sparse) {
                t.reads += 4 * k + 4;  // value and denominator per class, magnitude and count per class
            } else {
                t.reads += 2 * k + 2;
            }
            t.compute_features = 2 * k;
            break;
    }
    return t;
}

std::string action_name(std::size_t row) {
    static constexpr const char* kRows[] = {"Deployment", "Update", "Refund", "Reward"};
    return kRows[row];
}

std::string column_name(const CostProfile& p) {
    std::string prefix;
    if (p.kind != ModelKind::naive_bayes) prefix = p.layout == Layout::sparse ? "Sparse " : "Dense ";
    switch (p.kind) {
        case ModelKind::perceptron: return prefix + "Perceptron";
        case ModelKind::naive_bayes: return "Naive Bayes";
        case ModelKind::nearest_centroid: return prefix + "Nearest Centroid";
    }
    return "?";
}

std::string with_commas(std::int64_t v) {
    std::string digits = std::to_string(v);
    std::string out;
    const std::size_t lead = digits.size() % 3;
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (i && (i % 3) == lead) out.push_back(',');
        out.push_back(digits[i]);
    }
    if (!out.empty() && out.front() == ',') out.erase(out.begin());
    return out;
}

}  // namespace

std::int64_t GasTally::total(const GasCostModel& m) const noexcept {
    return transactions * m.tx_base + contract_creations * m.deploy_base + code_bytes * m.deploy_byte +
           first_writes * m.storage_slot_first_write + rewrites * m.storage_slot_rewrite +
           reads * m.storage_slot_read + calldata_nonzero_bytes * m.calldata_nonzero_byte +
           calldata_zero_bytes * m.calldata_zero_byte + compute_features * m.compute_per_feature +
           value_transfers * m.value_transfer;
}

GasTally& GasTally::operator+=(const GasTally& o) noexcept {
    transactions += o.transactions;
    contract_creations += o.contract_creations;
    code_bytes += o.code_bytes;
    first_writes += o.first_writes;
    rewrites += o.rewrites;
    reads += o.reads;
    calldata_nonzero_bytes += o.calldata_nonzero_bytes;
    calldata_zero_bytes += o.calldata_zero_bytes;
    compute_features += o.compute_features;
    value_transfers += o.value_transfers;
    return *this;
}

std::int64_t code_bytes(ModelKind kind) noexcept {
    switch (kind) {
        case ModelKind::perceptron: return 43'729;
        case ModelKind::naive_bayes: return 48'208;
        case ModelKind::nearest_centroid: return 46'515;
    }
    return 0;
}

std::int64_t model_slots(ModelKind kind, Layout layout, std::size_t dimension, std::size_t classes) noexcept {
    const auto d = as_int(dimension);
    const auto c = as_int(classes);
    switch (kind) {
        case ModelKind::perceptron: return d + 1;
        case ModelKind::naive_bayes: return c * d + 2 * c;  // per-class feature counts, totals, class counts
        case ModelKind::nearest_centroid:
            if (layout == Layout::sparse) return c * d + c * ((d + 3) / 4) + 2 * c;  // denominators packed 4 per slot
            return c * d + c;
    }
    return 0;
}

GasTally deploy_tally(ModelKind kind, Layout layout, std::size_t dimension, std::size_t classes) {
    if (dimension == 0) throw std::invalid_argument("dimension must be positive");
    if (classes < 2) throw std::invalid_argument("need at least two classes");
    GasTally t;
    t.contract_creations = 1;
    t.code_bytes = code_bytes(kind);
    t.first_writes = model_slots(kind, layout, dimension, classes);
    return t;
}

GasTally update_tally(ModelKind kind, Layout layout, SampleShape shape, bool with_record) {
    const std::int64_t k = touched(kind, layout, shape);
    GasTally t;
    t.transactions = 1;
    add_calldata(t, k + 3);  // offset, length, sample words, label
    if (with_record) {
        t.first_writes = kRecordSlots;
        t.reads = 2;  // deposit schedule, last update time
        t.rewrites = 1;
    }
    switch (kind) {
        case ModelKind::perceptron:
            t.reads += k + (with_record ? 1 : 0);
            t.rewrites += k + (with_record ? 1 : 0);
            break;
        case ModelKind::naive_bayes:
            t.reads += k + (with_record ? 2 : 0);
            t.rewrites += k + (with_record ? 2 : 0);
            break;
        case ModelKind::nearest_centroid: {
            const std::int64_t per_feature = layout == Layout::sparse ? 2 : 1;
            const std::int64_t scalars = layout == Layout::sparse ? 2 : 1;
            t.reads += per_feature * k + (with_record ? scalars : 0);
            t.rewrites += per_feature * k + (with_record ? scalars : 0);
            break;
        }
    }
    t.compute_features = k;
    return t;
}

GasTally refund_tally(ModelKind kind, Layout layout, SampleShape shape) {
    GasTally t = prediction_and_record(kind, layout, shape);
    t.rewrites += 1;      // refunded flag
    t.first_writes += 1;  // verified tally entry
    return t;
}

GasTally reward_tally(ModelKind kind, Layout layout, SampleShape shape) {
    return prediction_and_record(kind, layout, shape);
}

std::int64_t estimate_deploy(ModelKind kind, Layout layout, std::size_t dimension, std::size_t classes,
                             const GasCostModel& m) {
    return deploy_tally(kind, layout, dimension, classes).total(m);
}
std::int64_t estimate_update(ModelKind kind, Layout layout, SampleShape shape, const GasCostModel& m) {
    return update_tally(kind, layout, shape).total(m);
}
std::int64_t estimate_refund(ModelKind kind, Layout layout, SampleShape shape, const GasCostModel& m) {
    return refund_tally(kind, layout, shape).total(m);
}
std::int64_t estimate_reward(ModelKind kind, Layout layout, SampleShape shape, const GasCostModel& m) {
    return reward_tally(kind, layout, shape).total(m);
}

std::array<std::int64_t, 4> CostProfile::totals(const GasCostModel& m) const noexcept {
    return {deploy.total(m), update.total(m), refund.total(m), reward.total(m)};
}

CostProfile cost_profile(ModelKind kind, Layout layout, SampleShape shape) {
    return CostProfile{kind,
                       layout,
                       shape,
                       deploy_tally(kind, layout, shape.dimension),
                       update_tally(kind, layout, shape),
                       refund_tally(kind, layout, shape),
                       reward_tally(kind, layout, shape)};
}

const std::vector<Preset>& presets() {
    static const std::vector<Preset> kPresets = {
        {"fakenews", {1000, 15}, Layout::sparse},
        {"fitness", {9, 9}, Layout::dense},
        {"imdb", {1000, 20}, Layout::sparse},
        {"synthetic", {9, 9}, Layout::dense},
    };
    return kPresets;
}

Preset preset_from_string(std::string_view name) {
    for (const auto& p : presets())
        if (p.name == name) return p;
    throw std::invalid_argument("unknown preset: " + std::string(name));
}

void write_report_csv(const std::vector<CostProfile>& columns, std::ostream& out, const GasCostModel& m) {
    out << "action";
    for (const auto& c : columns) out << ',' << column_name(c);
    out << '\n';
    for (std::size_t row = 0; row < 4; ++row) {
        out << action_name(row);
        for (const auto& c : columns) out << ',' << c.totals(m)[row];
        out << '\n';
    }
}

void write_report_text(const std::vector<CostProfile>& columns, std::ostream& out, const GasCostModel& m) {
    std::vector<std::vector<std::string>> cells(5);
    cells[0].push_back("Action");
    for (const auto& c : columns) cells[0].push_back(column_name(c));
    for (std::size_t row = 0; row < 4; ++row) {
        cells[row + 1].push_back(action_name(row));
        for (const auto& c : columns) cells[row + 1].push_back(with_commas(c.totals(m)[row]));
    }
    std::vector<std::size_t> width(cells[0].size(), 0);
    for (const auto& r : cells)
        for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
    for (std::size_t r = 0; r < cells.size(); ++r) {
        for (std::size_t i = 0; i < cells[r].size(); ++i) {
            if (i) out << "  ";
            if (i == 0) out << std::left << std::setw(static_cast<int>(width[i])) << cells[r][i];
            else out << std::right << std::setw(static_cast<int>(width[i])) << cells[r][i];
        }
        out << '\n';
        if (r == 0) {
            std::size_t total = 0;
            for (auto w : width) total += w;
            out << std::string(total + 2 * (width.size() - 1), '-') << '\n';
        }
    }
    out << std::left;
}

}  // namespace dcai::gas

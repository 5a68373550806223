// Copyright 2026 The dcai-sim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace dcai {

/// Binary class label, always 0 or 1.
using Label = int;

/// How a model or a sample stores its features.
enum class Layout : std::uint8_t { dense = 0, sparse = 1 };

/// Non-negative integer features of one sample, dense or sparse.
///
/// Both layouts expose the same nonzero entries in increasing index order, so
/// model code can iterate `entries()` without caring how the sample arrived.
class FeatureVector {
public:
    using Index = std::uint32_t;
    using Value = std::int64_t;

    struct Entry {
        Index index;
        Value value;
        friend bool operator==(const Entry&, const Entry&) = default;
    };

    FeatureVector() = default;

    /// Throws std::invalid_argument on negative values or an empty vector.
    static FeatureVector dense(std::vector<Value> values);

    /// Indices must be strictly increasing and < dimension; values strictly positive.
    static FeatureVector sparse(std::size_t dimension, std::vector<Entry> entries);

    std::size_t dimension() const noexcept { return dimension_; }
    Layout layout() const noexcept { return layout_; }
    bool is_sparse() const noexcept { return layout_ == Layout::sparse; }

    /// Nonzero entries, increasing index.
    const std::vector<Entry>& entries() const noexcept { return entries_; }
    std::size_t active_count() const noexcept { return entries_.size(); }

    Value operator[](Index index) const;

    Eigen::VectorXd to_eigen() const;
    double squared_norm() const noexcept;

    /// Compact text form used by the event log: `D:v0 v1 ...` or `S<dim>:i=v i=v`.
    std::string encode() const;
    static FeatureVector decode(const std::string& text);

    friend bool operator==(const FeatureVector& a, const FeatureVector& b) {
        return a.dimension_ == b.dimension_ && a.layout_ == b.layout_ && a.entries_ == b.entries_;
    }

private:
    std::size_t dimension_ = 0;
    Layout layout_ = Layout::dense;
    std::vector<Entry> entries_;
};

struct LabeledSample {
    FeatureVector features;
    Label label = 0;

    LabeledSample() = default;
    /// Throws std::invalid_argument if label is not 0 or 1.
    LabeledSample(FeatureVector x, Label y);

    friend bool operator==(const LabeledSample&, const LabeledSample&) = default;
};

}  // namespace dcai

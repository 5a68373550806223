// Copyright 2026 The dcai-sim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>

#include <Eigen/Core>

#include "dcai/features.hpp"

namespace dcai {

enum class ModelKind : std::uint8_t { perceptron = 0, naive_bayes = 1, nearest_centroid = 2 };

std::string_view to_string(ModelKind kind) noexcept;
/// Accepts `perceptron`, `naive-bayes`, `nearest-centroid` (underscores also allowed).
ModelKind model_kind_from_string(std::string_view name);
std::string_view to_string(Layout layout) noexcept;
Layout layout_from_string(std::string_view name);

/// Everything needed to build a fresh, untrained model.
struct ModelSpec {
    ModelKind kind = ModelKind::perceptron;
    Layout layout = Layout::dense;
    std::size_t dimension = 0;
    double learning_rate = 1.0;  // perceptron only
    double smoothing = 1.0;      // naive Bayes Laplace alpha

    friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

/// Relative tolerance below which two class scores count as tied (ties go to class 0).
inline constexpr double kTieTolerance = 1e-9;

/// Single layer perceptron. Updates only on a misclassified sample.
struct PerceptronModel {
    Eigen::VectorXd weights;
    double bias = 0.0;
    double learning_rate = 1.0;
    Layout layout = Layout::dense;

    PerceptronModel() = default;
    explicit PerceptronModel(std::size_t dimension, double learning_rate = 1.0, Layout layout = Layout::dense);

    std::size_t dimension() const noexcept { return static_cast<std::size_t>(weights.size()); }
    double score(const FeatureVector& x) const;
    Label predict(const FeatureVector& x) const;
    /// Returns true iff the weights changed.
    bool update(const LabeledSample& sample);
};

/// Multinomial naive Bayes over integer feature counts with Laplace smoothing.
struct NaiveBayesModel {
    using CountMatrix = Eigen::Matrix<std::int64_t, 2, Eigen::Dynamic>;

    std::array<std::int64_t, 2> class_counts{};
    CountMatrix feature_counts;
    std::array<std::int64_t, 2> total_feature_counts{};
    double smoothing = 1.0;

    NaiveBayesModel() = default;
    explicit NaiveBayesModel(std::size_t dimension, double smoothing = 1.0);

    std::size_t dimension() const noexcept { return static_cast<std::size_t>(feature_counts.cols()); }
    /// log P(c) + sum_j x_j log P(j | c), smoothed.
    Eigen::Vector2d log_joint(const FeatureVector& x) const;
    Label predict(const FeatureVector& x) const;
    bool update(const LabeledSample& sample);
};

/// Nearest centroid classifier, every coordinate of the class centroid updated per sample.
struct NearestCentroidModel {
    std::array<Eigen::VectorXd, 2> centroids;
    std::array<std::int64_t, 2> class_sample_counts{};

    NearestCentroidModel() = default;
    explicit NearestCentroidModel(std::size_t dimension);

    std::size_t dimension() const noexcept { return static_cast<std::size_t>(centroids[0].size()); }
    Eigen::Vector2d squared_distances(const FeatureVector& x) const;
    Label predict(const FeatureVector& x) const;
    bool update(const LabeledSample& sample);
};

/// Nearest centroid classifier that only touches the features present in a sample.
///
/// A stored coordinate `values[c][j]` was written when class `c` had
/// `denominators[c][j]` samples. Every later update of class `c` that skips
/// feature `j` shrinks the true coordinate by n / (n + 1), so the effective
/// value is `values[c][j] * denominators[c][j] / class_sample_counts[c]`.
/// `squared_magnitudes[c]` caches the squared norm of the effective centroid,
/// which lets prediction work from the sample's nonzero entries alone.
struct SparseNearestCentroidModel {
    std::array<Eigen::VectorXd, 2> values;
    std::array<Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>, 2> denominators;
    std::array<double, 2> squared_magnitudes{};
    std::array<std::int64_t, 2> class_sample_counts{};

    SparseNearestCentroidModel() = default;
    explicit SparseNearestCentroidModel(std::size_t dimension);

    std::size_t dimension() const noexcept { return static_cast<std::size_t>(values[0].size()); }
    double effective(int cls, FeatureVector::Index j) const;
    Eigen::VectorXd effective_centroid(int cls) const;
    Eigen::Vector2d squared_distances(const FeatureVector& x) const;
    Label predict(const FeatureVector& x) const;
    bool update(const LabeledSample& sample);
};

using Model = std::variant<PerceptronModel, NaiveBayesModel, NearestCentroidModel, SparseNearestCentroidModel>;

Model make_model(const ModelSpec& spec);
ModelSpec spec_of(const Model& model);
std::size_t dimension(const Model& model);

/// Throws std::invalid_argument when x's dimensionality differs from the model's.
Label predict(const Model& model, const FeatureVector& x);
/// Returns true iff model state changed.
bool update(Model& model, const LabeledSample& sample);

/// Fresh model trained by applying `update` to each sample in order.
/// Throws on an empty set, inconsistent dimensionality, or (nearest centroid) a missing class.
Model warm_start(const ModelSpec& spec, std::span<const LabeledSample> samples);

/// Fraction of samples classified correctly. Throws on an empty set.
double evaluate(const Model& model, std::span<const LabeledSample> test);

/// True if `a` beats `b` by more than the tie tolerance.
bool clearly_greater(double a, double b) noexcept;

}  // namespace dcai

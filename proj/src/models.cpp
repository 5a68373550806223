// Copyright 2026 The dcai-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "dcai/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace dcai {
namespace {

void check_dimension(std::size_t model_dim, const FeatureVector& x) {
    if (x.dimension() != model_dim)
        throw std::invalid_argument("dimensionality mismatch: model has " + std::to_string(model_dim) +
                                    ", sample has " + std::to_string(x.dimension()));
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string normalized(std::string_view name) {
    std::string out(name);
    std::replace(out.begin(), out.end(), '_', '-');
    return out;
}

}  // namespace

std::string_view to_string(ModelKind kind) noexcept {
    switch (kind) {
        case ModelKind::perceptron: return "perceptron";
        case ModelKind::naive_bayes: return "naive-bayes";
        case ModelKind::nearest_centroid: return "nearest-centroid";
    }
    return "unknown";
}

ModelKind model_kind_from_string(std::string_view name) {
    const auto n = normalized(name);
    if (n == "perceptron") return ModelKind::perceptron;
    if (n == "naive-bayes" || n == "nb") return ModelKind::naive_bayes;
    if (n == "nearest-centroid" || n == "ncc") return ModelKind::nearest_centroid;
    throw std::invalid_argument("unknown model kind: " + std::string(name));
}

std::string_view to_string(Layout layout) noexcept { return layout == Layout::dense ? "dense" : "sparse"; }

Layout layout_from_string(std::string_view name) {
    if (name == "dense") return Layout::dense;
    if (name == "sparse") return Layout::sparse;
    throw std::invalid_argument("unknown layout: " + std::string(name));
}

bool clearly_greater(double a, double b) noexcept {
    if (a == b) return false;
    if (std::isinf(a) || std::isinf(b)) return a > b;
    const double scale = std::max({1.0, std::abs(a), std::abs(b)});
    return a - b > kTieTolerance * scale;
}

// ---------------------------------------------------------------- perceptron

PerceptronModel::PerceptronModel(std::size_t dimension, double lr, Layout l)
    : weights(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dimension))), learning_rate(lr), layout(l) {
    if (dimension == 0) throw std::invalid_argument("dimension must be positive");
    if (!(lr > 0.0)) throw std::invalid_argument("learning rate must be positive");
}

double PerceptronModel::score(const FeatureVector& x) const {
    check_dimension(dimension(), x);
    double s = bias;
    for (const auto& e : x.entries()) s += weights[e.index] * static_cast<double>(e.value);
    return s;
}

Label PerceptronModel::predict(const FeatureVector& x) const { return score(x) > 0.0 ? 1 : 0; }

bool PerceptronModel::update(const LabeledSample& sample) {
    if (predict(sample.features) == sample.label) return false;
    const double step = sample.label == 1 ? learning_rate : -learning_rate;
    for (const auto& e : sample.features.entries()) weights[e.index] += step * static_cast<double>(e.value);
    bias += step;
    return true;
}

// --------------------------------------------------------------- naive Bayes

NaiveBayesModel::NaiveBayesModel(std::size_t dimension, double alpha)
    : feature_counts(CountMatrix::Zero(2, static_cast<Eigen::Index>(dimension))), smoothing(alpha) {
    if (dimension == 0) throw std::invalid_argument("dimension must be positive");
    if (!(alpha > 0.0)) throw std::invalid_argument("smoothing must be positive");
}

Eigen::Vector2d NaiveBayesModel::log_joint(const FeatureVector& x) const {
    check_dimension(dimension(), x);
    const double n = static_cast<double>(class_counts[0] + class_counts[1]);
    const double d = static_cast<double>(dimension());
    double present = 0.0;
    for (const auto& e : x.entries()) present += static_cast<double>(e.value);

    Eigen::Vector2d out;
    for (int c = 0; c < 2; ++c) {
        double s = std::log(static_cast<double>(class_counts[c]) + smoothing) - std::log(n + 2.0 * smoothing);
        for (const auto& e : x.entries())
            s += static_cast<double>(e.value) *
                 std::log(static_cast<double>(feature_counts(c, e.index)) + smoothing);
        s -= present * std::log(static_cast<double>(total_feature_counts[c]) + smoothing * d);
        out[c] = s;
    }
    return out;
}

Label NaiveBayesModel::predict(const FeatureVector& x) const {
    const auto s = log_joint(x);
    return clearly_greater(s[1], s[0]) ? 1 : 0;
}

bool NaiveBayesModel::update(const LabeledSample& sample) {
    check_dimension(dimension(), sample.features);
    const int c = sample.label;
    ++class_counts[c];
    for (const auto& e : sample.features.entries()) {
        feature_counts(c, e.index) += e.value;
        total_feature_counts[c] += e.value;
    }
    return true;
}

// ------------------------------------------------------ dense nearest centroid

NearestCentroidModel::NearestCentroidModel(std::size_t dimension) {
    if (dimension == 0) throw std::invalid_argument("dimension must be positive");
    for (auto& c : centroids) c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dimension));
}

Eigen::Vector2d NearestCentroidModel::squared_distances(const FeatureVector& x) const {
    check_dimension(dimension(), x);
    const Eigen::VectorXd v = x.to_eigen();
    Eigen::Vector2d out;
    for (int c = 0; c < 2; ++c)
        out[c] = class_sample_counts[c] == 0 ? std::numeric_limits<double>::infinity()
                                             : (v - centroids[c]).squaredNorm();
    return out;
}

Label NearestCentroidModel::predict(const FeatureVector& x) const {
    const auto d = squared_distances(x);
    return clearly_greater(d[0], d[1]) ? 1 : 0;
}

bool NearestCentroidModel::update(const LabeledSample& sample) {
    check_dimension(dimension(), sample.features);
    const int c = sample.label;
    const double next = static_cast<double>(class_sample_counts[c] + 1);
    centroids[c] += (sample.features.to_eigen() - centroids[c]) / next;
    ++class_sample_counts[c];
    return true;
}

// ----------------------------------------------------- sparse nearest centroid

SparseNearestCentroidModel::SparseNearestCentroidModel(std::size_t dimension) {
    if (dimension == 0) throw std::invalid_argument("dimension must be positive");
    const auto d = static_cast<Eigen::Index>(dimension);
    for (int c = 0; c < 2; ++c) {
        values[c] = Eigen::VectorXd::Zero(d);
        denominators[c] = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>::Zero(d);
    }
}

double SparseNearestCentroidModel::effective(int cls, FeatureVector::Index j) const {
    const auto stored = denominators[cls][j];
    if (stored == 0) return 0.0;
    return values[cls][j] * static_cast<double>(stored) / static_cast<double>(class_sample_counts[cls]);
}

Eigen::VectorXd SparseNearestCentroidModel::effective_centroid(int cls) const {
    Eigen::VectorXd out(values[cls].size());
    for (Eigen::Index j = 0; j < out.size(); ++j) out[j] = effective(cls, static_cast<FeatureVector::Index>(j));
    return out;
}

Eigen::Vector2d SparseNearestCentroidModel::squared_distances(const FeatureVector& x) const {
    check_dimension(dimension(), x);
    const double x_norm = x.squared_norm();
    Eigen::Vector2d out;
    for (int c = 0; c < 2; ++c) {
        if (class_sample_counts[c] == 0) {
            out[c] = std::numeric_limits<double>::infinity();
            continue;
        }
        double cross = 0.0;
        for (const auto& e : x.entries()) cross += static_cast<double>(e.value) * effective(c, e.index);
        out[c] = std::max(0.0, squared_magnitudes[c] - 2.0 * cross + x_norm);
    }
    return out;
}

Label SparseNearestCentroidModel::predict(const FeatureVector& x) const {
    const auto d = squared_distances(x);
    return clearly_greater(d[0], d[1]) ? 1 : 0;
}

bool SparseNearestCentroidModel::update(const LabeledSample& sample) {
    check_dimension(dimension(), sample.features);
    const int c = sample.label;
    const auto n = class_sample_counts[c];
    const double next = static_cast<double>(n + 1);

    // Untouched coordinates shrink by n / (n + 1); touched ones are rewritten.
    double touched_old = 0.0;
    double touched_new = 0.0;
    for (const auto& e : sample.features.entries()) {
        const double old_value = effective(c, e.index);
        const double new_value = (old_value * static_cast<double>(n) + static_cast<double>(e.value)) / next;
        touched_old += old_value * old_value;
        touched_new += new_value * new_value;
        values[c][e.index] = new_value;
        denominators[c][e.index] = n + 1;
    }
    const double shrink = static_cast<double>(n) / next;
    squared_magnitudes[c] = std::max(0.0, shrink * shrink * (squared_magnitudes[c] - touched_old)) + touched_new;
    class_sample_counts[c] = n + 1;
    return true;
}

// ----------------------------------------------------------------- dispatch

Model make_model(const ModelSpec& spec) {
    switch (spec.kind) {
        case ModelKind::perceptron: return PerceptronModel(spec.dimension, spec.learning_rate, spec.layout);
        case ModelKind::naive_bayes: return NaiveBayesModel(spec.dimension, spec.smoothing);
        case ModelKind::nearest_centroid:
            if (spec.layout == Layout::sparse) return SparseNearestCentroidModel(spec.dimension);
            return NearestCentroidModel(spec.dimension);
    }
    throw std::invalid_argument("unknown model kind");
}

ModelSpec spec_of(const Model& model) {
    return std::visit(overloaded{
                          [](const PerceptronModel& m) {
                              return ModelSpec{ModelKind::perceptron, m.layout, m.dimension(), m.learning_rate, 1.0};
                          },
                          [](const NaiveBayesModel& m) {
                              return ModelSpec{ModelKind::naive_bayes, Layout::sparse, m.dimension(), 1.0, m.smoothing};
                          },
                          [](const NearestCentroidModel& m) {
                              return ModelSpec{ModelKind::nearest_centroid, Layout::dense, m.dimension(), 1.0, 1.0};
                          },
                          [](const SparseNearestCentroidModel& m) {
                              return ModelSpec{ModelKind::nearest_centroid, Layout::sparse, m.dimension(), 1.0, 1.0};
                          },
                      },
                      model);
}

std::size_t dimension(const Model& model) {
    return std::visit([](const auto& m) { return m.dimension(); }, model);
}

Label predict(const Model& model, const FeatureVector& x) {
    return std::visit([&](const auto& m) { return m.predict(x); }, model);
}

bool update(Model& model, const LabeledSample& sample) {
    return std::visit([&](auto& m) { return m.update(sample); }, model);
}

Model warm_start(const ModelSpec& spec, std::span<const LabeledSample> samples) {
    if (samples.empty()) throw std::invalid_argument("warm start needs at least one sample");
    ModelSpec s = spec;
    if (s.dimension == 0) s.dimension = samples.front().features.dimension();
    if (s.kind == ModelKind::nearest_centroid) {
        std::array<bool, 2> seen{};
        for (const auto& sample : samples) seen[sample.label] = true;
        if (!seen[0] || !seen[1])
            throw std::invalid_argument("nearest centroid warm start needs samples of both classes");
    }
    Model model = make_model(s);
    for (const auto& sample : samples) update(model, sample);
    return model;
}

double evaluate(const Model& model, std::span<const LabeledSample> test) {
    if (test.empty()) throw std::invalid_argument("cannot evaluate on an empty test set");
    std::size_t correct = 0;
    for (const auto& s : test)
        if (predict(model, s.features) == s.label) ++correct;
    return static_cast<double>(correct) / static_cast<double>(test.size());
}

}  // namespace dcai

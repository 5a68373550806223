// Copyright 2026 The dcai-sim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <random>
#include <vector>

#include "dcai/checkpoint.hpp"
#include "dcai/features.hpp"
#include "dcai/models.hpp"

namespace dcai::testing {

using Rng = std::mt19937_64;

inline FeatureVector random_dense(Rng& rng, std::size_t d, int max_value = 5) {
    std::uniform_int_distribution<int> v(0, max_value);
    std::vector<FeatureVector::Value> values(d);
    for (auto& x : values) x = v(rng);
    return FeatureVector::dense(values);
}

/// Same entries as `x`, stored sparsely.
inline FeatureVector as_sparse(const FeatureVector& x) { return FeatureVector::sparse(x.dimension(), x.entries()); }

/// Same entries as `x`, stored densely.
inline FeatureVector as_dense(const FeatureVector& x) {
    std::vector<FeatureVector::Value> values(x.dimension(), 0);
    for (const auto& e : x.entries()) values[e.index] = e.value;
    return FeatureVector::dense(values);
}

inline FeatureVector random_sparse(Rng& rng, std::size_t d, double density, int max_value = 5) {
    std::bernoulli_distribution keep(density);
    std::uniform_int_distribution<int> v(1, max_value);
    std::vector<FeatureVector::Entry> entries;
    for (std::size_t j = 0; j < d; ++j)
        if (keep(rng)) entries.push_back({static_cast<FeatureVector::Index>(j), v(rng)});
    return FeatureVector::sparse(d, entries);
}

inline LabeledSample random_sample(Rng& rng, std::size_t d, int max_value = 5) {
    std::bernoulli_distribution coin(0.5);
    return LabeledSample(random_dense(rng, d, max_value), coin(rng) ? 1 : 0);
}

// Reference single pass perceptron written without the library.
inline double reference_perceptron_accuracy(const std::vector<LabeledSample>& train, const std::vector<LabeledSample>& test) {
    const std::size_t d = train.front().features.dimension();
    std::vector<double> w(d, 0.0);
    double b = 0.0;
    auto score = [&](const FeatureVector& x) {
        double s = b;
        for (std::size_t j = 0; j < d; ++j) s += w[j] * static_cast<double>(x[static_cast<FeatureVector::Index>(j)]);
        return s;
    };
    for (const auto& s : train) {
        const int p = score(s.features) > 0 ? 1 : 0;
        if (p == s.label) continue;
        const double sign = s.label == 1 ? 1.0 : -1.0;
        for (std::size_t j = 0; j < d; ++j) w[j] += sign * static_cast<double>(s.features[static_cast<FeatureVector::Index>(j)]);
        b += sign;
    }
    std::size_t right = 0;
    for (const auto& s : test) right += (score(s.features) > 0 ? 1 : 0) == s.label;
    return static_cast<double>(right) / static_cast<double>(test.size());
}

inline ModelCheckpoint bytes_of(const Model& m) { return snapshot(m); }

}  // namespace dcai::testing

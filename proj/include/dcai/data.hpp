// Copyright 2026 The dcai-sim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dcai/features.hpp"

namespace dcai {

/// Lowercased runs of ASCII alphanumerics.
std::vector<std::string> tokenize(std::string_view text);
/// Adjacent token pairs joined by a single space.
std::vector<std::string> bigrams(const std::vector<std::string>& tokens);

/// Top-k tokens of a training split, most frequent first, ties lexicographic.
class Vocabulary {
public:
    Vocabulary() = default;
    static Vocabulary build(const std::vector<std::vector<std::string>>& documents, std::size_t k);

    std::size_t size() const noexcept { return tokens_.size(); }
    const std::vector<std::string>& tokens() const noexcept { return tokens_; }
    std::optional<FeatureVector::Index> index_of(const std::string& token) const;

    /// One token per line, in index order.
    void write(std::ostream& out) const;

private:
    std::vector<std::string> tokens_;
    std::unordered_map<std::string, FeatureVector::Index> index_;
};

enum class TextFeatures : std::uint8_t {
    bigram_tf,      // term frequency of in-vocabulary bigrams
    word_presence,  // 1 for each in-vocabulary word present
};

/// Immutable after construction; safe to share across threads.
class TextFeaturizer {
public:
    /// Throws std::invalid_argument on an empty training set or k == 0.
    static TextFeaturizer build(TextFeatures kind, std::span<const std::string> train_texts, std::size_t k = 1000);

    FeatureVector apply(std::string_view text) const;
    const Vocabulary& vocabulary() const noexcept { return vocabulary_; }
    TextFeatures kind() const noexcept { return kind_; }
    /// Feature dimensionality; at least 1 even for a degenerate vocabulary.
    std::size_t dimension() const noexcept { return std::max<std::size_t>(1, vocabulary_.size()); }

private:
    std::vector<std::string> terms(std::string_view text) const;

    TextFeatures kind_ = TextFeatures::bigram_tf;
    Vocabulary vocabulary_;
};

TextFeaturizer build_bigram_tf_featurizer(std::span<const std::string> train_texts, std::size_t k = 1000);
TextFeaturizer build_word_presence_featurizer(std::span<const std::string> train_texts, std::size_t k = 1000);

/// Raw per-workout summary from a fitness tracker.
struct FitnessRecord {
    double avg_heart_rate = 0;
    double min_heart_rate = 0;
    double max_heart_rate = 0;
    double max_speed = 0;
    double min_speed = 0;
    double avg_speed = 0;
    double median_speed = 0;
    int gender = 0;  // 0 or 1

    /// Throws std::invalid_argument naming the first missing field.
    static FitnessRecord from_fields(const std::map<std::string, double>& fields);
};

inline constexpr std::size_t kFitnessFeatureCount = 9;
inline constexpr double kFitnessScale = 1000.0;

/// Nine integer features, each scaled by 1000:
/// avg HR, max speed, min speed, avg speed, median speed, gender,
/// avg HR / min HR, max HR / min HR, max speed - min speed.
/// Throws on a zero minimum heart rate or a negative field.
FeatureVector fitness_features(const FitnessRecord& record);

/// Train/test split of featurized samples.
struct Dataset {
    std::size_t dimension = 0;
    Layout layout = Layout::dense;
    std::vector<LabeledSample> train;
    std::vector<LabeledSample> test;
};

enum class SynthKind : std::uint8_t { separable, noisy, text_like };

std::string_view to_string(SynthKind kind) noexcept;
SynthKind synth_kind_from_string(std::string_view name);

inline constexpr double kSynthNoiseRate = 0.10;

/// Deterministic synthetic corpus with an 80/20 train/test split.
///
/// separable: two Gaussian clusters (sigma 10 around 100) whose projections on
///   the separating direction are kept at least one sigma from the boundary,
///   so the classes are linearly separable with a 2-sigma gap through the origin.
/// noisy: the separable corpus for the same seed with 10% of labels flipped.
/// text_like: sparse token counts drawn from two different Zipf distributions.
/// Throws std::invalid_argument unless n >= 20 and dimension >= 2.
Dataset synth_generate(SynthKind kind, std::size_t n, std::size_t dimension, std::uint64_t seed);

/// Raw labeled texts; the first `train_size` records are the training split.
struct TextCorpus {
    std::vector<std::string> texts;
    std::vector<Label> labels;
    std::size_t train_size = 0;
};

inline constexpr double kTrainFraction = 0.8;

/// CSV with header `text,label`. RFC 4180 quoting. First 80% of rows train.
TextCorpus load_text_csv(const std::filesystem::path& path);
TextCorpus parse_text_csv(std::istream& in);

/// Featurizes with a vocabulary built from the training split only.
Dataset featurize(const TextCorpus& corpus, TextFeatures kind, std::size_t k = 1000,
                  TextFeaturizer* featurizer_out = nullptr);

/// CSV with header `f1,...,fN,label` of non-negative integers. First 80% of rows train.
Dataset load_numeric_csv(const std::filesystem::path& path, Layout layout = Layout::dense);
Dataset parse_numeric_csv(std::istream& in, Layout layout = Layout::dense);
/// Writes train rows then test rows, so reloading restores the same split.
void write_numeric_csv(const Dataset& data, std::ostream& out);

}  // namespace dcai

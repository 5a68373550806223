// Copyright 2026 The dcai-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "dcai/data.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>

namespace dcai {
namespace {

using Rng = std::mt19937_64;

std::size_t train_count(std::size_t n) {
    return static_cast<std::size_t>(std::floor(static_cast<double>(n) * kTrainFraction));
}

/// Reads one RFC 4180 record; returns false at end of input.
bool read_csv_record(std::istream& in, std::vector<std::string>& fields) {
    fields.clear();
    if (in.peek() == std::char_traits<char>::eof()) return false;
    std::string field;
    bool quoted = false;
    bool any = false;
    char ch;
    while (in.get(ch)) {
        any = true;
        if (quoted) {
            if (ch == '"') {
                if (in.peek() == '"') {
                    in.get(ch);
                    field.push_back('"');
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(ch);
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (ch == '\n') {
            break;
        } else if (ch != '\r') {
            field.push_back(ch);
        }
    }
    if (quoted) throw std::invalid_argument("unterminated quoted CSV field");
    if (!any) return false;
    fields.push_back(std::move(field));
    return true;
}

Label parse_label(const std::string& s, std::size_t row) {
    if (s == "0") return 0;
    if (s == "1") return 1;
    throw std::invalid_argument("row " + std::to_string(row) + ": label must be 0 or 1, got '" + s + "'");
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return in;
}

Eigen::VectorXd separating_direction(std::size_t d) {
    // Alternating +1/-1, orthogonal to the all-ones diagonal so the boundary passes through the origin.
    Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
    const std::size_t paired = d - (d % 2);
    for (std::size_t i = 0; i < paired; ++i) v[static_cast<Eigen::Index>(i)] = (i % 2 == 0) ? 1.0 : -1.0;
    return v.normalized();
}

std::vector<LabeledSample> separable_samples(std::size_t n, std::size_t d, std::uint64_t seed) {
    constexpr double kCenter = 100.0;
    constexpr double kSigma = 10.0;
    constexpr double kHalfSeparation = 2.0 * kSigma;
    constexpr double kMinProjection = kSigma;

    Rng rng(seed);
    std::normal_distribution<double> noise(0.0, kSigma);
    std::bernoulli_distribution coin(0.5);
    const Eigen::VectorXd v = separating_direction(d);

    std::vector<LabeledSample> out;
    out.reserve(n);
    std::vector<FeatureVector::Value> values(d);
    while (out.size() < n) {
        const Label y = coin(rng) ? 1 : 0;
        const double side = y == 0 ? 1.0 : -1.0;
        double projection = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            const double mean = kCenter + side * kHalfSeparation * v[static_cast<Eigen::Index>(j)];
            values[j] = std::max<FeatureVector::Value>(0, std::llround(mean + noise(rng)));
            projection += v[static_cast<Eigen::Index>(j)] * (static_cast<double>(values[j]) - kCenter);
        }
        if (side * projection < kMinProjection) continue;
        out.emplace_back(FeatureVector::dense(values), y);
    }
    return out;
}

std::vector<LabeledSample> text_like_samples(std::size_t n, std::size_t d, std::uint64_t seed) {
    Rng rng(seed);
    std::array<std::discrete_distribution<std::size_t>, 2> token_dist;
    for (int c = 0; c < 2; ++c) {
        std::vector<std::size_t> order(d);
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        std::vector<double> weights(d);
        for (std::size_t rank = 0; rank < d; ++rank) weights[order[rank]] = 1.0 / static_cast<double>(rank + 1);
        token_dist[c] = std::discrete_distribution<std::size_t>(weights.begin(), weights.end());
    }
    std::bernoulli_distribution coin(0.5);
    std::uniform_int_distribution<int> length(10, 30);

    std::vector<LabeledSample> out;
    out.reserve(n);
    std::map<std::size_t, FeatureVector::Value> counts;
    for (std::size_t i = 0; i < n; ++i) {
        const Label y = coin(rng) ? 1 : 0;
        counts.clear();
        const int len = length(rng);
        for (int t = 0; t < len; ++t) ++counts[token_dist[y](rng)];
        std::vector<FeatureVector::Entry> entries;
        entries.reserve(counts.size());
        for (const auto& [j, v] : counts) entries.push_back({static_cast<FeatureVector::Index>(j), v});
        out.emplace_back(FeatureVector::sparse(d, std::move(entries)), y);
    }
    return out;
}

}  // namespace

// ------------------------------------------------------------ tokenization

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    for (const char raw : text) {
        const auto ch = static_cast<unsigned char>(raw);
        if (ch < 0x80 && std::isalnum(ch)) {
            current.push_back(static_cast<char>(std::tolower(ch)));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

std::vector<std::string> bigrams(const std::vector<std::string>& tokens) {
    std::vector<std::string> out;
    for (std::size_t i = 1; i < tokens.size(); ++i) out.push_back(tokens[i - 1] + ' ' + tokens[i]);
    return out;
}

Vocabulary Vocabulary::build(const std::vector<std::vector<std::string>>& documents, std::size_t k) {
    std::unordered_map<std::string, std::uint64_t> freq;
    for (const auto& doc : documents)
        for (const auto& t : doc) ++freq[t];
    std::vector<std::pair<std::string, std::uint64_t>> ranked(freq.begin(), freq.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    if (ranked.size() > k) ranked.resize(k);

    Vocabulary v;
    for (auto& [token, count] : ranked) {
        v.index_.emplace(token, static_cast<FeatureVector::Index>(v.tokens_.size()));
        v.tokens_.push_back(std::move(token));
    }
    return v;
}

std::optional<FeatureVector::Index> Vocabulary::index_of(const std::string& token) const {
    const auto it = index_.find(token);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

void Vocabulary::write(std::ostream& out) const {
    for (const auto& t : tokens_) out << t << '\n';
}

std::vector<std::string> TextFeaturizer::terms(std::string_view text) const {
    auto tokens = tokenize(text);
    return kind_ == TextFeatures::bigram_tf ? bigrams(tokens) : tokens;
}

TextFeaturizer TextFeaturizer::build(TextFeatures kind, std::span<const std::string> train_texts, std::size_t k) {
    if (train_texts.empty()) throw std::invalid_argument("featurizer needs a non-empty training set");
    if (k == 0) throw std::invalid_argument("vocabulary size must be positive");
    TextFeaturizer f;
    f.kind_ = kind;
    std::vector<std::vector<std::string>> docs;
    docs.reserve(train_texts.size());
    for (const auto& text : train_texts) docs.push_back(f.terms(text));
    f.vocabulary_ = Vocabulary::build(docs, k);
    return f;
}

FeatureVector TextFeaturizer::apply(std::string_view text) const {
    std::map<FeatureVector::Index, FeatureVector::Value> counts;
    for (const auto& term : terms(text)) {
        if (const auto idx = vocabulary_.index_of(term)) {
            auto& c = counts[*idx];
            c = kind_ == TextFeatures::bigram_tf ? c + 1 : 1;
        }
    }
    std::vector<FeatureVector::Entry> entries;
    entries.reserve(counts.size());
    for (const auto& [i, v] : counts) entries.push_back({i, v});
    return FeatureVector::sparse(dimension(), std::move(entries));
}

TextFeaturizer build_bigram_tf_featurizer(std::span<const std::string> train_texts, std::size_t k) {
    return TextFeaturizer::build(TextFeatures::bigram_tf, train_texts, k);
}

TextFeaturizer build_word_presence_featurizer(std::span<const std::string> train_texts, std::size_t k) {
    return TextFeaturizer::build(TextFeatures::word_presence, train_texts, k);
}

// ----------------------------------------------------------------- fitness

FitnessRecord FitnessRecord::from_fields(const std::map<std::string, double>& fields) {
    auto get = [&](const char* name) {
        const auto it = fields.find(name);
        if (it == fields.end()) throw std::invalid_argument(std::string("fitness record is missing '") + name + "'");
        return it->second;
    };
    FitnessRecord r;
    r.avg_heart_rate = get("avg_heart_rate");
    r.min_heart_rate = get("min_heart_rate");
    r.max_heart_rate = get("max_heart_rate");
    r.max_speed = get("max_speed");
    r.min_speed = get("min_speed");
    r.avg_speed = get("avg_speed");
    r.median_speed = get("median_speed");
    const double g = get("gender");
    if (g != 0.0 && g != 1.0) throw std::invalid_argument("gender must be 0 or 1");
    r.gender = static_cast<int>(g);
    return r;
}

FeatureVector fitness_features(const FitnessRecord& r) {
    if (r.min_heart_rate == 0.0) throw std::invalid_argument("minimum heart rate is zero");
    const double raw[kFitnessFeatureCount] = {
        r.avg_heart_rate,
        r.max_speed,
        r.min_speed,
        r.avg_speed,
        r.median_speed,
        static_cast<double>(r.gender),
        r.avg_heart_rate / r.min_heart_rate,
        r.max_heart_rate / r.min_heart_rate,
        r.max_speed - r.min_speed,
    };
    std::vector<FeatureVector::Value> values;
    values.reserve(kFitnessFeatureCount);
    for (const double v : raw) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("fitness features must be non-negative");
        values.push_back(std::llround(v * kFitnessScale));
    }
    return FeatureVector::dense(std::move(values));
}

// --------------------------------------------------------------- synthetic

std::string_view to_string(SynthKind kind) noexcept {
    switch (kind) {
        case SynthKind::separable: return "separable";
        case SynthKind::noisy: return "noisy";
        case SynthKind::text_like: return "text-like";
    }
    return "unknown";
}

SynthKind synth_kind_from_string(std::string_view name) {
    if (name == "separable") return SynthKind::separable;
    if (name == "noisy") return SynthKind::noisy;
    if (name == "text-like" || name == "text_like") return SynthKind::text_like;
    throw std::invalid_argument("unknown synthetic kind: " + std::string(name));
}

Dataset synth_generate(SynthKind kind, std::size_t n, std::size_t dimension, std::uint64_t seed) {
    if (n < 20) throw std::invalid_argument("synthetic corpus needs n >= 20");
    if (dimension < 2) throw std::invalid_argument("synthetic corpus needs dimension >= 2");

    std::vector<LabeledSample> samples = kind == SynthKind::text_like ? text_like_samples(n, dimension, seed)
                                                                      : separable_samples(n, dimension, seed);
    if (kind == SynthKind::noisy) {
        Rng rng(seed ^ 0x9E3779B97F4A7C15ULL);
        std::bernoulli_distribution flip(kSynthNoiseRate);
        for (auto& s : samples)
            if (flip(rng)) s.label = 1 - s.label;
    }

    Dataset data;
    data.dimension = dimension;
    data.layout = kind == SynthKind::text_like ? Layout::sparse : Layout::dense;
    const auto split = train_count(n);
    data.train.assign(std::make_move_iterator(samples.begin()), std::make_move_iterator(samples.begin() + split));
    data.test.assign(std::make_move_iterator(samples.begin() + split), std::make_move_iterator(samples.end()));
    return data;
}

// --------------------------------------------------------------------- CSV

TextCorpus parse_text_csv(std::istream& in) {
    std::vector<std::string> fields;
    if (!read_csv_record(in, fields) || fields.size() != 2 || fields[0] != "text" || fields[1] != "label")
        throw std::invalid_argument("text corpus must have header 'text,label'");
    TextCorpus corpus;
    std::size_t row = 1;
    while (read_csv_record(in, fields)) {
        ++row;
        if (fields.size() == 1 && fields[0].empty()) continue;
        if (fields.size() != 2) throw std::invalid_argument("row " + std::to_string(row) + ": expected 2 columns");
        corpus.texts.push_back(std::move(fields[0]));
        corpus.labels.push_back(parse_label(fields[1], row));
    }
    corpus.train_size = train_count(corpus.texts.size());
    return corpus;
}

TextCorpus load_text_csv(const std::filesystem::path& path) {
    auto in = open_input(path);
    return parse_text_csv(in);
}

Dataset featurize(const TextCorpus& corpus, TextFeatures kind, std::size_t k, TextFeaturizer* featurizer_out) {
    if (corpus.train_size == 0 || corpus.train_size >= corpus.texts.size())
        throw std::invalid_argument("text corpus needs non-empty train and test splits");
    const auto train_texts = std::span<const std::string>(corpus.texts).first(corpus.train_size);
    auto featurizer = TextFeaturizer::build(kind, train_texts, k);

    Dataset data;
    data.dimension = featurizer.dimension();
    data.layout = Layout::sparse;
    for (std::size_t i = 0; i < corpus.texts.size(); ++i) {
        auto& split = i < corpus.train_size ? data.train : data.test;
        split.emplace_back(featurizer.apply(corpus.texts[i]), corpus.labels[i]);
    }
    if (featurizer_out) *featurizer_out = std::move(featurizer);
    return data;
}

Dataset parse_numeric_csv(std::istream& in, Layout layout) {
    std::vector<std::string> fields;
    if (!read_csv_record(in, fields) || fields.size() < 2 || fields.back() != "label")
        throw std::invalid_argument("numeric corpus must have header 'f1,...,fN,label'");
    for (std::size_t j = 0; j + 1 < fields.size(); ++j)
        if (fields[j] != "f" + std::to_string(j + 1))
            throw std::invalid_argument("numeric corpus column " + std::to_string(j + 1) + " must be named f" +
                                        std::to_string(j + 1));
    const std::size_t d = fields.size() - 1;

    std::vector<LabeledSample> samples;
    std::size_t row = 1;
    std::vector<FeatureVector::Value> values(d);
    while (read_csv_record(in, fields)) {
        ++row;
        if (fields.size() == 1 && fields[0].empty()) continue;
        if (fields.size() != d + 1)
            throw std::invalid_argument("row " + std::to_string(row) + ": expected " + std::to_string(d + 1) + " columns");
        for (std::size_t j = 0; j < d; ++j) {
            const auto& s = fields[j];
            const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), values[j]);
            if (ec != std::errc{} || ptr != s.data() + s.size() || values[j] < 0)
                throw std::invalid_argument("row " + std::to_string(row) + ": bad feature value '" + s + "'");
        }
        auto fv = FeatureVector::dense(values);
        if (layout == Layout::sparse) fv = FeatureVector::sparse(d, fv.entries());
        samples.emplace_back(std::move(fv), parse_label(fields[d], row));
    }
    if (samples.size() < 2) throw std::invalid_argument("numeric corpus needs at least two rows");

    Dataset data;
    data.dimension = d;
    data.layout = layout;
    const auto split = train_count(samples.size());
    data.train.assign(samples.begin(), samples.begin() + static_cast<std::ptrdiff_t>(split));
    data.test.assign(samples.begin() + static_cast<std::ptrdiff_t>(split), samples.end());
    return data;
}

Dataset load_numeric_csv(const std::filesystem::path& path, Layout layout) {
    auto in = open_input(path);
    return parse_numeric_csv(in, layout);
}

void write_numeric_csv(const Dataset& data, std::ostream& out) {
    for (std::size_t j = 0; j < data.dimension; ++j) out << 'f' << (j + 1) << ',';
    out << "label\n";
    for (const auto* split : {&data.train, &data.test}) {
        for (const auto& s : *split) {
            for (std::size_t j = 0; j < data.dimension; ++j)
                out << s.features[static_cast<FeatureVector::Index>(j)] << ',';
            out << s.label << '\n';
        }
    }
}

}  // namespace dcai

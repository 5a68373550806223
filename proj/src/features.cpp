// Copyright 2026 The dcai-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "dcai/features.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <stdexcept>

namespace dcai {
namespace {

FeatureVector::Value parse_value(std::string_view token) {
    FeatureVector::Value v = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc{} || ptr != token.data() + token.size())
        throw std::invalid_argument("bad feature value: " + std::string(token));
    return v;
}

}  // namespace

FeatureVector FeatureVector::dense(std::vector<Value> values) {
    if (values.empty()) throw std::invalid_argument("dense feature vector must be non-empty");
    FeatureVector fv;
    fv.dimension_ = values.size();
    fv.layout_ = Layout::dense;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] < 0) throw std::invalid_argument("feature values must be non-negative");
        if (values[i] != 0) fv.entries_.push_back({static_cast<Index>(i), values[i]});
    }
    return fv;
}

FeatureVector FeatureVector::sparse(std::size_t dimension, std::vector<Entry> entries) {
    if (dimension == 0) throw std::invalid_argument("dimension must be positive");
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].index >= dimension) throw std::invalid_argument("sparse index out of range");
        if (entries[i].value <= 0) throw std::invalid_argument("sparse values must be positive");
        if (i > 0 && entries[i].index <= entries[i - 1].index)
            throw std::invalid_argument("sparse indices must be strictly increasing");
    }
    FeatureVector fv;
    fv.dimension_ = dimension;
    fv.layout_ = Layout::sparse;
    fv.entries_ = std::move(entries);
    return fv;
}

FeatureVector::Value FeatureVector::operator[](Index index) const {
    if (index >= dimension_) throw std::out_of_range("feature index out of range");
    const auto it = std::lower_bound(entries_.begin(), entries_.end(), index,
                                     [](const Entry& e, Index i) { return e.index < i; });
    return (it != entries_.end() && it->index == index) ? it->value : 0;
}

Eigen::VectorXd FeatureVector::to_eigen() const {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dimension_));
    for (const auto& e : entries_) v[e.index] = static_cast<double>(e.value);
    return v;
}

double FeatureVector::squared_norm() const noexcept {
    double sum = 0.0;
    for (const auto& e : entries_) sum += static_cast<double>(e.value) * static_cast<double>(e.value);
    return sum;
}

std::string FeatureVector::encode() const {
    std::ostringstream out;
    if (layout_ == Layout::dense) {
        out << "D:";
        for (std::size_t i = 0; i < dimension_; ++i) {
            if (i) out << ' ';
            out << (*this)[static_cast<Index>(i)];
        }
    } else {
        out << 'S' << dimension_ << ':';
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            if (i) out << ' ';
            out << entries_[i].index << '=' << entries_[i].value;
        }
    }
    return out.str();
}

FeatureVector FeatureVector::decode(const std::string& text) {
    const auto colon = text.find(':');
    if (text.empty() || colon == std::string::npos) throw std::invalid_argument("bad feature encoding");
    std::istringstream body(text.substr(colon + 1));
    std::string token;
    if (text[0] == 'D' && colon == 1) {
        std::vector<Value> values;
        while (body >> token) values.push_back(parse_value(token));
        return dense(std::move(values));
    }
    if (text[0] == 'S') {
        const auto dimension = static_cast<std::size_t>(parse_value(std::string_view(text).substr(1, colon - 1)));
        std::vector<Entry> entries;
        while (body >> token) {
            const auto eq = token.find('=');
            if (eq == std::string::npos) throw std::invalid_argument("bad sparse entry: " + token);
            const auto index = parse_value(std::string_view(token).substr(0, eq));
            if (index < 0) throw std::invalid_argument("bad sparse index: " + token);
            entries.push_back({static_cast<Index>(index), parse_value(std::string_view(token).substr(eq + 1))});
        }
        return sparse(dimension, std::move(entries));
    }
    throw std::invalid_argument("bad feature encoding: " + text);
}

LabeledSample::LabeledSample(FeatureVector x, Label y) : features(std::move(x)), label(y) {
    if (y != 0 && y != 1) throw std::invalid_argument("label must be 0 or 1");
}

}  // namespace dcai

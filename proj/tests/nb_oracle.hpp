// Copyright 2026 The dcai-sim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "dcai/models.hpp"

namespace dcai::testing {

/// Exact multinomial naive Bayes decision with smoothing 1, in rational arithmetic.
///
/// score_c = (n_c + 1) / (N + 2) * prod_j ((f_cj + 1) / (T_c + d))^x_j
/// Class 1 wins only on a strictly larger score.
class ExactNaiveBayes {
public:
    using Int = boost::multiprecision::cpp_int;

    explicit ExactNaiveBayes(const NaiveBayesModel& m) : d_(m.dimension()) {
        for (int c = 0; c < 2; ++c) {
            prior_[c] = m.class_counts[c] + 1;
            per_feature_[c].resize(d_);
            for (std::size_t j = 0; j < d_; ++j) per_feature_[c][j] = m.feature_counts(c, static_cast<Eigen::Index>(j)) + 1;
            norm_[c] = m.total_feature_counts[c] + static_cast<std::int64_t>(d_);
        }
    }

    Label predict(const std::vector<int>& x) const {
        Int num[2] = {prior_[0], prior_[1]};
        int total = 0;
        for (std::size_t j = 0; j < d_; ++j) {
            for (int c = 0; c < 2; ++c) num[c] *= boost::multiprecision::pow(Int(per_feature_[c][j]), x[j]);
            total += x[j];
        }
        return decide(num[0], num[1], total);
    }

    /// Visits every x in {0..max_count}^d with the exact decision, sharing prefix products.
    void sweep(int max_count, const std::function<void(const std::vector<int>&, Label)>& visit) const {
        std::vector<int> x(d_, 0);
        std::vector<std::array<std::vector<Int>, 2>> powers(d_);
        for (std::size_t j = 0; j < d_; ++j)
            for (int c = 0; c < 2; ++c)
                for (int v = 0; v <= max_count; ++v)
                    powers[j][c].push_back(boost::multiprecision::pow(Int(per_feature_[c][j]), v));
        std::vector<Int> norm_pow[2];
        for (int c = 0; c < 2; ++c)
            for (int s = 0; s <= max_count * static_cast<int>(d_); ++s)
                norm_pow[c].push_back(boost::multiprecision::pow(Int(norm_[c]), s));

        std::function<void(std::size_t, const Int&, const Int&, int)> rec = [&](std::size_t j, const Int& a,
                                                                                const Int& b, int total) {
            if (j == d_) {
                // Compare a / T0^s against b / T1^s.
                const Label y = (b * norm_pow[0][total] > a * norm_pow[1][total]) ? 1 : 0;
                visit(x, y);
                return;
            }
            for (int v = 0; v <= max_count; ++v) {
                x[j] = v;
                rec(j + 1, a * powers[j][0][v], b * powers[j][1][v], total + v);
            }
            x[j] = 0;
        };
        rec(0, Int(prior_[0]), Int(prior_[1]), 0);
    }

private:
    Label decide(const Int& a, const Int& b, int total) const {
        using boost::multiprecision::pow;
        return b * pow(Int(norm_[0]), total) > a * pow(Int(norm_[1]), total) ? 1 : 0;
    }

    std::size_t d_;
    std::int64_t prior_[2];
    std::vector<std::int64_t> per_feature_[2];
    std::int64_t norm_[2];
};

}  // namespace dcai::testing

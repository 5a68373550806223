// Copyright 2026 The dcai-sim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace dcai {

/// Currency in micro-units (1e-6 of one balance unit). Escrow math is integer only.
using Amount = std::int64_t;

/// Simulated wall clock, in whole seconds.
using Seconds = std::int64_t;

using AccountId = std::string;
using ContributionId = std::uint64_t;

inline constexpr Amount kMicrosPerUnit = 1'000'000;
inline constexpr Seconds kSecondsPerDay = 86'400;

constexpr Amount units(std::int64_t whole) noexcept { return whole * kMicrosPerUnit; }

/// Outcome of an incentive operation. Every rejection reason is distinguishable.
enum class Status : std::uint8_t {
    ok,
    unknown_account,
    duplicate_account,
    unknown_contribution,
    invalid_sample,
    invalid_amount,
    time_regression,
    insufficient_balance,
    deposit_too_low,
    too_early,
    model_disagrees,
    model_agrees,
    already_refunded,
    already_closed,
    wrong_caller,
    reporter_already_paid,
    self_report,
    unverified_reporter,
    already_reported,
    zero_remaining,
};

std::string_view to_string(Status status) noexcept;
Status status_from_string(std::string_view name);

template <typename T>
struct [[nodiscard]] Result {
    Status status = Status::ok;
    T value{};

    bool ok() const noexcept { return status == Status::ok; }
    explicit operator bool() const noexcept { return ok(); }

    static Result failure(Status s) { return Result{s, T{}}; }
};

}  // namespace dcai

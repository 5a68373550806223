// Copyright 2026 The dcai-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "dcai/core.hpp"

#include <array>
#include <stdexcept>
#include <utility>

namespace dcai {
namespace {

constexpr std::array<std::pair<Status, std::string_view>, 20> kStatusNames{{
    {Status::ok, "ok"},
    {Status::unknown_account, "unknown_account"},
    {Status::duplicate_account, "duplicate_account"},
    {Status::unknown_contribution, "unknown_contribution"},
    {Status::invalid_sample, "invalid_sample"},
    {Status::invalid_amount, "invalid_amount"},
    {Status::time_regression, "time_regression"},
    {Status::insufficient_balance, "insufficient_balance"},
    {Status::deposit_too_low, "deposit_too_low"},
    {Status::too_early, "too_early"},
    {Status::model_disagrees, "model_disagrees"},
    {Status::model_agrees, "model_agrees"},
    {Status::already_refunded, "already_refunded"},
    {Status::already_closed, "already_closed"},
    {Status::wrong_caller, "wrong_caller"},
    {Status::reporter_already_paid, "reporter_already_paid"},
    {Status::self_report, "self_report"},
    {Status::unverified_reporter, "unverified_reporter"},
    {Status::already_reported, "already_reported"},
    {Status::zero_remaining, "zero_remaining"},
}};

}  // namespace

std::string_view to_string(Status status) noexcept {
    for (const auto& [s, name] : kStatusNames)
        if (s == status) return name;
    return "unknown";
}

Status status_from_string(std::string_view name) {
    for (const auto& [s, n] : kStatusNames)
        if (n == name) return s;
    throw std::invalid_argument("unknown status: " + std::string(name));
}

}  // namespace dcai

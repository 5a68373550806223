// Copyright 2026 The dcai-sim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <deque>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "dcai/core.hpp"
#include "dcai/features.hpp"
#include "dcai/incentive.hpp"

namespace dcai {

using Rng = std::mt19937_64;

enum class SubmitPolicy : std::uint8_t {
    accuracy_gated,  // P(submit) = min(1, accuracy + submit_bonus)
    always,
    never,
};

std::string_view to_string(SubmitPolicy policy) noexcept;
SubmitPolicy submit_policy_from_string(std::string_view name);

struct AgentProfile {
    AccountId id;
    Amount starting_balance = units(10'000);
    Amount max_deposit_mean = units(50);
    Amount max_deposit_std = units(10);
    double mean_update_interval = 600.0;  // seconds
    double p_incorrect_label = 0.0001;
    SubmitPolicy submit_policy = SubmitPolicy::accuracy_gated;
    double submit_bonus = 0.15;

    /// Honest contributor: rarely mislabels, checks accuracy before submitting.
    static AgentProfile good();
    /// Adversary: always flips the label and always submits.
    static AgentProfile bad();

    /// Throws std::invalid_argument on out-of-range fields.
    void validate() const;

    friend bool operator==(const AgentProfile&, const AgentProfile&) = default;
};

struct SubmissionDecision {
    bool submit = false;
    bool flip_label = false;
};

/// Whether to submit at this wake, and whether to flip the dataset label.
SubmissionDecision decide_submission(const AgentProfile& agent, double current_test_accuracy, Rng& rng);

double submit_probability(const AgentProfile& agent, double accuracy) noexcept;

struct DepositDecision {
    bool pay = false;
    Amount amount = 0;  // equals `required` when paying
    Amount cap = 0;     // the drawn willingness-to-pay
};

/// Draws a cap ~ Normal(mean, std), clamped below at `min_deposit`, and pays
/// exactly `required` if it fits under the cap.
DepositDecision choose_deposit(const AgentProfile& agent, Amount required, Amount min_deposit, Rng& rng);

enum class IntentKind : std::uint8_t { refund, report, claim_stale };

struct Intent {
    IntentKind kind;
    ContributionId contribution;
    friend bool operator==(const Intent&, const Intent&) = default;
};

/// Refunds, reports and stale claims the agent would attempt right now,
/// oldest contribution first, at most one per contribution.
std::vector<Intent> maintenance_pass(const AccountId& self, const Trainer& trainer, Seconds now);

/// `now` plus an exponential draw with the profile's mean, at least one second later.
Seconds next_wake(const AgentProfile& agent, Seconds now, Rng& rng);

/// Simulation-side state of one agent.
struct AgentState {
    AgentProfile profile;
    std::deque<LabeledSample> queue;      // samples this agent still has to submit
    std::optional<LabeledSample> held;    // skipped or deferred sample, retried first
    Seconds next_wake = 0;
    std::uint64_t submissions = 0;
    std::uint64_t flipped = 0;

    bool has_work() const noexcept { return held.has_value() || !queue.empty(); }
};

}  // namespace dcai

// Copyright 2026 The dcai-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "dcai/agents.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dcai {

std::string_view to_string(SubmitPolicy policy) noexcept {
    switch (policy) {
        case SubmitPolicy::accuracy_gated: return "accuracy-gated";
        case SubmitPolicy::always: return "always";
        case SubmitPolicy::never: return "never";
    }
    return "unknown";
}

SubmitPolicy submit_policy_from_string(std::string_view name) {
    if (name == "accuracy-gated" || name == "accuracy_gated") return SubmitPolicy::accuracy_gated;
    if (name == "always") return SubmitPolicy::always;
    if (name == "never") return SubmitPolicy::never;
    throw std::invalid_argument("unknown submit policy: " + std::string(name));
}

AgentProfile AgentProfile::good() {
    return AgentProfile{.id = "good"};
}

AgentProfile AgentProfile::bad() {
    return AgentProfile{
        .id = "bad",
        .starting_balance = units(10'000),
        .max_deposit_mean = units(100),
        .max_deposit_std = units(3),
        .mean_update_interval = 3600.0,
        .p_incorrect_label = 1.0,
        .submit_policy = SubmitPolicy::always,
    };
}

void AgentProfile::validate() const {
    if (id.empty() || !valid_account_id(id)) throw std::invalid_argument("bad agent id '" + id + "'");
    if (starting_balance < 0) throw std::invalid_argument("starting balance must be non-negative");
    if (max_deposit_mean <= 0) throw std::invalid_argument("max deposit mean must be positive");
    if (max_deposit_std < 0) throw std::invalid_argument("max deposit std must be non-negative");
    if (!(mean_update_interval > 0.0)) throw std::invalid_argument("mean update interval must be positive");
    if (!(p_incorrect_label >= 0.0 && p_incorrect_label <= 1.0))
        throw std::invalid_argument("p_incorrect_label must be in [0, 1]");
    if (!(submit_bonus >= 0.0 && submit_bonus <= 1.0)) throw std::invalid_argument("submit bonus must be in [0, 1]");
}

double submit_probability(const AgentProfile& agent, double accuracy) noexcept {
    switch (agent.submit_policy) {
        case SubmitPolicy::accuracy_gated: return std::clamp(accuracy + agent.submit_bonus, 0.0, 1.0);
        case SubmitPolicy::always: return 1.0;
        case SubmitPolicy::never: return 0.0;
    }
    return 0.0;
}

SubmissionDecision decide_submission(const AgentProfile& agent, double current_test_accuracy, Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double p = submit_probability(agent, current_test_accuracy);
    // Draw even at p == 1 so the stream does not depend on the policy outcome.
    if (!(u(rng) < p)) return {};
    return {true, u(rng) < agent.p_incorrect_label};
}

DepositDecision choose_deposit(const AgentProfile& agent, Amount required, Amount min_deposit, Rng& rng) {
    std::normal_distribution<double> draw(static_cast<double>(agent.max_deposit_mean),
                                          static_cast<double>(agent.max_deposit_std));
    const Amount cap = std::max(min_deposit, static_cast<Amount>(std::llround(draw(rng))));
    if (required <= cap) return {true, required, cap};
    return {false, 0, cap};
}

std::vector<Intent> maintenance_pass(const AccountId& self, const Trainer& trainer, Seconds now) {
    std::vector<Intent> intents;
    const auto* me = trainer.account(self);
    if (!me) return intents;
    const auto& config = trainer.config();

    for (const ContributionId id : trainer.open_contributions()) {
        const auto& c = *trainer.contribution(id);
        const Seconds elapsed = now - c.submitted_at;
        if (elapsed < config.refund_wait) break;  // open set is in submission order
        const bool agrees = predict(trainer.model(), c.sample.features) == c.sample.label;
        const bool mine = c.contributor == self;

        if (mine && agrees && c.reporters_paid.empty()) {
            intents.push_back({IntentKind::refund, id});
        } else if (elapsed >= config.takeover_wait && c.remaining_deposit > 0) {
            intents.push_back({IntentKind::claim_stale, id});
        } else if (!mine && !agrees && me->verified_count > 0 && !c.reporters_paid.contains(self)) {
            intents.push_back({IntentKind::report, id});
        }
    }
    return intents;
}

Seconds next_wake(const AgentProfile& agent, Seconds now, Rng& rng) {
    std::exponential_distribution<double> draw(1.0 / agent.mean_update_interval);
    const auto delay = static_cast<Seconds>(std::llround(draw(rng)));
    return now + std::max<Seconds>(1, delay);
}

}  // namespace dcai

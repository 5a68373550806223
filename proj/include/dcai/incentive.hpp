// Copyright 2026 The dcai-sim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "dcai/core.hpp"
#include "dcai/event_log.hpp"
#include "dcai/models.hpp"

namespace dcai {

struct TrainerConfig {
    Seconds refund_wait = kSecondsPerDay;         // t
    Seconds takeover_wait = 9 * kSecondsPerDay;   // t_a
    Amount deposit_numerator = 15'000'000'000;    // micro-units * seconds
    Amount min_deposit = units(1);

    /// Throws std::invalid_argument unless t_a > t > 0 and both deposit terms are positive.
    void validate() const;

    friend bool operator==(const TrainerConfig&, const TrainerConfig&) = default;
};

struct ContributorAccount {
    AccountId id;
    Amount balance = 0;
    std::uint64_t verified_count = 0;  // successful refunds, n(c)
};

struct DataContribution {
    ContributionId id = 0;
    AccountId contributor;
    LabeledSample sample;
    Amount initial_deposit = 0;
    Amount remaining_deposit = 0;
    Seconds submitted_at = 0;
    bool refunded = false;
    bool closed = false;
    std::set<AccountId> reporters_paid;

    /// Nothing further can be paid out.
    bool resolved() const noexcept { return refunded || closed || remaining_deposit == 0; }
};

/// Self-assessment escrow around a continuously updated model.
///
/// Every call is appended to the event log whether it succeeds or not, and a
/// rejected call leaves the state untouched. Funds are conserved exactly:
/// sum of balances plus sum of remaining deposits never changes after the
/// accounts are opened.
class Trainer {
public:
    /// Deploys a model warm-started on `warm_start_samples` (may be empty for
    /// models that allow it) and logs the deployment so it can be replayed.
    static Trainer deploy(const ModelSpec& spec, const TrainerConfig& config,
                          std::span<const LabeledSample> warm_start_samples, Seconds now = 0);

    Status open_account(const AccountId& id, Amount balance, Seconds now = 0);

    Amount required_deposit(Seconds now) const;

    Result<ContributionId> add_data(const AccountId& contributor, const LabeledSample& sample, Amount offered_deposit,
                                    Seconds now);
    Result<Amount> refund(const AccountId& contributor, ContributionId id, Seconds now);
    Result<Amount> report(const AccountId& reporter, ContributionId id, Seconds now);
    Result<Amount> claim_stale(const AccountId& claimant, ContributionId id, Seconds now);

    /// Records an agent decision that does not touch trainer state (skip or defer).
    void note(EventKind kind, const AccountId& agent, Amount amount, Seconds now, std::string detail = {});

    const Model& model() const noexcept { return model_; }
    const TrainerConfig& config() const noexcept { return config_; }
    const std::map<AccountId, ContributorAccount>& accounts() const noexcept { return accounts_; }
    const ContributorAccount* account(const AccountId& id) const;
    const std::vector<DataContribution>& contributions() const noexcept { return contributions_; }
    const DataContribution* contribution(ContributionId id) const;
    /// Ids of contributions that can still pay out, oldest first.
    const std::set<ContributionId>& open_contributions() const noexcept { return open_; }

    Seconds last_update_time() const noexcept { return last_update_time_; }
    Amount total_escrow() const noexcept { return total_escrow_; }
    Amount total_issued() const noexcept { return total_issued_; }
    std::uint64_t total_verified() const noexcept { return total_verified_; }
    /// Bumped on every model update; lets callers cache evaluations.
    std::uint64_t model_version() const noexcept { return model_version_; }

    /// Full O(n) audit of conservation and escrow bookkeeping.
    bool invariants_hold() const;

    const EventLog& log() const noexcept { return log_; }

private:
    Trainer(Model model, TrainerConfig config, Seconds now);

    Result<Amount> record(EventKind kind, const AccountId& caller, std::optional<ContributionId> id, Result<Amount> r,
                          Seconds now);
    void settle(DataContribution& c);

    Model model_;
    TrainerConfig config_;
    std::map<AccountId, ContributorAccount> accounts_;
    std::vector<DataContribution> contributions_;
    std::set<ContributionId> open_;
    Seconds last_update_time_ = 0;
    Amount total_escrow_ = 0;
    Amount total_issued_ = 0;
    std::uint64_t total_verified_ = 0;
    std::uint64_t model_version_ = 0;
    EventLog log_;
};

/// Rebuilds a trainer from its own event log, re-executing every operation
/// and checking that each produces the recorded status and amount.
/// Throws EventLogError on any divergence.
Trainer replay(const EventLog& log);

/// floor(initial * reporter_verified / total_verified), clamped by remaining. Zero if total is zero.
Amount report_payout(Amount initial_deposit, std::uint64_t reporter_verified, std::uint64_t total_verified,
                     Amount remaining_deposit) noexcept;

}  // namespace dcai

// Copyright 2026 The dcai-sim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dcai/core.hpp"
#include "dcai/features.hpp"

namespace dcai {

enum class EventKind : std::uint8_t {
    deploy,
    warm_start,
    open_account,
    add_data,
    refund,
    report,
    claim_stale,
    skip,   // agent declined to submit
    defer,  // agent found the required deposit above its cap
};

std::string_view to_string(EventKind kind) noexcept;
EventKind event_kind_from_string(std::string_view name);

/// One operation against the trainer, successful or not.
///
/// `amount` is the offered deposit for add_data, the opening balance for
/// open_account and the payout for refund/report/claim_stale.
struct Event {
    std::uint64_t seq = 0;
    Seconds time = 0;
    EventKind kind = EventKind::deploy;
    AccountId caller;
    std::optional<ContributionId> contribution;
    Amount amount = 0;
    Status status = Status::ok;
    std::optional<LabeledSample> sample;
    std::string detail;

    friend bool operator==(const Event&, const Event&) = default;
};

struct EventLogError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class EventLog {
public:
    void append(Event e);
    const std::vector<Event>& events() const noexcept { return events_; }
    std::size_t size() const noexcept { return events_.size(); }

    /// Header: seq,time,kind,caller,contribution,amount,status,label,features,detail
    void write_csv(std::ostream& out) const;
    /// One JSON object per line with the same fields.
    void write_jsonl(std::ostream& out) const;

    static EventLog read_csv(std::istream& in);
    static EventLog read_jsonl(std::istream& in);

private:
    std::vector<Event> events_;
};

/// Account ids end up in CSV cells; reject separators and quotes.
bool valid_account_id(std::string_view id) noexcept;

}  // namespace dcai

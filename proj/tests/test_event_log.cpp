// Copyright 2026 The dcai-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <sstream>

#include "dcai/event_log.hpp"
#include "op_fuzz.hpp"

namespace dcai {
namespace {

EventLog sample_log() {
    EventLog log;
    log.append({0, 0, EventKind::deploy, "trainer", std::nullopt, 0, Status::ok, std::nullopt, "detail"});
    log.append({0, 5, EventKind::open_account, "a", std::nullopt, units(10), Status::ok, std::nullopt, ""});
    log.append({0, 7, EventKind::add_data, "a", 0, units(1), Status::ok,
                LabeledSample(FeatureVector::sparse(6, {{1, 2}, {4, 3}}), 1), ""});
    log.append({0, 8, EventKind::add_data, "a", std::nullopt, 2, Status::deposit_too_low,
                LabeledSample(FeatureVector::dense({1, 0, 2}), 0), ""});
    log.append({0, 9, EventKind::defer, "a", std::nullopt, 3, Status::ok, std::nullopt, "cap=3"});
    return log;
}

TEST(EventLog, AssignsSequenceNumbers) {
    const EventLog log = sample_log();
    for (std::size_t i = 0; i < log.size(); ++i) EXPECT_EQ(log.events()[i].seq, i);
}

TEST(EventLog, CsvRoundTrip) {
    const EventLog log = sample_log();
    std::stringstream s;
    log.write_csv(s);
    EXPECT_EQ(s.str().substr(0, s.str().find('\n')), "seq,time,kind,caller,contribution,amount,status,label,features,detail");
    const EventLog back = EventLog::read_csv(s);
    EXPECT_EQ(back.events(), log.events());
}

TEST(EventLog, JsonlRoundTrip) {
    const EventLog log = sample_log();
    std::stringstream s;
    log.write_jsonl(s);
    const EventLog back = EventLog::read_jsonl(s);
    EXPECT_EQ(back.events(), log.events());
}

TEST(EventLog, RoundTripOfFuzzedTrainerLog) {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        const Trainer t = testing::random_operation_sequence(seed, 150, [](const Trainer&, int) {});
        std::stringstream csv, jsonl;
        t.log().write_csv(csv);
        t.log().write_jsonl(jsonl);
        EXPECT_EQ(EventLog::read_csv(csv).events(), t.log().events());
        EXPECT_EQ(EventLog::read_jsonl(jsonl).events(), t.log().events());
    }
}

TEST(EventLog, RejectsMalformedInput) {
    std::stringstream s;
    sample_log().write_csv(s);
    const std::string good = s.str();
    auto parse = [](const std::string& text) {
        std::istringstream in(text);
        return EventLog::read_csv(in);
    };
    EXPECT_THROW(parse("bad header\n"), EventLogError);
    EXPECT_THROW(parse(""), EventLogError);
    std::string gap = good;
    gap.replace(gap.find("\n1,"), 3, "\n7,");
    EXPECT_THROW(parse(gap), EventLogError);
    std::string kind = good;
    kind.replace(kind.find("open_account"), 12, "open_acc0unt");
    EXPECT_THROW(parse(kind), EventLogError);
    std::string extra = good + "5,1,skip,a,,0,ok,,,x,y\n";
    EXPECT_THROW(parse(extra), EventLogError);
    std::string amount = good;
    amount.replace(amount.find(",10000000,"), 10, ",1e7x,");
    EXPECT_THROW(parse(amount), EventLogError);

    std::istringstream bad_json("{\"seq\": 0, \"kind\": \"nope\"}\n");
    EXPECT_THROW(EventLog::read_jsonl(bad_json), EventLogError);
    std::istringstream not_json("{oops\n");
    EXPECT_THROW(EventLog::read_jsonl(not_json), EventLogError);
}

TEST(EventLog, RejectsUnsafeFields) {
    EventLog log;
    EXPECT_THROW(log.append({0, 0, EventKind::skip, "a,b", std::nullopt, 0, Status::ok, std::nullopt, ""}),
                 EventLogError);
    EXPECT_THROW(log.append({0, 0, EventKind::skip, "a", std::nullopt, 0, Status::ok, std::nullopt, "x,y"}),
                 EventLogError);
    EXPECT_THROW(log.append({0, 0, EventKind::add_data, "a", std::nullopt, 0, Status::ok, std::nullopt, ""}),
                 EventLogError);
    EXPECT_EQ(log.size(), 0u);
}

TEST(EventLog, KindNames) {
    for (auto k : {EventKind::deploy, EventKind::warm_start, EventKind::open_account, EventKind::add_data,
                   EventKind::refund, EventKind::report, EventKind::claim_stale, EventKind::skip, EventKind::defer})
        EXPECT_EQ(event_kind_from_string(to_string(k)), k);
    EXPECT_THROW(event_kind_from_string("x"), EventLogError);
}

TEST(AccountId, Validation) {
    EXPECT_TRUE(valid_account_id("good-agent_1"));
    EXPECT_FALSE(valid_account_id("a,b"));
    EXPECT_FALSE(valid_account_id("a\"b"));
    EXPECT_FALSE(valid_account_id("a\nb"));
}

}  // namespace
}  // namespace dcai

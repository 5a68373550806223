// Copyright 2026 The dcai-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "dcai/event_log.hpp"

#include <array>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <utility>

#include "json.hpp"

namespace dcai {
namespace {

constexpr std::array<std::pair<EventKind, std::string_view>, 9> kKindNames{{
    {EventKind::deploy, "deploy"},
    {EventKind::warm_start, "warm_start"},
    {EventKind::open_account, "open_account"},
    {EventKind::add_data, "add_data"},
    {EventKind::refund, "refund"},
    {EventKind::report, "report"},
    {EventKind::claim_stale, "claim_stale"},
    {EventKind::skip, "skip"},
    {EventKind::defer, "defer"},
}};

constexpr std::string_view kCsvHeader = "seq,time,kind,caller,contribution,amount,status,label,features,detail";

template <typename T>
T parse_int(std::string_view s, const char* what) {
    T v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw EventLogError(std::string("bad ") + what + ": '" + std::string(s) + "'");
    return v;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        out.push_back(line.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

void validate(const Event& e) {
    const bool needs_sample = e.kind == EventKind::add_data || e.kind == EventKind::warm_start;
    if (needs_sample && !e.sample) throw EventLogError("event " + std::to_string(e.seq) + " is missing its sample");
    if (!valid_account_id(e.caller)) throw EventLogError("event " + std::to_string(e.seq) + " has a bad caller id");
    if (e.detail.find_first_of(",\"\r\n") != std::string::npos)
        throw EventLogError("event " + std::to_string(e.seq) + " has a separator in its detail");
}

}  // namespace

std::string_view to_string(EventKind kind) noexcept {
    for (const auto& [k, name] : kKindNames)
        if (k == kind) return name;
    return "unknown";
}

EventKind event_kind_from_string(std::string_view name) {
    for (const auto& [k, n] : kKindNames)
        if (n == name) return k;
    throw EventLogError("unknown event kind: " + std::string(name));
}

bool valid_account_id(std::string_view id) noexcept {
    return id.find_first_of(",\"\n\r") == std::string_view::npos;
}

void EventLog::append(Event e) {
    e.seq = events_.size();
    validate(e);
    events_.push_back(std::move(e));
}

void EventLog::write_csv(std::ostream& out) const {
    out << kCsvHeader << '\n';
    for (const auto& e : events_) {
        out << e.seq << ',' << e.time << ',' << to_string(e.kind) << ',' << e.caller << ',';
        if (e.contribution) out << *e.contribution;
        out << ',' << e.amount << ',' << to_string(e.status) << ',';
        if (e.sample) out << e.sample->label << ',' << e.sample->features.encode();
        else out << ',';
        out << ',' << e.detail << '\n';
    }
}

void EventLog::write_jsonl(std::ostream& out) const {
    for (const auto& e : events_) {
        nlohmann::ordered_json j;
        j["seq"] = e.seq;
        j["time"] = e.time;
        j["kind"] = to_string(e.kind);
        j["caller"] = e.caller;
        j["contribution"] = e.contribution ? nlohmann::ordered_json(*e.contribution) : nlohmann::ordered_json();
        j["amount"] = e.amount;
        j["status"] = to_string(e.status);
        if (e.sample) {
            j["label"] = e.sample->label;
            j["features"] = e.sample->features.encode();
        }
        if (!e.detail.empty()) j["detail"] = e.detail;
        out << j.dump() << '\n';
    }
}

EventLog EventLog::read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) throw EventLogError("missing or unexpected events.csv header");
    EventLog log;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto cells = split(line, ',');
        if (cells.size() != 10) throw EventLogError("line " + std::to_string(line_no) + ": expected 10 columns");
        try {
            Event e;
            e.seq = parse_int<std::uint64_t>(cells[0], "seq");
            e.time = parse_int<Seconds>(cells[1], "time");
            e.kind = event_kind_from_string(cells[2]);
            e.caller = std::string(cells[3]);
            if (!cells[4].empty()) e.contribution = parse_int<ContributionId>(cells[4], "contribution");
            e.amount = parse_int<Amount>(cells[5], "amount");
            e.status = status_from_string(cells[6]);
            if (!cells[7].empty())
                e.sample = LabeledSample(FeatureVector::decode(std::string(cells[8])), parse_int<int>(cells[7], "label"));
            e.detail = std::string(cells[9]);
            if (e.seq != log.size()) throw EventLogError("non-contiguous sequence number");
            log.append(std::move(e));
        } catch (const EventLogError& err) {
            throw EventLogError("line " + std::to_string(line_no) + ": " + err.what());
        } catch (const std::invalid_argument& err) {
            throw EventLogError("line " + std::to_string(line_no) + ": " + err.what());
        }
    }
    return log;
}

EventLog EventLog::read_jsonl(std::istream& in) {
    EventLog log;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            const auto j = nlohmann::json::parse(line);
            Event e;
            e.seq = j.at("seq").get<std::uint64_t>();
            e.time = j.at("time").get<Seconds>();
            e.kind = event_kind_from_string(j.at("kind").get<std::string>());
            e.caller = j.at("caller").get<std::string>();
            if (!j.at("contribution").is_null()) e.contribution = j.at("contribution").get<ContributionId>();
            e.amount = j.at("amount").get<Amount>();
            e.status = status_from_string(j.at("status").get<std::string>());
            if (j.contains("label"))
                e.sample = LabeledSample(FeatureVector::decode(j.at("features").get<std::string>()), j.at("label").get<int>());
            if (j.contains("detail")) e.detail = j.at("detail").get<std::string>();
            if (e.seq != log.size()) throw EventLogError("non-contiguous sequence number");
            log.append(std::move(e));
        } catch (const nlohmann::json::exception& err) {
            throw EventLogError("line " + std::to_string(line_no) + ": " + err.what());
        } catch (const std::invalid_argument& err) {
            throw EventLogError("line " + std::to_string(line_no) + ": " + err.what());
        }
    }
    return log;
}

}  // namespace dcai

// Copyright 2026 The dcai-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "dcai/incentive.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <stdexcept>
#include <string>

namespace dcai {
namespace {

std::string format_double(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::string deployment_detail(const ModelSpec& spec, const TrainerConfig& config) {
    std::string out;
    out += "kind=" + std::string(to_string(spec.kind));
    out += ";layout=" + std::string(to_string(spec.layout));
    out += ";dimension=" + std::to_string(spec.dimension);
    out += ";learning_rate=" + format_double(spec.learning_rate);
    out += ";smoothing=" + format_double(spec.smoothing);
    out += ";refund_wait=" + std::to_string(config.refund_wait);
    out += ";takeover_wait=" + std::to_string(config.takeover_wait);
    out += ";deposit_numerator=" + std::to_string(config.deposit_numerator);
    out += ";min_deposit=" + std::to_string(config.min_deposit);
    return out;
}

std::pair<ModelSpec, TrainerConfig> parse_deployment(const std::string& detail) {
    std::map<std::string, std::string> kv;
    std::size_t start = 0;
    while (start <= detail.size()) {
        auto end = detail.find(';', start);
        if (end == std::string::npos) end = detail.size();
        const auto item = detail.substr(start, end - start);
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw EventLogError("bad deploy detail: " + detail);
        kv[item.substr(0, eq)] = item.substr(eq + 1);
        start = end + 1;
    }
    auto get = [&](const char* key) -> const std::string& {
        const auto it = kv.find(key);
        if (it == kv.end()) throw EventLogError(std::string("deploy detail lacks ") + key);
        return it->second;
    };
    try {
        ModelSpec spec;
        spec.kind = model_kind_from_string(get("kind"));
        spec.layout = layout_from_string(get("layout"));
        spec.dimension = std::stoull(get("dimension"));
        spec.learning_rate = std::stod(get("learning_rate"));
        spec.smoothing = std::stod(get("smoothing"));
        TrainerConfig config;
        config.refund_wait = std::stoll(get("refund_wait"));
        config.takeover_wait = std::stoll(get("takeover_wait"));
        config.deposit_numerator = std::stoll(get("deposit_numerator"));
        config.min_deposit = std::stoll(get("min_deposit"));
        return {spec, config};
    } catch (const std::logic_error& e) {
        throw EventLogError(std::string("bad deploy detail: ") + e.what());
    }
}

}  // namespace

void TrainerConfig::validate() const {
    if (refund_wait <= 0) throw std::invalid_argument("refund wait must be positive");
    if (takeover_wait <= refund_wait) throw std::invalid_argument("takeover wait must exceed refund wait");
    if (deposit_numerator <= 0) throw std::invalid_argument("deposit numerator must be positive");
    if (min_deposit <= 0) throw std::invalid_argument("minimum deposit must be positive");
}

Amount report_payout(Amount initial_deposit, std::uint64_t reporter_verified, std::uint64_t total_verified,
                     Amount remaining_deposit) noexcept {
    if (total_verified == 0) return 0;
    const auto share = static_cast<__int128>(initial_deposit) * static_cast<__int128>(reporter_verified) /
                       static_cast<__int128>(total_verified);
    return static_cast<Amount>(std::min<__int128>(share, remaining_deposit));
}

Trainer::Trainer(Model model, TrainerConfig config, Seconds now)
    : model_(std::move(model)), config_(config), last_update_time_(now) {}

Trainer Trainer::deploy(const ModelSpec& spec, const TrainerConfig& config,
                        std::span<const LabeledSample> warm_start_samples, Seconds now) {
    config.validate();
    ModelSpec s = spec;
    if (s.dimension == 0 && !warm_start_samples.empty()) s.dimension = warm_start_samples.front().features.dimension();
    Model model = warm_start_samples.empty() ? make_model(s) : warm_start(s, warm_start_samples);
    Trainer t(std::move(model), config, now);
    t.log_.append(Event{.time = now, .kind = EventKind::deploy, .detail = deployment_detail(spec_of(t.model_), config)});
    for (const auto& sample : warm_start_samples)
        t.log_.append(Event{.time = now, .kind = EventKind::warm_start, .sample = sample});
    return t;
}

const ContributorAccount* Trainer::account(const AccountId& id) const {
    const auto it = accounts_.find(id);
    return it == accounts_.end() ? nullptr : &it->second;
}

const DataContribution* Trainer::contribution(ContributionId id) const {
    return id < contributions_.size() ? &contributions_[id] : nullptr;
}

Status Trainer::open_account(const AccountId& id, Amount balance, Seconds now) {
    Status status = Status::ok;
    if (!valid_account_id(id) || id.empty()) status = Status::unknown_account;
    else if (accounts_.contains(id)) status = Status::duplicate_account;
    else if (balance < 0) status = Status::invalid_amount;
    if (status == Status::ok) {
        accounts_.emplace(id, ContributorAccount{id, balance, 0});
        total_issued_ += balance;
    }
    log_.append(Event{.time = now, .kind = EventKind::open_account, .caller = valid_account_id(id) ? id : AccountId{},
                      .amount = balance, .status = status});
    return status;
}

Amount Trainer::required_deposit(Seconds now) const {
    const Seconds elapsed = std::max<Seconds>(1, now - last_update_time_);
    return std::max(config_.min_deposit, config_.deposit_numerator / elapsed);
}

Result<ContributionId> Trainer::add_data(const AccountId& contributor, const LabeledSample& sample,
                                         Amount offered_deposit, Seconds now) {
    auto fail = [&](Status s) {
        log_.append(Event{.time = now, .kind = EventKind::add_data, .caller = contributor,
                          .amount = offered_deposit, .status = s, .sample = sample});
        return Result<ContributionId>::failure(s);
    };
    const auto it = accounts_.find(contributor);
    if (it == accounts_.end()) return fail(Status::unknown_account);
    if (sample.features.dimension() != dimension(model_)) return fail(Status::invalid_sample);
    if (offered_deposit <= 0) return fail(Status::invalid_amount);
    if (now < last_update_time_) return fail(Status::time_regression);
    if (offered_deposit < required_deposit(now)) return fail(Status::deposit_too_low);
    if (it->second.balance < offered_deposit) return fail(Status::insufficient_balance);

    it->second.balance -= offered_deposit;
    const ContributionId id = contributions_.size();
    contributions_.push_back(DataContribution{
        .id = id,
        .contributor = contributor,
        .sample = sample,
        .initial_deposit = offered_deposit,
        .remaining_deposit = offered_deposit,
        .submitted_at = now,
    });
    open_.insert(id);
    total_escrow_ += offered_deposit;
    if (update(model_, sample)) ++model_version_;
    last_update_time_ = now;

    log_.append(Event{.time = now, .kind = EventKind::add_data, .caller = contributor, .contribution = id,
                      .amount = offered_deposit, .status = Status::ok, .sample = sample});
    return {Status::ok, id};
}

Result<Amount> Trainer::record(EventKind kind, const AccountId& caller, std::optional<ContributionId> id,
                               Result<Amount> r, Seconds now) {
    log_.append(Event{.time = now, .kind = kind, .caller = caller, .contribution = id, .amount = r.value,
                      .status = r.status});
    return r;
}

void Trainer::settle(DataContribution& c) {
    if (c.resolved()) open_.erase(c.id);
}

Result<Amount> Trainer::refund(const AccountId& contributor, ContributionId id, Seconds now) {
    auto result = [&]() -> Result<Amount> {
        if (id >= contributions_.size()) return Result<Amount>::failure(Status::unknown_contribution);
        const auto acct = accounts_.find(contributor);
        if (acct == accounts_.end()) return Result<Amount>::failure(Status::unknown_account);
        auto& c = contributions_[id];
        if (c.contributor != contributor) return Result<Amount>::failure(Status::wrong_caller);
        if (c.refunded) return Result<Amount>::failure(Status::already_refunded);
        if (c.closed) return Result<Amount>::failure(Status::already_closed);
        if (now - c.submitted_at < config_.refund_wait) return Result<Amount>::failure(Status::too_early);
        if (!c.reporters_paid.empty()) return Result<Amount>::failure(Status::reporter_already_paid);
        if (c.remaining_deposit == 0) return Result<Amount>::failure(Status::zero_remaining);
        if (predict(model_, c.sample.features) != c.sample.label)
            return Result<Amount>::failure(Status::model_disagrees);

        const Amount paid = c.remaining_deposit;
        acct->second.balance += paid;
        ++acct->second.verified_count;
        ++total_verified_;
        c.remaining_deposit = 0;
        c.refunded = true;
        total_escrow_ -= paid;
        settle(c);
        return {Status::ok, paid};
    }();
    return record(EventKind::refund, contributor, id, result, now);
}

Result<Amount> Trainer::report(const AccountId& reporter, ContributionId id, Seconds now) {
    auto result = [&]() -> Result<Amount> {
        if (id >= contributions_.size()) return Result<Amount>::failure(Status::unknown_contribution);
        const auto acct = accounts_.find(reporter);
        if (acct == accounts_.end()) return Result<Amount>::failure(Status::unknown_account);
        auto& c = contributions_[id];
        if (c.contributor == reporter) return Result<Amount>::failure(Status::self_report);
        if (c.refunded) return Result<Amount>::failure(Status::already_refunded);
        if (c.closed) return Result<Amount>::failure(Status::already_closed);
        if (now - c.submitted_at < config_.refund_wait) return Result<Amount>::failure(Status::too_early);
        if (acct->second.verified_count == 0) return Result<Amount>::failure(Status::unverified_reporter);
        if (c.reporters_paid.contains(reporter)) return Result<Amount>::failure(Status::already_reported);
        if (c.remaining_deposit == 0) return Result<Amount>::failure(Status::zero_remaining);
        if (predict(model_, c.sample.features) == c.sample.label)
            return Result<Amount>::failure(Status::model_agrees);

        const Amount take =
            report_payout(c.initial_deposit, acct->second.verified_count, total_verified_, c.remaining_deposit);
        acct->second.balance += take;
        c.remaining_deposit -= take;
        c.reporters_paid.insert(reporter);
        total_escrow_ -= take;
        settle(c);
        return {Status::ok, take};
    }();
    return record(EventKind::report, reporter, id, result, now);
}

Result<Amount> Trainer::claim_stale(const AccountId& claimant, ContributionId id, Seconds now) {
    auto result = [&]() -> Result<Amount> {
        if (id >= contributions_.size()) return Result<Amount>::failure(Status::unknown_contribution);
        const auto acct = accounts_.find(claimant);
        if (acct == accounts_.end()) return Result<Amount>::failure(Status::unknown_account);
        auto& c = contributions_[id];
        // Refunded and closed contributions always hold zero.
        if (c.remaining_deposit == 0) return Result<Amount>::failure(Status::zero_remaining);
        if (now - c.submitted_at < config_.takeover_wait) return Result<Amount>::failure(Status::too_early);

        const Amount take = c.remaining_deposit;
        acct->second.balance += take;
        c.remaining_deposit = 0;
        c.closed = true;
        total_escrow_ -= take;
        settle(c);
        return {Status::ok, take};
    }();
    return record(EventKind::claim_stale, claimant, id, result, now);
}

void Trainer::note(EventKind kind, const AccountId& agent, Amount amount, Seconds now, std::string detail) {
    if (kind != EventKind::skip && kind != EventKind::defer)
        throw std::invalid_argument("only skip and defer decisions can be noted");
    log_.append(Event{.time = now, .kind = kind, .caller = agent, .amount = amount, .detail = std::move(detail)});
}

bool Trainer::invariants_hold() const {
    Amount balances = 0;
    std::uint64_t verified = 0;
    for (const auto& [id, a] : accounts_) {
        if (a.balance < 0) return false;
        balances += a.balance;
        verified += a.verified_count;
    }
    Amount escrow = 0;
    for (const auto& c : contributions_) {
        if (c.remaining_deposit < 0 || c.remaining_deposit > c.initial_deposit) return false;
        if (c.refunded && (c.remaining_deposit != 0 || !c.reporters_paid.empty())) return false;
        if (c.closed && c.remaining_deposit != 0) return false;
        if (c.resolved() == open_.contains(c.id)) return false;
        escrow += c.remaining_deposit;
    }
    return escrow == total_escrow_ && balances + escrow == total_issued_ && verified == total_verified_;
}

Trainer replay(const EventLog& log) {
    const auto& events = log.events();
    if (events.empty() || events.front().kind != EventKind::deploy)
        throw EventLogError("event log must start with a deploy record");
    const auto [spec, config] = parse_deployment(events.front().detail);

    std::vector<LabeledSample> warm;
    std::size_t i = 1;
    for (; i < events.size() && events[i].kind == EventKind::warm_start; ++i) {
        if (!events[i].sample) throw EventLogError("warm_start record without a sample");
        warm.push_back(*events[i].sample);
    }

    Trainer t = [&] {
        try {
            return Trainer::deploy(spec, config, warm, events.front().time);
        } catch (const std::invalid_argument& e) {
            throw EventLogError(std::string("cannot redeploy: ") + e.what());
        }
    }();

    auto diverged = [](const Event& e, const std::string& what) {
        return EventLogError("replay diverged at event " + std::to_string(e.seq) + " (" +
                             std::string(to_string(e.kind)) + "): " + what);
    };

    for (; i < events.size(); ++i) {
        const Event& e = events[i];
        switch (e.kind) {
            case EventKind::deploy:
            case EventKind::warm_start: throw diverged(e, "deployment records must precede operations");
            case EventKind::open_account: {
                if (t.open_account(e.caller, e.amount, e.time) != e.status) throw diverged(e, "status");
                break;
            }
            case EventKind::add_data: {
                if (!e.sample) throw diverged(e, "missing sample");
                const auto r = t.add_data(e.caller, *e.sample, e.amount, e.time);
                if (r.status != e.status) throw diverged(e, "status");
                if (r.ok() && e.contribution != r.value) throw diverged(e, "contribution id");
                break;
            }
            case EventKind::refund:
            case EventKind::report:
            case EventKind::claim_stale: {
                if (!e.contribution) throw diverged(e, "missing contribution id");
                const auto r = e.kind == EventKind::refund   ? t.refund(e.caller, *e.contribution, e.time)
                               : e.kind == EventKind::report ? t.report(e.caller, *e.contribution, e.time)
                                                             : t.claim_stale(e.caller, *e.contribution, e.time);
                if (r.status != e.status) throw diverged(e, "status");
                if (r.value != e.amount) throw diverged(e, "amount");
                break;
            }
            case EventKind::skip:
            case EventKind::defer: t.note(e.kind, e.caller, e.amount, e.time, e.detail); break;
        }
    }
    if (t.log().events() != events) throw EventLogError("replayed log differs from the recorded log");
    return t;
}

}  // namespace dcai

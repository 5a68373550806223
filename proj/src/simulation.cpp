// Copyright 2026 The dcai-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "dcai/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "dcai/checkpoint.hpp"
#include "json.hpp"

namespace dcai {

std::string_view to_string(DatasetSourceKind kind) noexcept {
    switch (kind) {
        case DatasetSourceKind::synthetic: return "synthetic";
        case DatasetSourceKind::numeric_csv: return "numeric-csv";
        case DatasetSourceKind::text_csv: return "text-csv";
    }
    return "unknown";
}

DatasetSourceKind dataset_source_from_string(std::string_view name) {
    std::string s(name);
    std::replace(s.begin(), s.end(), '_', '-');
    if (s == "synthetic") return DatasetSourceKind::synthetic;
    if (s == "numeric-csv") return DatasetSourceKind::numeric_csv;
    if (s == "text-csv") return DatasetSourceKind::text_csv;
    throw std::invalid_argument("unknown dataset source: " + s);
}

std::string_view to_string(Assignment a) noexcept {
    switch (a) {
        case Assignment::alternate: return "alternate";
        case Assignment::shared_stream: return "shared-stream";
    }
    return "unknown";
}

Assignment assignment_from_string(std::string_view name) {
    std::string s(name);
    std::replace(s.begin(), s.end(), '_', '-');
    if (s == "alternate") return Assignment::alternate;
    if (s == "shared-stream") return Assignment::shared_stream;
    throw std::invalid_argument("unknown assignment: " + s);
}

Dataset load_dataset(const DatasetSource& source, std::uint64_t fallback_seed) {
    switch (source.kind) {
        case DatasetSourceKind::synthetic:
            return synth_generate(source.synth, source.n, source.dimension, source.seed.value_or(fallback_seed));
        case DatasetSourceKind::numeric_csv: return load_numeric_csv(source.path, source.layout);
        case DatasetSourceKind::text_csv:
            return featurize(load_text_csv(source.path), source.text_features, source.vocabulary);
    }
    throw std::invalid_argument("unknown dataset source");
}

void SimulationConfig::validate() const {
    trainer.validate();
    good.validate();
    bad.validate();
    if (good.id == bad.id) throw std::invalid_argument("agent ids must differ");
    if (metrics_interval <= 0) throw std::invalid_argument("metrics_interval must be positive");
    if (horizon <= 0) throw std::invalid_argument("horizon must be positive");
    if (!(warm_fraction > 0.0 && warm_fraction < 1.0)) throw std::invalid_argument("warm_fraction must be in (0, 1)");
    if (!(learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be positive");
    if (!(smoothing > 0.0)) throw std::invalid_argument("smoothing must be positive");
    if ((dataset.kind == DatasetSourceKind::numeric_csv || dataset.kind == DatasetSourceKind::text_csv) &&
        dataset.path.empty())
        throw std::invalid_argument("dataset path is required for CSV sources");
    if (dataset.kind == DatasetSourceKind::text_csv && dataset.vocabulary == 0)
        throw std::invalid_argument("vocabulary must be positive");
}

ModelSpec SimulationConfig::model_spec(const Dataset& data) const {
    return ModelSpec{.kind = model,
                     .layout = layout.value_or(data.layout),
                     .dimension = data.dimension,
                     .learning_rate = learning_rate,
                     .smoothing = smoothing};
}

Amount SimulationResult::final_balance(const AccountId& agent) const {
    const auto* a = trainer.account(agent);
    if (!a) throw std::invalid_argument("unknown agent: " + agent);
    return a->balance;
}

double baseline_accuracy(const ModelSpec& spec, std::span<const LabeledSample> train,
                         std::span<const LabeledSample> test) {
    return evaluate(warm_start(spec, train), test);
}

namespace {

struct Wake {
    Seconds time;
    std::size_t agent;
    bool operator>(const Wake& o) const noexcept { return std::tie(time, agent) > std::tie(o.time, o.agent); }
};

class Driver {
public:
    Driver(const SimulationConfig& config, const Dataset& data, SimulationResult& out)
        : config_(config), data_(data), out_(out) {}

    void run() {
        Trainer& trainer = out_.trainer;
        agents_ = {AgentState{.profile = config_.good}, AgentState{.profile = config_.bad}};
        for (std::size_t i = 0; i < agents_.size(); ++i) {
            std::seed_seq seq{config_.seed, static_cast<std::uint64_t>(i + 1)};
            rngs_.emplace_back(seq);
            check(trainer.open_account(agents_[i].profile.id, agents_[i].profile.starting_balance, 0) == Status::ok);
            out_.metrics.agents.push_back(agents_[i].profile.id);
        }

        const auto rest = std::span(data_.train).subspan(out_.warm_start_count);
        if (config_.assignment == Assignment::alternate) {
            for (std::size_t i = 0; i < rest.size(); ++i) agents_[i % agents_.size()].queue.push_back(rest[i]);
        } else {
            shared_.assign(rest.begin(), rest.end());
        }

        std::priority_queue<Wake, std::vector<Wake>, std::greater<>> wakes;
        for (std::size_t i = 0; i < agents_.size(); ++i) wakes.push({next_wake(agents_[i].profile, 0, rngs_[i]), i});

        Seconds now = 0;
        while (!finished()) {
            const Wake w = wakes.top();
            if (w.time > config_.horizon) {
                now = config_.horizon;
                out_.hit_horizon = true;
                break;
            }
            wakes.pop();
            sample_until(w.time - 1);
            now = w.time;
            act(w.agent, now);
            wakes.push({next_wake(agents_[w.agent].profile, now, rngs_[w.agent]), w.agent});
        }
        out_.end_time = now;
        const Seconds interval = config_.metrics_interval;
        sample_until(((now + interval - 1) / interval) * interval);
    }

private:
    bool has_work(const AgentState& a) const { return a.has_work() || (!a.held && !shared_.empty()); }

    bool finished() const {
        const bool work = std::any_of(agents_.begin(), agents_.end(), [&](const auto& a) { return has_work(a); });
        return !work && out_.trainer.open_contributions().empty();
    }

    void check(bool ok) {
        if (!ok) out_.invariants_ok = false;
    }

    double accuracy() {
        const Trainer& t = out_.trainer;
        if (!cached_version_ || *cached_version_ != t.model_version()) {
            cached_accuracy_ = evaluate(t.model(), data_.test);
            cached_version_ = t.model_version();
        }
        return cached_accuracy_;
    }

    void sample_until(Seconds t) {
        while (next_sample_ <= t) {
            MetricsSample s{.time = next_sample_, .accuracy = accuracy(), .counts = counts_};
            for (const auto& a : agents_) s.balances.push_back(out_.trainer.account(a.profile.id)->balance);
            out_.metrics.samples.push_back(std::move(s));
            next_sample_ += config_.metrics_interval;
        }
    }

    void act(std::size_t index, Seconds now) {
        Trainer& trainer = out_.trainer;
        AgentState& agent = agents_[index];
        Rng& rng = rngs_[index];
        const AccountId& id = agent.profile.id;

        for (const Intent& intent : maintenance_pass(id, trainer, now)) {
            switch (intent.kind) {
                case IntentKind::refund:
                    if (trainer.refund(id, intent.contribution, now)) ++counts_.refunds;
                    break;
                case IntentKind::report:
                    if (trainer.report(id, intent.contribution, now)) ++counts_.reports;
                    break;
                case IntentKind::claim_stale:
                    if (trainer.claim_stale(id, intent.contribution, now)) ++counts_.stale_claims;
                    break;
            }
            check(trainer.invariants_hold());
        }

        if (!has_work(agent)) return;
        LabeledSample sample;
        if (agent.held) {
            sample = std::move(*agent.held);
            agent.held.reset();
        } else if (!agent.queue.empty()) {
            sample = std::move(agent.queue.front());
            agent.queue.pop_front();
        } else {
            sample = std::move(shared_.front());
            shared_.pop_front();
        }

        const Amount required = trainer.required_deposit(now);
        const SubmissionDecision decision = decide_submission(agent.profile, accuracy(), rng);
        if (!decision.submit) {
            trainer.note(EventKind::skip, id, 0, now);
            agent.held = std::move(sample);
            return;
        }
        const DepositDecision deposit = choose_deposit(agent.profile, required, trainer.config().min_deposit, rng);
        if (!deposit.pay) {
            trainer.note(EventKind::defer, id, required, now, "cap=" + std::to_string(deposit.cap));
            agent.held = std::move(sample);
            return;
        }
        if (trainer.account(id)->balance < required) {
            trainer.note(EventKind::defer, id, required, now, "balance");
            agent.held = std::move(sample);
            return;
        }
        LabeledSample submitted = sample;
        if (decision.flip_label) submitted.label = 1 - submitted.label;
        if (trainer.add_data(id, submitted, deposit.amount, now)) {
            ++counts_.updates;
            ++agent.submissions;
            if (decision.flip_label) ++agent.flipped;
        } else {
            check(false);
            agent.held = std::move(sample);
        }
        check(trainer.invariants_hold());
    }

    const SimulationConfig& config_;
    const Dataset& data_;
    SimulationResult& out_;
    std::vector<AgentState> agents_;
    std::vector<Rng> rngs_;
    std::deque<LabeledSample> shared_;
    ActivityCounts counts_;
    Seconds next_sample_ = 0;
    std::optional<std::uint64_t> cached_version_;
    double cached_accuracy_ = 0.0;
};

std::size_t warm_count(const SimulationConfig& config, std::size_t train_size) {
    const auto n = static_cast<std::size_t>(std::floor(config.warm_fraction * static_cast<double>(train_size)));
    return std::max<std::size_t>(1, n);
}

}  // namespace

SimulationResult run(const SimulationConfig& config) {
    config.validate();
    return run(config, load_dataset(config.dataset, config.seed));
}

SimulationResult run(const SimulationConfig& config, const Dataset& data) {
    config.validate();
    if (data.train.empty() || data.test.empty()) throw std::invalid_argument("dataset needs train and test samples");
    const std::size_t warm = warm_count(config, data.train.size());
    const auto warm_slice = std::span(data.train).first(warm);
    const bool has0 = std::any_of(warm_slice.begin(), warm_slice.end(), [](const auto& s) { return s.label == 0; });
    const bool has1 = std::any_of(warm_slice.begin(), warm_slice.end(), [](const auto& s) { return s.label == 1; });
    if (!has0 || !has1) throw std::invalid_argument("warm-start slice must contain both classes");

    const ModelSpec spec = config.model_spec(data);
    SimulationResult result{.config = config, .trainer = Trainer::deploy(spec, config.trainer, warm_slice, 0)};
    result.warm_start_count = warm;
    result.train_count = data.train.size();
    result.test_count = data.test.size();
    result.warm_start_accuracy = evaluate(result.trainer.model(), data.test);
    result.metrics.baseline_accuracy = baseline_accuracy(spec, data.train, data.test);
    Driver(config, data, result).run();
    return result;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.close();
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw std::runtime_error("cannot rename into " + path.string());
    }
}

namespace {

constexpr std::string_view kPlotScript = R"py(#!/usr/bin/env python3
"""Balance and accuracy plots for one simulation run."""
import csv
import os
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

HERE = os.path.dirname(os.path.abspath(__file__))


def read(name):
    with open(os.path.join(HERE, name), newline="") as f:
        return list(csv.DictReader(f))


def main():
    balances = read("balances.csv")
    accuracy = read("accuracy.csv")
    agents = [k for k in balances[0].keys() if k != "time"]
    fig, (top, bottom) = plt.subplots(2, 1, figsize=(8, 7), sharex=True)
    days = [int(r["time"]) / 86400 for r in balances]
    for agent in agents:
        top.plot(days, [int(r[agent]) / 1e6 for r in balances], label=agent)
    top.set_ylabel("Balance")
    top.legend()
    days = [int(r["time"]) / 86400 for r in accuracy]
    bottom.plot(days, [float(r["accuracy"]) * 100 for r in accuracy], label="model")
    bottom.axhline(float(accuracy[0]["baseline"]) * 100, color="gray", linestyle="--", label="baseline")
    bottom.set_ylabel("Accuracy (%)")
    bottom.set_xlabel("Time (days)")
    bottom.legend()
    fig.tight_layout()
    out = sys.argv[1] if len(sys.argv) > 1 else os.path.join(HERE, "plot.png")
    fig.savefig(out, dpi=120)


if __name__ == "__main__":
    main()
)py";

std::string fixed(double v) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(6) << v;
    return s.str();
}

}  // namespace

void export_run(const SimulationResult& result, const std::filesystem::path& directory) {
    std::error_code ec;
    std::filesystem::create_directories(directory, ec);
    if (ec || !std::filesystem::is_directory(directory))
        throw std::runtime_error("cannot create output directory " + directory.string());
    const auto& m = result.metrics;

    std::ostringstream balances, accuracy, activity;
    balances << "time";
    for (const auto& a : m.agents) balances << ',' << a;
    balances << '\n';
    accuracy << "time,accuracy,baseline\n";
    activity << "time,updates,refunds,reports,stale_claims\n";
    for (const auto& s : m.samples) {
        balances << s.time;
        for (Amount b : s.balances) balances << ',' << b;
        balances << '\n';
        accuracy << s.time << ',' << fixed(s.accuracy) << ',' << fixed(m.baseline_accuracy) << '\n';
        activity << s.time << ',' << s.counts.updates << ',' << s.counts.refunds << ',' << s.counts.reports << ','
                 << s.counts.stale_claims << '\n';
    }

    std::ostringstream events_csv, events_jsonl;
    result.trainer.log().write_csv(events_csv);
    result.trainer.log().write_jsonl(events_jsonl);

    const auto& cfg = result.config;
    const ModelSpec spec = spec_of(result.trainer.model());
    nlohmann::ordered_json summary;
    summary["seed"] = cfg.seed;
    summary["model"] = std::string(to_string(spec.kind));
    summary["layout"] = std::string(to_string(spec.layout));
    summary["dimension"] = spec.dimension;
    summary["assignment"] = std::string(to_string(cfg.assignment));
    summary["train_samples"] = result.train_count;
    summary["test_samples"] = result.test_count;
    summary["warm_start_samples"] = result.warm_start_count;
    summary["warm_start_accuracy"] = result.warm_start_accuracy;
    summary["baseline_accuracy"] = m.baseline_accuracy;
    summary["final_accuracy"] = result.final_accuracy();
    summary["end_time"] = result.end_time;
    summary["hit_horizon"] = result.hit_horizon;
    summary["invariants_ok"] = result.invariants_ok;
    summary["events"] = result.trainer.log().size();
    const auto& last = m.samples.back();
    summary["counts"] = {{"updates", last.counts.updates},
                         {"refunds", last.counts.refunds},
                         {"reports", last.counts.reports},
                         {"stale_claims", last.counts.stale_claims}};
    auto& balances_json = summary["final_balances"] = nlohmann::ordered_json::object();
    for (const auto& a : m.agents) balances_json[a] = result.final_balance(a);
    summary["total_escrow"] = result.trainer.total_escrow();

    const ModelCheckpoint checkpoint = snapshot(result.trainer.model());

    write_file_atomic(directory / "balances.csv", balances.str());
    write_file_atomic(directory / "accuracy.csv", accuracy.str());
    write_file_atomic(directory / "activity.csv", activity.str());
    write_file_atomic(directory / "events.csv", events_csv.str());
    write_file_atomic(directory / "events.jsonl", events_jsonl.str());
    write_file_atomic(directory / "summary.json", summary.dump(2) + "\n");
    write_file_atomic(directory / "checkpoint.bin",
                      std::string_view(reinterpret_cast<const char*>(checkpoint.data()), checkpoint.size()));
    write_file_atomic(directory / "model.json", to_text(result.trainer.model()));
    write_file_atomic(directory / "plot.py", kPlotScript);
}

std::vector<SweepRow> sweep(const SimulationConfig& config, std::span<const std::uint64_t> seeds, unsigned threads) {
    config.validate();
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, seeds.size())));

    std::vector<SweepRow> rows(seeds.size());
    std::vector<std::exception_ptr> errors(seeds.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < seeds.size(); i = next++) {
            try {
                SimulationConfig c = config;
                c.seed = seeds[i];
                const SimulationResult r = run(c);
                SweepRow row{.seed = seeds[i],
                             .baseline_accuracy = r.metrics.baseline_accuracy,
                             .final_accuracy = r.final_accuracy(),
                             .counts = r.metrics.samples.back().counts,
                             .invariants_ok = r.invariants_ok};
                for (const auto& a : r.metrics.agents) row.final_balances.push_back(r.final_balance(a));
                rows[i] = std::move(row);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    pool.clear();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return rows;
}

}  // namespace dcai

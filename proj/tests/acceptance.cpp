// Copyright 2026 The dcai-sim Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite: one PASS/FAIL line per criterion, exit code 1 on any failure.

#include <boost/multiprecision/cpp_int.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "dcai/checkpoint.hpp"
#include "dcai/config.hpp"
#include "dcai/gascost.hpp"
#include "dcai/simulation.hpp"
#include "helpers.hpp"
#include "nb_oracle.hpp"
#include "op_fuzz.hpp"

namespace {

using namespace dcai;
namespace fs = std::filesystem;

struct Verdict {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok && pass) detail = what;
        pass = pass && ok;
    }
};

int failures = 0;

void report(int number, const std::string& name, double limit_seconds, const std::function<Verdict()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
        v = body();
    } catch (const std::exception& e) {
        v.pass = false;
        v.detail = std::string("exception: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (limit_seconds > 0 && seconds >= limit_seconds) {
        v.require(false, "runtime over " + std::to_string(limit_seconds) + " s");
        v.pass = false;
    }
    std::printf("%s %d %s (%.2f s)%s%s\n", v.pass ? "PASS" : "FAIL", number, name.c_str(), seconds,
                v.detail.empty() ? "" : ": ", v.detail.c_str());
    std::fflush(stdout);
    failures += !v.pass;
}

const ModelKind kKinds[] = {ModelKind::perceptron, ModelKind::naive_bayes, ModelKind::nearest_centroid};
const std::uint64_t kSeeds[] = {1, 2, 3};

struct RunSet {
    std::vector<SimulationResult> runs;  // kind-major, seed-minor
};

RunSet& runs() {
    static RunSet set;
    return set;
}

SimulationConfig run_config(ModelKind kind, std::uint64_t seed) {
    SimulationConfig c;
    c.model = kind;
    c.seed = seed;
    c.dataset.kind = DatasetSourceKind::synthetic;
    c.dataset.synth = SynthKind::separable;
    c.dataset.n = 2000;
    c.dataset.dimension = 9;
    return c;
}

std::string short_name(ModelKind k) {
    switch (k) {
        case ModelKind::perceptron: return "perceptron";
        case ModelKind::naive_bayes: return "nb";
        case ModelKind::nearest_centroid: return "ncc";
    }
    return "?";
}

Verdict conservation() {
    Verdict v;
    std::size_t steps = 0;
    for (std::uint64_t seq = 1; seq <= 100; ++seq) {
        Amount issued = -1;
        bool ok = true;
        testing::random_operation_sequence(seq * 7919, 1000, [&](const Trainer& t, int) {
            if (issued < 0) issued = t.total_issued();
            ok = ok && testing::funds_in_system(t) == issued && t.total_issued() == issued;
            ++steps;
        });
        v.require(ok, "conservation broken in sequence " + std::to_string(seq));
    }
    v.detail = v.pass ? std::to_string(steps) + " steps checked" : v.detail;
    return v;
}

Verdict balances() {
    Verdict v;
    std::ostringstream d;
    for (auto kind : kKinds)
        for (auto seed : kSeeds) {
            SimulationResult r = run(run_config(kind, seed));
            const Amount good = r.final_balance("good"), bad = r.final_balance("bad");
            d << short_name(kind) << '/' << seed << " good " << format_units(good) << " bad " << format_units(bad)
              << "; ";
            v.require(r.invariants_ok, short_name(kind) + " seed " + std::to_string(seed) + ": invariant failure");
            v.require(good > units(10'000) && units(10'000) > bad,
                      short_name(kind) + " seed " + std::to_string(seed) + ": good " + format_units(good) + " bad " +
                          format_units(bad));
            runs().runs.push_back(std::move(r));
        }
    if (v.pass) v.detail = d.str();
    return v;
}

Verdict accuracy() {
    Verdict v;
    if (runs().runs.empty()) return {false, "no runs from criterion 2"};
    std::ostringstream d;
    d.setf(std::ios::fixed);
    d.precision(3);
    for (const auto& r : runs().runs) {
        const auto kind = r.config.model;
        const double acc = r.final_accuracy(), base = r.metrics.baseline_accuracy;
        d << short_name(kind) << '/' << r.config.seed << ' ' << acc << " vs " << base << "; ";
        const std::string id = short_name(kind) + " seed " + std::to_string(r.config.seed);
        if (kind == ModelKind::perceptron) v.require(acc > 0.5, id + ": accuracy " + std::to_string(acc));
        else v.require(std::abs(acc - base) <= 0.05, id + ": accuracy " + std::to_string(acc) + " baseline " +
                                                         std::to_string(base));
    }
    if (v.pass) v.detail = d.str();
    return v;
}

Verdict stale_claims() {
    Verdict v;
    if (runs().runs.empty()) return {false, "no runs from criterion 2"};
    std::map<std::string, std::size_t> per_model;
    std::size_t total = 0;
    for (const auto& r : runs().runs) {
        for (const auto& e : r.trainer.log().events()) {
            if (e.kind != EventKind::claim_stale || e.status != Status::ok) continue;
            const auto* c = r.trainer.contribution(*e.contribution);
            v.require(e.time - c->submitted_at >= 777'600,
                      "claim at " + std::to_string(e.time - c->submitted_at) + " s after submission");
            ++per_model[short_name(r.config.model)];
            ++total;
        }
    }
    v.require(total > 0, "no stale claims in any run");
    std::ostringstream d;
    d << total << " claims (";
    for (auto kind : kKinds) d << short_name(kind) << ' ' << per_model[short_name(kind)] << (kind == kKinds[2] ? ")" : ", ");
    if (v.pass) v.detail = d.str();
    else v.detail += "; " + d.str();
    return v;
}

Verdict gas_checks() {
    using namespace dcai::gas;
    Verdict v;
    for (const char* name : {"fakenews", "imdb"}) {
        const auto p = preset_from_string(name);
        const auto perc = estimate_deploy(ModelKind::perceptron, p.layout, p.shape.dimension);
        const auto nb = estimate_deploy(ModelKind::naive_bayes, p.layout, p.shape.dimension);
        const auto ncc = estimate_deploy(ModelKind::nearest_centroid, p.layout, p.shape.dimension);
        v.require(ncc > nb && nb > perc, std::string(name) + ": deployment ordering");
        const double ratio = static_cast<double>(nb) / static_cast<double>(perc);
        v.require(ratio >= 1.4 && ratio <= 2.2, std::string(name) + ": NB/Perceptron ratio " + std::to_string(ratio));
    }
    int pairs = 0;
    for (const char* name : {"fakenews", "fitness", "imdb"}) {
        const auto p = preset_from_string(name);
        for (auto kind : kKinds) {
            v.require(estimate_refund(kind, p.layout, p.shape) > estimate_reward(kind, p.layout, p.shape),
                      std::string(name) + ": refund not above reward");
            ++pairs;
        }
    }
    v.require(pairs == 9, "expected nine pairs");
    const auto perc = cost_profile(ModelKind::perceptron, Layout::sparse, {1000, 15}).totals();
    const std::int64_t reference[] = {30'967'145, 263'517, 138'028, 102'484};
    std::ostringstream d;
    for (int i = 0; i < 4; ++i) {
        const double ratio = static_cast<double>(perc[i]) / static_cast<double>(reference[i]);
        d << perc[i] << '/' << reference[i] << (i < 3 ? ", " : "");
        v.require(ratio >= 0.5 && ratio <= 1.5, "perceptron cell " + std::to_string(i) + " ratio " + std::to_string(ratio));
    }
    if (v.pass) v.detail = "perceptron " + d.str();
    return v;
}

Verdict model_oracles() {
    Verdict v;
    testing::Rng rng(2026);
    std::size_t nb_inputs = 0;
    for (std::size_t d = 1; d <= 8; ++d) {
        std::vector<LabeledSample> warm;
        std::uniform_int_distribution<int> count(0, 5);
        for (int i = 0; i < 6; ++i) {
            std::vector<FeatureVector::Value> x(d);
            for (auto& e : x) e = count(rng);
            warm.emplace_back(FeatureVector::dense(x), i % 2);
        }
        const Model m = warm_start({ModelKind::naive_bayes, Layout::dense, d}, warm);
        const testing::ExactNaiveBayes oracle(std::get<NaiveBayesModel>(m));
        std::vector<FeatureVector::Value> buf(d);
        bool ok = true;
        oracle.sweep(5, [&](const std::vector<int>& x, Label y) {
            std::copy(x.begin(), x.end(), buf.begin());
            ok = ok && predict(m, FeatureVector::dense(buf)) == y;
            ++nb_inputs;
        });
        v.require(ok, "naive Bayes disagrees with the exact oracle at d=" + std::to_string(d));
    }

    for (int seq = 0; seq < 1000; ++seq) {
        const std::size_t d = 2 + static_cast<std::size_t>(seq % 30);
        Model dense = make_model({ModelKind::nearest_centroid, Layout::dense, d});
        Model sparse = make_model({ModelKind::nearest_centroid, Layout::sparse, d});
        bool ok = true;
        for (int step = 0; step < 40 && ok; ++step) {
            const auto x = testing::random_sparse(rng, d, 0.3);
            const LabeledSample s(x, static_cast<Label>(rng() % 2));
            update(dense, LabeledSample(testing::as_dense(x), s.label));
            update(sparse, s);
            const auto probe = testing::random_sparse(rng, d, 0.4);
            ok = predict(dense, probe) == predict(sparse, probe);
        }
        v.require(ok, "sparse and dense nearest centroid disagree in sequence " + std::to_string(seq));
    }

    const Dataset data = synth_generate(SynthKind::separable, 1000, 9, 5);
    Model perc = warm_start({ModelKind::perceptron, Layout::dense, 9}, data.train);
    std::size_t noops = 0;
    std::uniform_int_distribution<int> value(0, 200);
    while (noops < 10'000) {
        std::vector<FeatureVector::Value> x(9);
        for (auto& e : x) e = value(rng);
        const FeatureVector f = FeatureVector::dense(x);
        const LabeledSample s(f, predict(perc, f));
        const auto before = snapshot(perc);
        const bool changed = update(perc, s);
        v.require(!changed && snapshot(perc) == before, "perceptron changed on a correctly classified sample");
        ++noops;
    }
    if (v.pass)
        v.detail = std::to_string(nb_inputs) + " naive Bayes inputs, 1000 centroid sequences, 10000 perceptron no-ops";
    return v;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Verdict replay_determinism() {
    Verdict v;
    if (runs().runs.empty()) return {false, "no runs from criterion 2"};
    const fs::path dir = fs::temp_directory_path() / "dcai_acceptance_replay";
    for (const auto& r : runs().runs) {
        fs::remove_all(dir);
        export_run(r, dir);
        std::ifstream events(dir / "events.csv");
        const Trainer t = replay(EventLog::read_csv(events));
        const auto bytes = snapshot(t.model());
        const std::string id = short_name(r.config.model) + " seed " + std::to_string(r.config.seed);
        v.require(std::string(bytes.begin(), bytes.end()) == slurp(dir / "checkpoint.bin"), id + ": checkpoint differs");
        std::istringstream balances(slurp(dir / "balances.csv"));
        std::string header, line, last;
        std::getline(balances, header);
        while (std::getline(balances, line))
            if (!line.empty()) last = line;
        std::ostringstream expect;
        expect << r.metrics.samples.back().time << ',' << t.account("good")->balance << ',' << t.account("bad")->balance;
        v.require(header == "time,good,bad" && last == expect.str(), id + ": balances differ");
    }
    fs::remove_all(dir);
    if (v.pass) v.detail = std::to_string(runs().runs.size()) + " runs";
    return v;
}

Verdict payout_formula() {
    using boost::multiprecision::cpp_int;
    Verdict v;
    testing::Rng rng(8);
    std::uniform_int_distribution<Amount> deposit(0, units(1'000'000));
    std::uniform_int_distribution<std::uint64_t> total(0, 1'000'000);
    for (int i = 0; i < 10'000; ++i) {
        const Amount d = deposit(rng);
        const std::uint64_t sum = total(rng);
        const std::uint64_t n = sum == 0 ? 0 : std::uniform_int_distribution<std::uint64_t>(0, sum)(rng);
        const Amount remaining = std::uniform_int_distribution<Amount>(0, d)(rng);
        cpp_int expected = 0;
        if (sum > 0) expected = cpp_int(d) * n / sum;
        if (expected > remaining) expected = remaining;
        v.require(cpp_int(report_payout(d, n, sum, remaining)) == expected,
                  "mismatch at d=" + std::to_string(d) + " n=" + std::to_string(n) + " sum=" + std::to_string(sum));
    }
    if (v.pass) v.detail = "10000 tuples";
    return v;
}

}  // namespace

int main() {
    report(1, "fund conservation over 100 x 1000 random operations", 10.0, conservation);
    report(2, "good agent profits and bad agent loses (3 models x 3 seeds)", 60.0, balances);
    report(3, "accuracy tracks the baseline", 0, accuracy);
    report(4, "stale claims only after the takeover wait", 0, stale_claims);
    report(5, "gas orderings, ratio and perceptron magnitudes", 1.0, gas_checks);
    report(6, "model oracles", 0, model_oracles);
    report(7, "replay reproduces checkpoint and balances", 0, replay_determinism);
    report(8, "report payout formula", 0, payout_formula);
    return failures == 0 ? 0 : 1;
}

// Copyright 2026 The dcai-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dcai/checkpoint.hpp"
#include "dcai/config.hpp"
#include "dcai/gascost.hpp"
#include "dcai/simulation.hpp"

namespace {

using namespace dcai;

enum Exit : int {
    kOk = 0,
    kConfig = 2,
    kIo = 3,
    kInvalid = 4,
    kInvariant = 5,
    kMismatch = 6,
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Mismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

struct SimulateArgs {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out = "out";
    std::string model;
    bool sparse = false;
    bool dense = false;
    std::string assignment;
};

SimulationConfig resolve(const SimulateArgs& a) {
    SimulationConfig c = a.config.empty() ? default_config() : load_config(a.config);
    if (a.seed) c.seed = *a.seed;
    if (!a.model.empty()) c.model = model_kind_from_string(a.model);
    if (a.sparse) c.layout = Layout::sparse;
    if (a.dense) c.layout = Layout::dense;
    if (!a.assignment.empty()) c.assignment = assignment_from_string(a.assignment);
    c.validate();
    return c;
}

int simulate(const SimulateArgs& a) {
    const SimulationConfig config = resolve(a);
    const SimulationResult r = run(config);
    export_run(r, a.out);
    std::ostringstream cfg;
    write_config(config, cfg);
    write_file_atomic(std::filesystem::path(a.out) / "config.ini", cfg.str());

    std::cout << "seed " << config.seed << " model " << to_string(config.model) << " accuracy " << r.final_accuracy()
              << " baseline " << r.metrics.baseline_accuracy;
    for (const auto& agent : r.metrics.agents) std::cout << ' ' << agent << ' ' << format_units(r.final_balance(agent));
    std::cout << " events " << r.trainer.log().size() << '\n';
    if (!r.invariants_ok) {
        std::cerr << "error: invariant check failed during the run\n";
        return kInvariant;
    }
    return kOk;
}

struct GasArgs {
    std::string model;
    std::string preset = "fakenews";
    bool sparse = false;
    bool dense = false;
    bool csv = false;
    std::string out;
};

int gas_report(const GasArgs& a) {
    const gas::Preset preset = gas::preset_from_string(a.preset);
    Layout layout = preset.layout;
    if (a.sparse) layout = Layout::sparse;
    if (a.dense) layout = Layout::dense;
    std::vector<ModelKind> kinds;
    if (a.model.empty()) kinds = {ModelKind::naive_bayes, ModelKind::nearest_centroid, ModelKind::perceptron};
    else kinds = {model_kind_from_string(a.model)};

    std::vector<gas::CostProfile> columns;
    for (auto k : kinds) columns.push_back(gas::cost_profile(k, layout, preset.shape));
    std::ostringstream csv, text;
    gas::write_report_csv(columns, csv);
    gas::write_report_text(columns, text);
    std::cout << (a.csv ? csv.str() : text.str());
    if (!a.out.empty()) {
        std::filesystem::create_directories(a.out);
        write_file_atomic(std::filesystem::path(a.out) / ("gas_" + preset.name + ".csv"), csv.str());
        write_file_atomic(std::filesystem::path(a.out) / ("gas_" + preset.name + ".txt"), text.str());
    }
    return kOk;
}

std::vector<Amount> last_balances_row(const std::filesystem::path& path, std::vector<std::string>& header) {
    std::istringstream in(read_file(path));
    std::string line, last;
    std::getline(in, line);
    std::stringstream h(line);
    for (std::string cell; std::getline(h, cell, ',');) header.push_back(cell);
    while (std::getline(in, line))
        if (!line.empty()) last = line;
    std::vector<Amount> out;
    std::stringstream row(last);
    std::string cell;
    std::getline(row, cell, ',');  // time
    while (std::getline(row, cell, ',')) out.push_back(std::stoll(cell));
    return out;
}

int replay_cmd(const std::string& log_path) {
    const std::filesystem::path path(log_path);
    std::istringstream in(read_file(path));
    const EventLog log = path.extension() == ".jsonl" ? EventLog::read_jsonl(in) : EventLog::read_csv(in);
    const Trainer t = replay(log);
    if (!t.invariants_hold()) throw Mismatch("replayed state violates the conservation invariant");

    for (const auto& [id, account] : t.accounts()) std::cout << id << ' ' << format_units(account.balance) << '\n';

    const auto dir = path.parent_path();
    if (std::filesystem::exists(dir / "balances.csv")) {
        std::vector<std::string> header;
        const auto expected = last_balances_row(dir / "balances.csv", header);
        for (std::size_t i = 0; i < expected.size(); ++i) {
            const auto* a = t.account(header.at(i + 1));
            if (!a || a->balance != expected[i]) throw Mismatch("final balance differs for " + header.at(i + 1));
        }
        std::cout << "balances match balances.csv\n";
    }
    if (std::filesystem::exists(dir / "checkpoint.bin")) {
        const ModelCheckpoint bytes = snapshot(t.model());
        if (read_file(dir / "checkpoint.bin") != std::string(bytes.begin(), bytes.end()))
            throw Mismatch("model checkpoint differs from checkpoint.bin");
        std::cout << "model matches checkpoint.bin\n";
    }
    return kOk;
}

struct SynthArgs {
    std::string kind = "separable";
    std::size_t n = 2000;
    std::size_t d = 9;
    std::uint64_t seed = 1;
    std::string out;
};

int synth(const SynthArgs& a) {
    const Dataset data = synth_generate(synth_kind_from_string(a.kind), a.n, a.d, a.seed);
    std::ostringstream s;
    write_numeric_csv(data, s);
    if (a.out.empty()) {
        std::cout << s.str();
    } else {
        const std::filesystem::path out(a.out);
        if (out.has_parent_path()) std::filesystem::create_directories(out.parent_path());
        write_file_atomic(out, s.str());
    }
    return kOk;
}

struct SweepArgs {
    SimulateArgs sim;
    std::uint64_t first = 1;
    std::size_t count = 10;
    unsigned threads = 0;
};

int sweep_cmd(const SweepArgs& a) {
    const SimulationConfig config = resolve(a.sim);
    std::vector<std::uint64_t> seeds;
    for (std::size_t i = 0; i < a.count; ++i) seeds.push_back(a.first + i);
    const auto rows = sweep(config, seeds, a.threads);

    std::ostringstream csv;
    csv << "seed,baseline,accuracy";
    for (const auto* id : {&config.good.id, &config.bad.id}) csv << ',' << *id;
    csv << ",updates,refunds,reports,stale_claims,invariants_ok\n";
    bool ok = true;
    for (const auto& r : rows) {
        csv << r.seed << ',' << r.baseline_accuracy << ',' << r.final_accuracy;
        for (Amount b : r.final_balances) csv << ',' << b;
        csv << ',' << r.counts.updates << ',' << r.counts.refunds << ',' << r.counts.reports << ','
            << r.counts.stale_claims << ',' << (r.invariants_ok ? 1 : 0) << '\n';
        ok = ok && r.invariants_ok;
    }
    std::filesystem::create_directories(a.sim.out);
    write_file_atomic(std::filesystem::path(a.sim.out) / "sweep.csv", csv.str());
    std::cout << csv.str();
    if (!ok) {
        std::cerr << "error: invariant check failed in at least one run\n";
        return kInvariant;
    }
    return kOk;
}

void add_sim_flags(CLI::App& cmd, SimulateArgs& a) {
    cmd.add_option("--config", a.config, "INI config file")->check(CLI::ExistingFile);
    cmd.add_option("--seed", a.seed, "RNG seed");
    cmd.add_option("--out", a.out, "Output directory");
    cmd.add_option("--model", a.model, "perceptron | naive-bayes | nearest-centroid");
    auto* sparse = cmd.add_flag("--sparse", a.sparse, "Use the sparse model layout");
    cmd.add_flag("--dense", a.dense, "Use the dense model layout")->excludes(sparse);
    cmd.add_option("--assignment", a.assignment, "shared-stream | alternate");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Decentralized collaborative training simulator"};
    app.require_subcommand(1, 1);

    SimulateArgs sim;
    auto* simulate_cmd = app.add_subcommand("simulate", "Run one simulation and export its outputs");
    add_sim_flags(*simulate_cmd, sim);

    GasArgs gas_args;
    auto* gas_cmd = app.add_subcommand("gas-report", "Estimated transaction costs per model");
    gas_cmd->add_option("--model", gas_args.model, "Single model column (default: all three)");
    gas_cmd->add_option("--preset", gas_args.preset, "fakenews | fitness | imdb | synthetic");
    auto* gsparse = gas_cmd->add_flag("--sparse", gas_args.sparse, "Force the sparse layout");
    gas_cmd->add_flag("--dense", gas_args.dense, "Force the dense layout")->excludes(gsparse);
    gas_cmd->add_flag("--csv", gas_args.csv, "Print CSV instead of the aligned table");
    gas_cmd->add_option("--out", gas_args.out, "Also write CSV and text files here");

    std::string log_path;
    auto* replay_sub = app.add_subcommand("replay", "Re-execute an event log and check the recorded outputs");
    replay_sub->add_option("events", log_path, "events.csv or events.jsonl")->required()->check(CLI::ExistingFile);

    SynthArgs synth_args;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic dataset as CSV");
    synth_cmd->add_option("--kind", synth_args.kind, "separable | noisy | text-like");
    synth_cmd->add_option("--n", synth_args.n, "Number of samples");
    synth_cmd->add_option("--d", synth_args.d, "Dimensionality");
    synth_cmd->add_option("--seed", synth_args.seed, "RNG seed");
    synth_cmd->add_option("--out", synth_args.out, "Output CSV (default: stdout)");

    SweepArgs sweep_args;
    auto* sweep_sub = app.add_subcommand("sweep", "Run consecutive seeds in parallel");
    add_sim_flags(*sweep_sub, sweep_args.sim);
    sweep_sub->add_option("--first-seed", sweep_args.first, "First seed");
    sweep_sub->add_option("--count", sweep_args.count, "Number of seeds");
    sweep_sub->add_option("--threads", sweep_args.threads, "Worker threads (default: hardware)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*simulate_cmd) return simulate(sim);
        if (*gas_cmd) return gas_report(gas_args);
        if (*replay_sub) return replay_cmd(log_path);
        if (*synth_cmd) return synth(synth_args);
        if (*sweep_sub) return sweep_cmd(sweep_args);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return kIo;
    } catch (const Mismatch& e) {
        std::cerr << "replay mismatch: " << e.what() << '\n';
        return kMismatch;
    } catch (const EventLogError& e) {
        std::cerr << "replay mismatch: " << e.what() << '\n';
        return kMismatch;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return kIo;
    } catch (const std::runtime_error& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return kIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid: " << e.what() << '\n';
        return kInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalid;
    }
    return kInvalid;
}

// Copyright 2026 The dcai-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "dcai/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <vector>

namespace dcai {
namespace {

namespace pt = boost::property_tree;

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& raw) {
    const std::string text = trim(raw);
    T value{};
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (text.empty() || ec != std::errc() || ptr != end) throw ConfigError("not a number: '" + raw + "'");
    return value;
}

std::string text_features_name(TextFeatures f) { return f == TextFeatures::bigram_tf ? "bigram-tf" : "word-presence"; }

TextFeatures text_features_from(const std::string& name) {
    std::string s = name;
    std::replace(s.begin(), s.end(), '_', '-');
    if (s == "bigram-tf") return TextFeatures::bigram_tf;
    if (s == "word-presence") return TextFeatures::word_presence;
    throw ConfigError("unknown text features: " + name);
}

std::string num(double v) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

struct Field {
    std::string section;
    std::string key;
    std::function<void(SimulationConfig&, const std::string&)> set;
    std::function<std::string(const SimulationConfig&)> get;
};

void agent_fields(std::vector<Field>& f, const std::string& section, AgentProfile SimulationConfig::*member) {
    auto agent = [member](SimulationConfig& c) -> AgentProfile& { return c.*member; };
    auto cagent = [member](const SimulationConfig& c) -> const AgentProfile& { return c.*member; };
    f.push_back({section, "id", [=](auto& c, auto& v) { agent(c).id = trim(v); },
                 [=](auto& c) { return cagent(c).id; }});
    f.push_back({section, "starting_balance", [=](auto& c, auto& v) { agent(c).starting_balance = parse_units(v); },
                 [=](auto& c) { return format_units(cagent(c).starting_balance); }});
    f.push_back({section, "max_deposit_mean", [=](auto& c, auto& v) { agent(c).max_deposit_mean = parse_units(v); },
                 [=](auto& c) { return format_units(cagent(c).max_deposit_mean); }});
    f.push_back({section, "max_deposit_std", [=](auto& c, auto& v) { agent(c).max_deposit_std = parse_units(v); },
                 [=](auto& c) { return format_units(cagent(c).max_deposit_std); }});
    f.push_back({section, "mean_update_interval",
                 [=](auto& c, auto& v) { agent(c).mean_update_interval = parse_number<double>(v); },
                 [=](auto& c) { return num(cagent(c).mean_update_interval); }});
    f.push_back({section, "p_incorrect_label",
                 [=](auto& c, auto& v) { agent(c).p_incorrect_label = parse_number<double>(v); },
                 [=](auto& c) { return num(cagent(c).p_incorrect_label); }});
    f.push_back({section, "submit_policy",
                 [=](auto& c, auto& v) { agent(c).submit_policy = submit_policy_from_string(trim(v)); },
                 [=](auto& c) { return std::string(to_string(cagent(c).submit_policy)); }});
    f.push_back({section, "submit_bonus", [=](auto& c, auto& v) { agent(c).submit_bonus = parse_number<double>(v); },
                 [=](auto& c) { return num(cagent(c).submit_bonus); }});
}

const std::vector<Field>& fields() {
    static const std::vector<Field> kFields = [] {
        std::vector<Field> f;
        f.push_back({"simulation", "seed", [](auto& c, auto& v) { c.seed = parse_number<std::uint64_t>(v); },
                     [](auto& c) { return std::to_string(c.seed); }});
        f.push_back({"simulation", "metrics_interval",
                     [](auto& c, auto& v) { c.metrics_interval = parse_number<Seconds>(v); },
                     [](auto& c) { return std::to_string(c.metrics_interval); }});
        f.push_back({"simulation", "horizon", [](auto& c, auto& v) { c.horizon = parse_number<Seconds>(v); },
                     [](auto& c) { return std::to_string(c.horizon); }});
        f.push_back({"simulation", "warm_fraction",
                     [](auto& c, auto& v) { c.warm_fraction = parse_number<double>(v); },
                     [](auto& c) { return num(c.warm_fraction); }});
        f.push_back({"simulation", "assignment",
                     [](auto& c, auto& v) { c.assignment = assignment_from_string(trim(v)); },
                     [](auto& c) { return std::string(to_string(c.assignment)); }});

        f.push_back({"model", "kind", [](auto& c, auto& v) { c.model = model_kind_from_string(trim(v)); },
                     [](auto& c) { return std::string(to_string(c.model)); }});
        f.push_back({"model", "layout",
                     [](auto& c, auto& v) {
                         const std::string s = trim(v);
                         if (s == "auto") c.layout.reset();
                         else c.layout = layout_from_string(s);
                     },
                     [](auto& c) { return c.layout ? std::string(to_string(*c.layout)) : std::string("auto"); }});
        f.push_back({"model", "learning_rate", [](auto& c, auto& v) { c.learning_rate = parse_number<double>(v); },
                     [](auto& c) { return num(c.learning_rate); }});
        f.push_back({"model", "smoothing", [](auto& c, auto& v) { c.smoothing = parse_number<double>(v); },
                     [](auto& c) { return num(c.smoothing); }});

        f.push_back({"dataset", "source",
                     [](auto& c, auto& v) { c.dataset.kind = dataset_source_from_string(trim(v)); },
                     [](auto& c) { return std::string(to_string(c.dataset.kind)); }});
        f.push_back({"dataset", "synth", [](auto& c, auto& v) { c.dataset.synth = synth_kind_from_string(trim(v)); },
                     [](auto& c) { return std::string(to_string(c.dataset.synth)); }});
        f.push_back({"dataset", "n", [](auto& c, auto& v) { c.dataset.n = parse_number<std::size_t>(v); },
                     [](auto& c) { return std::to_string(c.dataset.n); }});
        f.push_back({"dataset", "dimension",
                     [](auto& c, auto& v) { c.dataset.dimension = parse_number<std::size_t>(v); },
                     [](auto& c) { return std::to_string(c.dataset.dimension); }});
        f.push_back({"dataset", "seed",
                     [](auto& c, auto& v) {
                         const std::string s = trim(v);
                         if (s == "auto") c.dataset.seed.reset();
                         else c.dataset.seed = parse_number<std::uint64_t>(s);
                     },
                     [](auto& c) { return c.dataset.seed ? std::to_string(*c.dataset.seed) : std::string("auto"); }});
        f.push_back({"dataset", "path", [](auto& c, auto& v) { c.dataset.path = trim(v); },
                     [](auto& c) { return c.dataset.path.string(); }});
        f.push_back({"dataset", "layout", [](auto& c, auto& v) { c.dataset.layout = layout_from_string(trim(v)); },
                     [](auto& c) { return std::string(to_string(c.dataset.layout)); }});
        f.push_back({"dataset", "text_features",
                     [](auto& c, auto& v) { c.dataset.text_features = text_features_from(trim(v)); },
                     [](auto& c) { return text_features_name(c.dataset.text_features); }});
        f.push_back({"dataset", "vocabulary",
                     [](auto& c, auto& v) { c.dataset.vocabulary = parse_number<std::size_t>(v); },
                     [](auto& c) { return std::to_string(c.dataset.vocabulary); }});

        f.push_back({"trainer", "refund_wait",
                     [](auto& c, auto& v) { c.trainer.refund_wait = parse_number<Seconds>(v); },
                     [](auto& c) { return std::to_string(c.trainer.refund_wait); }});
        f.push_back({"trainer", "takeover_wait",
                     [](auto& c, auto& v) { c.trainer.takeover_wait = parse_number<Seconds>(v); },
                     [](auto& c) { return std::to_string(c.trainer.takeover_wait); }});
        f.push_back({"trainer", "deposit_numerator",
                     [](auto& c, auto& v) { c.trainer.deposit_numerator = parse_units(v); },
                     [](auto& c) { return format_units(c.trainer.deposit_numerator); }});
        f.push_back({"trainer", "min_deposit", [](auto& c, auto& v) { c.trainer.min_deposit = parse_units(v); },
                     [](auto& c) { return format_units(c.trainer.min_deposit); }});

        agent_fields(f, "agent.good", &SimulationConfig::good);
        agent_fields(f, "agent.bad", &SimulationConfig::bad);
        return f;
    }();
    return kFields;
}

std::string env_name(const Field& f) {
    std::string name = "DCAI_" + f.section + "_" + f.key;
    for (char& ch : name) ch = ch == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    return name;
}

void assign(const Field& f, SimulationConfig& c, const std::string& value, const std::string& origin) {
    try {
        f.set(c, value);
    } catch (const std::exception& e) {
        throw ConfigError(origin + ": " + e.what());
    }
}

void apply_env(SimulationConfig& c, const EnvLookup& env) {
    if (!env) return;
    for (const auto& f : fields())
        if (auto v = env(env_name(f))) assign(f, c, *v, env_name(f));
}

void finish(SimulationConfig& c) {
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid config: ") + e.what());
    }
}

}  // namespace

std::optional<std::string> process_env(const std::string& name) {
    if (const char* v = std::getenv(name.c_str())) return std::string(v);
    return std::nullopt;
}

Amount parse_units(const std::string& raw) {
    const std::string text = trim(raw);
    const auto dot = text.find('.');
    const std::string whole = text.substr(0, dot);
    std::string frac = dot == std::string::npos ? "" : text.substr(dot + 1);
    const bool negative = !whole.empty() && whole[0] == '-';
    const std::string digits = negative ? whole.substr(1) : whole;
    auto all_digits = [](const std::string& s) {
        return std::all_of(s.begin(), s.end(), [](unsigned char ch) { return std::isdigit(ch); });
    };
    if (digits.empty() || !all_digits(digits) || !all_digits(frac) || frac.size() > 6 ||
        (dot != std::string::npos && frac.empty()))
        throw ConfigError("not an amount: '" + raw + "'");
    frac.resize(6, '0');
    const auto w = parse_number<Amount>(digits);
    if (w > std::numeric_limits<Amount>::max() / kMicrosPerUnit - 1) throw ConfigError("amount too large: " + raw);
    const Amount micros = w * kMicrosPerUnit + parse_number<Amount>(frac);
    return negative ? -micros : micros;
}

std::string format_units(Amount micros) {
    const bool negative = micros < 0;
    const std::uint64_t m = negative ? 0 - static_cast<std::uint64_t>(micros) : static_cast<std::uint64_t>(micros);
    std::string out = std::to_string(m / kMicrosPerUnit);
    if (const auto frac = m % kMicrosPerUnit) {
        std::string f = std::to_string(frac);
        f.insert(0, 6 - f.size(), '0');
        while (f.back() == '0') f.pop_back();
        out += "." + f;
    }
    return negative ? "-" + out : out;
}

SimulationConfig parse_config(std::istream& in, const EnvLookup& env) {
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.message() + " at line " + std::to_string(e.line()));
    }
    SimulationConfig c;
    for (const auto& [section, body] : tree) {
        if (!body.data().empty()) throw ConfigError("key '" + section + "' must be inside a section");
        for (const auto& [key, value] : body) {
            const auto& all = fields();
            const auto it = std::find_if(all.begin(), all.end(),
                                         [&](const Field& f) { return f.section == section && f.key == key; });
            if (it == all.end()) throw ConfigError("unknown config key [" + section + "] " + key);
            assign(*it, c, value.data(), "[" + section + "] " + key);
        }
    }
    apply_env(c, env);
    finish(c);
    return c;
}

SimulationConfig load_config(const std::filesystem::path& path, const EnvLookup& env) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    SimulationConfig c = parse_config(in, env);
    if (!c.dataset.path.empty() && c.dataset.path.is_relative())
        c.dataset.path = path.parent_path() / c.dataset.path;
    return c;
}

SimulationConfig default_config(const EnvLookup& env) {
    SimulationConfig c;
    apply_env(c, env);
    finish(c);
    return c;
}

void write_config(const SimulationConfig& config, std::ostream& out) {
    std::string section;
    for (const auto& f : fields()) {
        if (f.section != section) {
            if (!section.empty()) out << '\n';
            section = f.section;
            out << '[' << section << "]\n";
        }
        out << f.key << " = " << f.get(config) << '\n';
    }
}

}  // namespace dcai

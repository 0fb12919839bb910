#include "provfaas/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace provfaas {

std::vector<std::string> validate_config(const PipelineConfig& cfg) {
    std::vector<std::string> errors;
    if (cfg.interval_seconds <= 0) errors.push_back("provgraph.interval_seconds must be positive");
    if (cfg.k_layers == 0) errors.push_back("provgraph.k_layers must be positive");
    if (cfg.skew_window_ms < 0) errors.push_back("provgraph.skew_window_ms must be >= 0");
    if (cfg.filter_frequency && cfg.freqdb_path.empty())
        errors.push_back("provgraph.filters.frequency requires provgraph.freqdb_path");
    if (cfg.embed_dim == 0) errors.push_back("featurize.dim must be positive");
    if (cfg.unit_budget <= 0) errors.push_back("featurize.unit_budget must be positive");
    if (cfg.cost.base < 0 || cfg.cost.per_char < 0)
        errors.push_back("featurize cost model coefficients must be >= 0");
    if (cfg.capacity_edges == 0) errors.push_back("partitioner.capacity_edges must be positive");
    if (cfg.k_hops != cfg.k_layers)
        errors.push_back("partitioner.k_hops (" + std::to_string(cfg.k_hops) +
                         ") must equal provgraph.k_layers (" + std::to_string(cfg.k_layers) + ")");
    if (cfg.gnn_layers != cfg.k_layers)
        errors.push_back("gnn.k_layers (" + std::to_string(cfg.gnn_layers) +
                         ") must equal provgraph.k_layers (" + std::to_string(cfg.k_layers) + ")");
    if (cfg.hidden_dim == 0) errors.push_back("gnn.hidden_dim must be positive");
    if (cfg.out_dim == 0) errors.push_back("gnn.out_dim must be positive");
    if (cfg.quantile <= 0 || cfg.quantile > 1) errors.push_back("detector.quantile must be in (0, 1]");
    if (cfg.gnn_cost_per_edge <= 0) errors.push_back("sim.gnn_cost_per_edge must be positive");
    for (auto& e : cfg.sim.validate()) errors.push_back(e);
    for (auto& e : cfg.workload.validate()) errors.push_back(e);
    return errors;
}

namespace {

struct RawConfig {
    // (section, key) -> value, plus which pairs were consumed by a getter.
    std::map<std::pair<std::string, std::string>, std::string> values;
    std::vector<std::string> errors;

    std::string* find(const std::string& section, const std::string& key) {
        auto it = values.find({section, key});
        if (it == values.end()) return nullptr;
        consumed.insert({section, key});
        return &it->second;
    }

    std::set<std::pair<std::string, std::string>> consumed;
};

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

RawConfig parse_raw(const std::string& text, const std::string& origin) {
    RawConfig raw;
    std::istringstream is(text);
    std::string line, section;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']') {
                raw.errors.push_back(origin + ":" + std::to_string(lineno) + ": unterminated section header");
                continue;
            }
            section = trim(std::string_view(t).substr(1, t.size() - 2));
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            raw.errors.push_back(origin + ":" + std::to_string(lineno) + ": expected key = value");
            continue;
        }
        std::string key = trim(std::string_view(t).substr(0, eq));
        std::string value = trim(std::string_view(t).substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
            value = value.substr(1, value.size() - 2);
        if (key.empty()) {
            raw.errors.push_back(origin + ":" + std::to_string(lineno) + ": empty key");
            continue;
        }
        raw.values[{section, key}] = value;
    }
    return raw;
}

class Loader {
public:
    Loader(RawConfig& raw, std::vector<std::string>& errors) : raw_(raw), errors_(errors) {}

    void get(const std::string& section, const std::string& key, double& out) {
        if (auto* v = raw_.find(section, key)) {
            try {
                out = std::stod(*v);
            } catch (...) {
                bad(section, key, *v, "a number");
            }
        }
    }

    template <typename Int>
    void get_int(const std::string& section, const std::string& key, Int& out) {
        if (auto* v = raw_.find(section, key)) {
            Int parsed{};
            auto [p, ec] = std::from_chars(v->data(), v->data() + v->size(), parsed);
            if (ec != std::errc() || p != v->data() + v->size())
                bad(section, key, *v, "an integer");
            else
                out = parsed;
        }
    }

    void get(const std::string& section, const std::string& key, bool& out) {
        if (auto* v = raw_.find(section, key)) {
            if (*v == "true")
                out = true;
            else if (*v == "false")
                out = false;
            else
                bad(section, key, *v, "true or false");
        }
    }

    void get(const std::string& section, const std::string& key, std::string& out) {
        if (auto* v = raw_.find(section, key)) out = *v;
    }

    void bad(const std::string& section, const std::string& key, const std::string& v,
             const std::string& want) {
        errors_.push_back("config key " + section + "." + key + ": '" + v + "' is not " + want);
    }

private:
    RawConfig& raw_;
    std::vector<std::string>& errors_;
};

}  // namespace

ConfigParseResult parse_config_text(const std::string& text, const std::string& origin) {
    ConfigParseResult result;
    RawConfig raw = parse_raw(text, origin);
    result.errors = raw.errors;

    PipelineConfig& c = result.config;
    Loader load(raw, result.errors);

    load.get_int("", "seed", c.seed);

    load.get("provgraph", "interval_seconds", c.interval_seconds);
    load.get_int("provgraph", "k_layers", c.k_layers);
    load.get_int("provgraph", "freq_threshold", c.freq_threshold);
    load.get_int("provgraph", "skew_window_ms", c.skew_window_ms);
    load.get("provgraph", "filters.locality", c.filter_locality);
    load.get("provgraph", "filters.frequency", c.filter_frequency);
    load.get("provgraph", "freqdb_path", c.freqdb_path);

    load.get_int("featurize", "dim", c.embed_dim);
    load.get("featurize", "cost_base", c.cost.base);
    load.get("featurize", "cost_per_char", c.cost.per_char);
    load.get("featurize", "unit_budget", c.unit_budget);

    load.get_int("partitioner", "capacity_edges", c.capacity_edges);
    load.get("partitioner", "strict", c.strict);
    load.get_int("partitioner", "k_hops", c.k_hops);
    if (auto* fit = raw.find("partitioner", "fit")) {
        if (*fit == "first_fit")
            c.fit = FitStrategy::FirstFit;
        else if (*fit == "best_fit")
            c.fit = FitStrategy::BestFit;
        else
            load.bad("partitioner", "fit", *fit, "first_fit or best_fit");
    }

    load.get_int("gnn", "k_layers", c.gnn_layers);
    load.get_int("gnn", "hidden_dim", c.hidden_dim);
    load.get_int("gnn", "out_dim", c.out_dim);
    load.get("gnn", "model_path", c.model_path);
    if (auto* act = raw.find("gnn", "activation")) {
        if (*act == "relu")
            c.activation = Activation::Relu;
        else if (*act == "tanh")
            c.activation = Activation::Tanh;
        else
            load.bad("gnn", "activation", *act, "relu or tanh");
    }

    load.get("detector", "quantile", c.quantile);
    load.get("detector", "profile_path", c.profile_path);

    load.get("sim", "cold_start_ms", c.sim.cold_start_ms);
    load.get("sim", "per_cost_ms", c.sim.per_cost_ms);
    load.get_int("sim", "max_instances", c.sim.max_instances);
    load.get("sim", "scale_target", c.sim.scale_target);
    load.get("sim", "idle_timeout_ms", c.sim.idle_timeout_ms);
    load.get("sim", "vertical_efficiency", c.sim.vertical_efficiency);
    load.get_int("sim", "static_instances", c.sim.static_instances);
    load.get("sim", "gnn_cost_per_edge", c.gnn_cost_per_edge);

    load.get_int("workload", "intervals", c.workload.intervals);
    load.get("workload", "base_nodes", c.workload.base_nodes);
    load.get("workload", "poisson", c.workload.poisson);
    load.get("workload", "attr_len_mean", c.workload.attr_len_mean);
    load.get("workload", "edges_per_node", c.workload.edges_per_node);
    load.get_int("workload", "burst_start", c.workload.burst_start);
    load.get_int("workload", "burst_every", c.workload.burst_every);
    load.get_int("workload", "burst_len", c.workload.burst_len);
    load.get("workload", "burst_multiplier", c.workload.burst_multiplier);

    for (const auto& [sk, value] : raw.values)
        if (!raw.consumed.contains(sk))
            result.errors.push_back("unknown config key " + (sk.first.empty() ? "" : sk.first + ".") +
                                    sk.second);

    c.sim.rng_seed = c.seed;
    for (auto& e : validate_config(c)) result.errors.push_back(e);
    return result;
}

ConfigParseResult parse_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) {
        ConfigParseResult r;
        r.errors.push_back("cannot open config file: " + path);
        return r;
    }
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse_config_text(buf.str(), path);
}

}  // namespace provfaas

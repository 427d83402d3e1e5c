#ifndef RSAV_CONFIG_HPP
#define RSAV_CONFIG_HPP

#include <cctype>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "rsav/errors.hpp"
#include "rsav/integrator.hpp"
#include "rsav/model.hpp"

// Flat key=value run configuration.  Parsing is strict: unknown keys,
// duplicate keys, and keys that do not apply to the chosen model or scheme
// are all rejected with the offending key and line number, so a typo can
// never silently fall back to a default.

namespace rsav {

struct RunConfig {
    ModelSpec model;
    SchemeTag scheme = SchemeTag::SavCn;
    int nx = 64, ny = 64;
    double lx = 1.0, ly = 1.0;
    double dt = 1e-3;
    double T = 0.1;
    double eta = 0.95;
    std::string ic = "cosine";
    double ic_amp = 0.01;
    double phi0_hat = 0.0; // mean of the initial data, when given explicitly
    bool phi0_hat_set = false;
    std::uint64_t seed = 1;
    long series_every = 1;
    long snapshot_every = 0; // 0 disables field snapshots
    std::string snapshot_format = "text";
    std::string out_dir = "out";
    bool dealias = false;
};

/** Mean level of the initial data: the explicit phi0_hat key wins, otherwise
 *  the model's own preferred mean (0.4 for the copolymer model, else 0). */
inline double initial_mean(const RunConfig& cfg) {
    return cfg.phi0_hat_set ? cfg.phi0_hat : cfg.model.phi0_hat;
}

namespace detail {

struct ConfigEntry {
    std::string value;
    int line = 0;
    bool used = false;
};

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline std::string where(const std::string& key, const ConfigEntry& e) {
    return "key '" + key + "' (line " + std::to_string(e.line) + ")";
}

inline double to_double(const std::string& key, const ConfigEntry& e) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(e.value, &pos);
    } catch (const std::exception&) {
        throw ConfigError("expected a number for " + where(key, e) + ", got '" + e.value + "'");
    }
    if (pos != e.value.size())
        throw ConfigError("trailing characters after number for " + where(key, e));
    return v;
}

inline long to_long(const std::string& key, const ConfigEntry& e) {
    std::size_t pos = 0;
    long v = 0;
    try {
        v = std::stol(e.value, &pos);
    } catch (const std::exception&) {
        throw ConfigError("expected an integer for " + where(key, e) + ", got '" + e.value + "'");
    }
    if (pos != e.value.size())
        throw ConfigError("trailing characters after integer for " + where(key, e));
    return v;
}

inline std::uint64_t to_u64(const std::string& key, const ConfigEntry& e) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(e.value, &pos);
    } catch (const std::exception&) {
        throw ConfigError("expected an unsigned integer for " + where(key, e) + ", got '" +
                          e.value + "'");
    }
    if (pos != e.value.size())
        throw ConfigError("trailing characters after integer for " + where(key, e));
    return v;
}

inline bool to_bool(const std::string& key, const ConfigEntry& e) {
    if (e.value == "true") return true;
    if (e.value == "false") return false;
    throw ConfigError("expected true or false for " + where(key, e));
}

inline const std::map<std::string, std::set<std::string>>& model_keys() {
    static const std::map<std::string, std::set<std::string>> keys = {
        {"heat", {"D", "gamma0", "C0"}},
        {"allen-cahn", {"epsilon", "lambda", "gamma0", "C0"}},
        {"cahn-hilliard", {"epsilon", "lambda", "gamma0", "C0"}},
        {"mbe", {"epsilon", "gamma0", "C0"}},
        {"pfc", {"lambda", "a0", "b0", "gamma0", "C0"}},
        {"diblock", {"epsilon", "lambda", "sigma", "gamma0", "C0"}},
        {"split-double-well",
         {"epsilon", "lambda", "gamma0", "gamma1", "C0", "C1", "w1", "w2"}},
    };
    return keys;
}

inline const std::set<std::string>& common_keys() {
    static const std::set<std::string> keys = {
        "model",    "scheme",        "Nx",             "Ny",
        "Lx",       "Ly",            "dt",             "T",
        "eta",      "ic",            "ic_amp",         "phi0_hat",
        "seed",     "series_every",  "snapshot_every", "snapshot_format",
        "out_dir",  "dealias",
    };
    return keys;
}

} // namespace detail

inline RunConfig parse_config(std::istream& in) {
    std::map<std::string, detail::ConfigEntry> entries;
    std::string line;
    int ln = 0;
    while (std::getline(in, line)) {
        ++ln;
        const std::string s = detail::trim(line);
        if (s.empty() || s[0] == '#') continue;
        const std::size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected key=value on line " + std::to_string(ln));
        const std::string key = detail::trim(s.substr(0, eq));
        const std::string value = detail::trim(s.substr(eq + 1));
        if (key.empty()) throw ConfigError("empty key on line " + std::to_string(ln));
        if (value.empty())
            throw ConfigError("empty value for key '" + key + "' (line " + std::to_string(ln) +
                              ")");
        auto [it, inserted] = entries.emplace(key, detail::ConfigEntry{value, ln, false});
        if (!inserted)
            throw ConfigError("duplicate key '" + key + "' (line " + std::to_string(ln) +
                              "), first set on line " + std::to_string(it->second.line));
    }

    auto take = [&entries](const std::string& key) -> detail::ConfigEntry* {
        auto it = entries.find(key);
        if (it == entries.end()) return nullptr;
        it->second.used = true;
        return &it->second;
    };

    RunConfig cfg;

    detail::ConfigEntry* model_e = take("model");
    if (!model_e) throw ConfigError("missing required key 'model'");
    ModelKind kind;
    try {
        kind = model_from_name(model_e->value);
    } catch (const CatalogError& err) {
        throw ConfigError(std::string(err.what()) + " (line " + std::to_string(model_e->line) +
                          ")");
    }
    cfg.model = default_model(kind);

    detail::ConfigEntry* scheme_e = take("scheme");
    if (!scheme_e) throw ConfigError("missing required key 'scheme'");
    try {
        cfg.scheme = scheme_from_name(scheme_e->value);
    } catch (const ConfigError&) {
        throw ConfigError("unknown scheme '" + scheme_e->value + "' (line " +
                          std::to_string(scheme_e->line) + ")");
    }

    // every remaining key must be either common or a parameter of this model
    const std::set<std::string>& mine = detail::model_keys().at(model_name(kind));
    for (const auto& [key, entry] : entries) {
        if (detail::common_keys().count(key) || mine.count(key)) continue;
        bool someone_elses = false;
        for (const auto& [name, keys] : detail::model_keys())
            if (keys.count(key)) someone_elses = true;
        if (someone_elses)
            throw ConfigError("key '" + key + "' does not apply to model '" +
                              model_name(kind) + "' (line " + std::to_string(entry.line) + ")");
        throw ConfigError("unknown key '" + key + "' (line " + std::to_string(entry.line) + ")");
    }

    if (auto* e = take("Nx")) cfg.nx = static_cast<int>(detail::to_long("Nx", *e));
    if (auto* e = take("Ny")) cfg.ny = static_cast<int>(detail::to_long("Ny", *e));
    if (auto* e = take("Lx")) cfg.lx = detail::to_double("Lx", *e);
    if (auto* e = take("Ly")) cfg.ly = detail::to_double("Ly", *e);
    if (auto* e = take("dt")) cfg.dt = detail::to_double("dt", *e);
    if (auto* e = take("T")) cfg.T = detail::to_double("T", *e);
    if (auto* e = take("ic")) cfg.ic = e->value;
    if (auto* e = take("ic_amp")) cfg.ic_amp = detail::to_double("ic_amp", *e);
    if (auto* e = take("seed")) cfg.seed = detail::to_u64("seed", *e);
    if (auto* e = take("series_every")) cfg.series_every = detail::to_long("series_every", *e);
    if (auto* e = take("snapshot_every"))
        cfg.snapshot_every = detail::to_long("snapshot_every", *e);
    if (auto* e = take("snapshot_format")) cfg.snapshot_format = e->value;
    if (auto* e = take("out_dir")) cfg.out_dir = e->value;
    if (auto* e = take("dealias")) cfg.dealias = detail::to_bool("dealias", *e);

    detail::ConfigEntry* eta_e = take("eta");
    if (eta_e) {
        if (!is_relaxed(cfg.scheme))
            throw ConfigError("key 'eta' only applies to relaxed schemes (line " +
                              std::to_string(eta_e->line) + ")");
        cfg.eta = detail::to_double("eta", *eta_e);
    }

    detail::ConfigEntry* mean_e = take("phi0_hat");
    if (mean_e) {
        cfg.phi0_hat = detail::to_double("phi0_hat", *mean_e);
        cfg.phi0_hat_set = true;
        cfg.model.phi0_hat = cfg.phi0_hat;
    }

    // model parameters
    if (auto* e = take("D")) cfg.model.D = detail::to_double("D", *e);
    if (auto* e = take("epsilon")) cfg.model.epsilon = detail::to_double("epsilon", *e);
    if (auto* e = take("lambda")) cfg.model.lambda = detail::to_double("lambda", *e);
    if (auto* e = take("a0")) cfg.model.a0 = detail::to_double("a0", *e);
    if (auto* e = take("b0")) cfg.model.b0 = detail::to_double("b0", *e);
    if (auto* e = take("sigma")) cfg.model.sigma = detail::to_double("sigma", *e);
    if (auto* e = take("gamma0")) cfg.model.gamma[0] = detail::to_double("gamma0", *e);
    if (auto* e = take("C0")) cfg.model.C[0] = detail::to_double("C0", *e);
    if (kind == ModelKind::SplitDoubleWell) {
        if (auto* e = take("gamma1")) cfg.model.gamma[1] = detail::to_double("gamma1", *e);
        if (auto* e = take("C1")) cfg.model.C[1] = detail::to_double("C1", *e);
        if (auto* e = take("w1")) cfg.model.w[0] = detail::to_double("w1", *e);
        if (auto* e = take("w2")) cfg.model.w[1] = detail::to_double("w2", *e);
    }

    // cross-key validation
    if (cfg.nx < 4 || cfg.nx % 2 != 0 || cfg.ny < 4 || cfg.ny % 2 != 0)
        throw ConfigError("Nx and Ny must be even and at least 4");
    if (!(cfg.lx > 0.0) || !(cfg.ly > 0.0)) throw ConfigError("Lx and Ly must be positive");
    if (!(cfg.dt > 0.0)) throw ConfigError("dt must be positive");
    if (!(cfg.T > 0.0)) throw ConfigError("T must be positive");
    if (!(cfg.eta >= 0.0 && cfg.eta <= 1.0)) throw ConfigError("eta must lie in [0,1]");
    if (cfg.series_every < 1) throw ConfigError("series_every must be at least 1");
    if (cfg.snapshot_every < 0) throw ConfigError("snapshot_every must not be negative");
    if (cfg.snapshot_format != "text" && cfg.snapshot_format != "binary")
        throw ConfigError("snapshot_format must be text or binary");

    if (cfg.ic != "cosine" && cfg.ic != "star" && cfg.ic != "random")
        throw ConfigError("ic must be cosine, star, or random");
    if (cfg.ic == "star") {
        auto star_rejects = [&entries](const char* key) {
            auto it = entries.find(key);
            if (it != entries.end())
                throw ConfigError(std::string("key '") + key +
                                  "' does not apply to ic = star (line " +
                                  std::to_string(it->second.line) + ")");
        };
        star_rejects("ic_amp");
        star_rejects("phi0_hat");
        star_rejects("seed");
        if (!(cfg.model.epsilon > 0.0))
            throw ConfigError("ic = star needs a model with an interface width (epsilon)");
    }
    if (cfg.ic != "random") {
        auto it = entries.find("seed");
        if (it != entries.end() && cfg.ic == "cosine")
            throw ConfigError("key 'seed' only applies to ic = random (line " +
                              std::to_string(it->second.line) + ")");
    }

    try {
        validate_model(cfg.model);
    } catch (const CatalogError& err) {
        throw ConfigError(err.what());
    }
    return cfg;
}

inline RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in);
}

} // namespace rsav

#endif

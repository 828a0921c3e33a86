// config.hpp — flat dotted-key configuration with strict validation
//
// Format: one `key = value` per line, `#` comments. Units are encoded in key
// names (_mhz, _ghz, _ns, _us); internally everything is converted to rad/s
// and seconds. Every key must be known; unknown keys, bad values, and
// violated invariants are all collected and reported together. Any key can be
// overridden from the environment as GA_<KEY> with dots mapped to
// underscores and letters upper-cased (e.g. GA_LANDSCAPE_BETA).

#pragma once

#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "giantatom/driven.hpp"
#include "giantatom/landscape.hpp"
#include "giantatom/relaxation.hpp"

namespace giantatom {

enum class KeyType { real, integer, uinteger, boolean, text };

struct KeySpec {
    std::string key;
    KeyType type = KeyType::real;
    std::string default_value;
    std::vector<std::string> choices;  // for text keys; empty = free-form
};

// default landscape reproduces the device anchors: the 1.11 MHz upper
// envelope at 4.912 GHz and the 27.2 kHz total at 1.526 GHz
inline const std::vector<KeySpec>& config_registry() {
    static const std::vector<KeySpec> registry = {
        {"landscape.gamma_peak_mhz", KeyType::real, "0.59938527591220492", {}},
        {"landscape.omega_center_ghz", KeyType::real, "5.0", {}},
        {"landscape.n_pairs", KeyType::integer, "5", {}},
        {"landscape.beta", KeyType::real, "0.78", {}},
        {"landscape.delay_t_ns", KeyType::real, "125.0", {}},
        {"landscape.gamma_in_c0_mhz", KeyType::real, "0.00065960311552487822", {}},
        {"landscape.gamma_in_slope", KeyType::real, "1.4116530310357314e-05", {}},
        {"landscape.band_lo_ghz", KeyType::real, "1.0", {}},
        {"landscape.band_hi_ghz", KeyType::real, "6.5", {}},
        {"solver.dt_ns", KeyType::real, "0.125", {}},
        {"solver.oracle_dt_ns", KeyType::real, "0.0625", {}},
        {"solver.n_modes", KeyType::integer, "4000", {}},
        {"solver.bandwidth_ghz", KeyType::real, "4.0", {}},
        {"solver.convention", KeyType::text, "amplitude_half_rates",
         {"amplitude_half_rates", "population_rates"}},
        {"solver.secular", KeyType::boolean, "false", {}},
        {"solver.extra_dephasing_mhz", KeyType::real, "0.0", {}},
        {"solver.seed", KeyType::uinteger, "12345", {}},
        {"sweep.quantity", KeyType::text, "gamma_eff", {"gamma_eff", "pe_trace", "steady", "map"}},
        {"sweep.preset", KeyType::text, "", {}},
        {"sweep.axis1.name", KeyType::text, "omega_q_ghz", {}},
        {"sweep.axis1.start", KeyType::real, "4.87", {}},
        {"sweep.axis1.stop", KeyType::real, "4.91", {}},
        {"sweep.axis1.count", KeyType::integer, "1001", {}},
        {"sweep.axis2.name", KeyType::text, "delta_mhz", {}},
        {"sweep.axis2.start", KeyType::real, "-20.0", {}},
        {"sweep.axis2.stop", KeyType::real, "20.0", {}},
        {"sweep.axis2.count", KeyType::integer, "81", {}},
        {"sweep.omega_q_ghz", KeyType::real, "4.891", {}},
        {"sweep.rabi_mhz", KeyType::real, "2.5", {}},
        {"sweep.delta_mhz", KeyType::real, "0.0", {}},
        {"sweep.duration_us", KeyType::real, "3.8", {}},
        {"sweep.t_max_ns", KeyType::real, "750.0", {}},
        {"sweep.time_samples", KeyType::integer, "256", {}},
        {"sweep.relax_solver", KeyType::text, "series", {"series", "dde", "oracle"}},
    };
    return registry;
}

struct ConfigError : std::runtime_error {
    std::vector<std::string> errors;
    explicit ConfigError(std::vector<std::string> errs)
        : std::runtime_error(join(errs)), errors(std::move(errs)) {}

    static std::string join(const std::vector<std::string>& errs) {
        std::string s = "configuration invalid:";
        for (const auto& e : errs) s += "\n  " + e;
        return s;
    }
};

class RunConfig {
  public:
    // raw key -> value in config units (as strings, canonical form for hashing)
    const std::map<std::string, std::string>& values() const { return values_; }

    double real(const std::string& key) const { return std::stod(at(key)); }
    long integer(const std::string& key) const { return std::stol(at(key)); }
    std::uint64_t uinteger(const std::string& key) const { return std::stoull(at(key)); }
    bool boolean(const std::string& key) const { return at(key) == "true"; }
    const std::string& text(const std::string& key) const { return at(key); }

    CouplingLandscape landscape() const {
        CouplingLandscape land;
        land.idt.gamma_peak = mhz_to_rad(real("landscape.gamma_peak_mhz"));
        land.idt.omega_center = ghz_to_rad(real("landscape.omega_center_ghz"));
        land.idt.n_pairs = static_cast<int>(integer("landscape.n_pairs"));
        land.beta = real("landscape.beta");
        land.delay = ns_to_s(real("landscape.delay_t_ns"));
        land.loss.c0 = mhz_to_rad(real("landscape.gamma_in_c0_mhz"));
        land.loss.c1 = real("landscape.gamma_in_slope");
        land.loss.band_lo = ghz_to_rad(real("landscape.band_lo_ghz"));
        land.loss.band_hi = ghz_to_rad(real("landscape.band_hi_ghz"));
        return land;
    }

    RateConvention convention() const {
        return text("solver.convention") == "population_rates" ? RateConvention::population_rates
                                                               : RateConvention::amplitude_half_rates;
    }

    GeneratorOptions generator_options() const {
        return {boolean("solver.secular"), mhz_to_rad(real("solver.extra_dephasing_mhz"))};
    }

    std::uint64_t seed() const { return uinteger("solver.seed"); }

    // canonical sorted key=value text; basis for the config hash
    std::string canonical() const {
        std::string s;
        for (const auto& [k, v] : values_) s += k + " = " + v + "\n";
        return s;
    }

    std::uint64_t hash() const {  // FNV-1a 64
        std::uint64_t h = 14695981039346656037ULL;
        for (unsigned char c : canonical()) {
            h ^= c;
            h *= 1099511628211ULL;
        }
        return h;
    }

    // key -> value converted to SI (rad/s, s); unit suffix stripped from the key
    std::map<std::string, double> resolved_si() const {
        std::map<std::string, double> out;
        for (const auto& spec : config_registry()) {
            if (spec.type == KeyType::text || spec.type == KeyType::boolean) continue;
            const std::string& key = spec.key;
            const double v = real(key);
            auto ends_with = [&](const char* suf) {
                const std::string s(suf);
                return key.size() > s.size() && key.compare(key.size() - s.size(), s.size(), s) == 0;
            };
            auto strip = [&](std::size_t n) { return key.substr(0, key.size() - n); };
            if (ends_with("_mhz")) out[strip(4)] = mhz_to_rad(v);
            else if (ends_with("_ghz")) out[strip(4)] = ghz_to_rad(v);
            else if (ends_with("_ns")) out[strip(3)] = ns_to_s(v);
            else if (ends_with("_us")) out[strip(3)] = v * 1e-6;
            else out[key] = v;
        }
        return out;
    }

    void set(const std::string& key, const std::string& value) { values_[key] = value; }

  private:
    const std::string& at(const std::string& key) const {
        auto it = values_.find(key);
        if (it == values_.end()) throw std::invalid_argument("unknown config key: " + key);
        return it->second;
    }

    friend RunConfig validate_config(const std::string&, bool);
    std::map<std::string, std::string> values_;
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline std::string env_name(const std::string& key) {
    std::string s = "GA_";
    for (char c : key) s += (c == '.') ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
}

inline bool parse_value(const KeySpec& spec, const std::string& raw, std::string& canon,
                        std::string& err) {
    const std::string v = trim(raw);
    switch (spec.type) {
        case KeyType::real: {
            try {
                std::size_t pos = 0;
                (void)std::stod(v, &pos);
                if (pos != v.size()) throw std::invalid_argument("trailing");
            } catch (...) {
                err = "expected a number";
                return false;
            }
            canon = v;
            return true;
        }
        case KeyType::integer:
        case KeyType::uinteger: {
            try {
                std::size_t pos = 0;
                if (spec.type == KeyType::integer) {
                    (void)std::stol(v, &pos);
                } else {
                    if (!v.empty() && v[0] == '-') throw std::invalid_argument("negative");
                    (void)std::stoull(v, &pos);
                }
                if (pos != v.size()) throw std::invalid_argument("trailing");
            } catch (...) {
                err = (spec.type == KeyType::integer) ? "expected an integer" : "expected an unsigned integer";
                return false;
            }
            canon = v;
            return true;
        }
        case KeyType::boolean: {
            if (v == "true" || v == "false") {
                canon = v;
                return true;
            }
            err = "expected true or false";
            return false;
        }
        case KeyType::text: {
            if (!spec.choices.empty()) {
                for (const auto& c : spec.choices)
                    if (v == c) {
                        canon = v;
                        return true;
                    }
                err = "expected one of {";
                for (std::size_t i = 0; i < spec.choices.size(); ++i)
                    err += (i ? ", " : "") + spec.choices[i];
                err += "}";
                return false;
            }
            canon = v;
            return true;
        }
    }
    err = "unhandled type";
    return false;
}

} // namespace detail

// Strict parse of a config document. All errors are reported at once; the
// environment (GA_*) overrides file values; defaults fill the rest. With
// check_invariants the cross-field physics invariants are enforced too.
inline RunConfig validate_config(const std::string& text, bool check_invariants = true) {
    std::vector<std::string> errors;
    const auto& registry = config_registry();
    auto find_spec = [&](const std::string& key) -> const KeySpec* {
        for (const auto& s : registry)
            if (s.key == key) return &s;
        return nullptr;
    };

    RunConfig cfg;
    for (const auto& spec : registry) cfg.values_[spec.key] = spec.default_value;

    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = detail::trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            std::ostringstream os;
            os << "line " << line_no << ", column " << line.size() + 1
               << ": expected 'key = value'";
            errors.push_back(os.str());
            continue;
        }
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string raw = line.substr(eq + 1);
        const KeySpec* spec = find_spec(key);
        if (spec == nullptr) {
            std::ostringstream os;
            os << key << ": unknown key (line " << line_no << ")";
            errors.push_back(os.str());
            continue;
        }
        std::string canon, err;
        if (!detail::parse_value(*spec, raw, canon, err)) {
            std::ostringstream os;
            os << key << ": " << err << " (line " << line_no << ")";
            errors.push_back(os.str());
            continue;
        }
        cfg.values_[key] = canon;
    }

    for (const auto& spec : registry) {
        if (const char* env = std::getenv(detail::env_name(spec.key).c_str())) {
            std::string canon, err;
            if (!detail::parse_value(spec, env, canon, err))
                errors.push_back(spec.key + ": " + err + " (from " + detail::env_name(spec.key) + ")");
            else
                cfg.values_[spec.key] = canon;
        }
    }

    if (errors.empty() && check_invariants) {
        auto check = [&](bool ok, const std::string& msg) {
            if (!ok) errors.push_back(msg);
        };
        const double beta = cfg.real("landscape.beta");
        check(beta >= 0.0 && beta <= 1.0, "landscape.beta: beta out of [0,1]");
        check(cfg.real("landscape.delay_t_ns") > 0.0, "landscape.delay_t_ns: must be positive");
        check(cfg.integer("landscape.n_pairs") >= 1, "landscape.n_pairs: must be >= 1");
        check(cfg.real("landscape.gamma_peak_mhz") >= 0.0, "landscape.gamma_peak_mhz: must be >= 0");
        check(cfg.real("landscape.omega_center_ghz") > 0.0, "landscape.omega_center_ghz: must be positive");
        const double lo = cfg.real("landscape.band_lo_ghz"), hi = cfg.real("landscape.band_hi_ghz");
        check(lo > 0.0 && hi > lo, "landscape.band_lo_ghz/band_hi_ghz: need 0 < lo < hi");
        if (lo > 0.0 && hi > lo) {
            const double c0 = mhz_to_rad(cfg.real("landscape.gamma_in_c0_mhz"));
            const double c1 = cfg.real("landscape.gamma_in_slope");
            check(c0 + c1 * ghz_to_rad(lo) >= 0.0 && c0 + c1 * ghz_to_rad(hi) >= 0.0,
                  "landscape.gamma_in_c0_mhz/gamma_in_slope: gamma_in negative inside band");
        }
        check(cfg.real("solver.dt_ns") > 0.0, "solver.dt_ns: must be positive");
        check(cfg.real("solver.oracle_dt_ns") > 0.0, "solver.oracle_dt_ns: must be positive");
        check(cfg.integer("solver.n_modes") >= 100, "solver.n_modes: must be >= 100");
        check(cfg.real("solver.bandwidth_ghz") > 0.0, "solver.bandwidth_ghz: must be positive");
        check(cfg.real("solver.extra_dephasing_mhz") >= 0.0, "solver.extra_dephasing_mhz: must be >= 0");
        for (const char* ax : {"sweep.axis1", "sweep.axis2"}) {
            const std::string a(ax);
            check(cfg.integer(a + ".count") >= 1, a + ".count: must be >= 1");
            check(cfg.real(a + ".start") <= cfg.real(a + ".stop"), a + ": start > stop");
        }
        check(cfg.integer("sweep.time_samples") >= 2, "sweep.time_samples: must be >= 2");
        const std::string preset = cfg.text("sweep.preset");
        if (!preset.empty()) {
            static const std::vector<std::string> known = {"fig2b", "fig2c", "fig3b",
                                                           "fig3d", "fig3f", "fig4i"};
            bool ok = false;
            for (const auto& p : known) ok = ok || p == preset;
            check(ok, "sweep.preset: unknown preset '" + preset + "'");
        }
    }

    if (!errors.empty()) throw ConfigError(std::move(errors));
    return cfg;
}

} // namespace giantatom

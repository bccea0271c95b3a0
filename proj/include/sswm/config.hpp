#pragma once

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "params.hpp"

namespace sswm {

// key = value lines, # comments, blank lines ignored. Keys are literal and
// each may appear once.
struct ConfigDoc {
    std::map<std::string, std::string> kv;
    std::vector<std::string> order;
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline double parse_double(const std::string& key, const std::string& v) {
    errno = 0;
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || trim(end) != "" || errno == ERANGE)
        throw ConfigError("key '" + key + "': cannot parse '" + v + "' as a number");
    return x;
}

inline long parse_long(const std::string& key, const std::string& v) {
    errno = 0;
    char* end = nullptr;
    const long x = std::strtol(v.c_str(), &end, 10);
    if (end == v.c_str() || trim(end) != "" || errno == ERANGE)
        throw ConfigError("key '" + key + "': cannot parse '" + v + "' as an integer");
    return x;
}

inline bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "off" || v == "no") return false;
    throw ConfigError("key '" + key + "': cannot parse '" + v + "' as a boolean");
}

}  // namespace detail

inline ConfigDoc parse_config_text(const std::string& text) {
    ConfigDoc doc;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected 'key = value', got '" + line + "'");
        std::string key = detail::trim(line.substr(0, eq));
        std::string val = detail::trim(line.substr(eq + 1));
        if (val.size() >= 2 && val.front() == '"' && val.back() == '"')
            val = val.substr(1, val.size() - 2);
        if (key.empty() || val.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key or value");
        if (doc.kv.count(key))
            throw ConfigError("config key '" + key + "' appears more than once");
        doc.kv[key] = val;
        doc.order.push_back(key);
    }
    return doc;
}

inline ConfigDoc load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

struct GridOverrides {
    std::optional<double> center1, center2, span1, span2;
    std::optional<int> n1, n2;
    bool any() const { return center1 || center2 || span1 || span2 || n1 || n2; }
    void apply(FrequencyGrid2D& g) const {
        if (center1) g.nu1_center = *center1;
        if (center2) g.nu2_center = *center2;
        if (span1) g.nu1_span = *span1;
        if (span2) g.nu2_span = *span2;
        if (n1) g.n1 = *n1;
        if (n2) g.n2 = *n2;
    }
};

struct ResolvedConfig {
    SystemParams params;
    std::string preset;  // empty when built from bare keys
    bool has_preset_grid = false;
    FrequencyGrid2D grid;  // meaningful only when has_preset_grid
    GridOverrides grid_overrides;
    bool chi5_prefactor_explicit = false;
    std::size_t max_grid_points = default_max_points;
};

// Applies a parsed document. Frequencies arrive in MHz by default
// (angular = true reads them as Mrad/s; units = gamma31 takes them already in
// internal units). gamma_31 in MHz mode re-anchors the unit system instead of
// changing the internal value. Primary radiative rates re-derive the pooled
// dephasings; explicit dephasing keys then override.
inline ResolvedConfig resolve_config(const ConfigDoc& doc) {
    static const std::vector<std::string> known = {
        "preset", "units", "angular",
        "gamma_21", "gamma_31", "gamma_32", "gamma_41", "gamma_42", "gamma_43",
        "gamma_51", "gamma_52", "gamma_53", "gamma_54",
        "delta_p", "delta_c1", "delta_c2",
        "omega_c1", "omega_c2", "omega_c1_re", "omega_c1_im", "omega_c2_re", "omega_c2_im",
        "omega_c1_phase_rad", "omega_c2_phase_rad",
        "optical_depth", "length_cm", "length_m", "central_freq_s3", "k_offset", "gamma31_si",
        "chi5_prefactor", "chi5_unconjugated", "halve_absorption", "literal_omega_tr",
        "grid_n1", "grid_n2", "grid_center1", "grid_center2", "grid_span1", "grid_span2",
        "max_grid_points"};
    for (const auto& k : doc.order) {
        bool ok = false;
        for (const auto& kn : known)
            if (k == kn) { ok = true; break; }
        if (!ok) throw ConfigError("unknown config key '" + k + "'");
    }
    auto has = [&doc](const char* k) { return doc.kv.count(k) != 0; };
    auto raw = [&doc](const char* k) { return doc.kv.at(k); };

    ResolvedConfig rc;
    if (has("preset")) {
        const Preset ps = load_preset(raw("preset"));
        rc.preset = ps.name;
        rc.params = ps.params;
        rc.grid = ps.grid;
        rc.has_preset_grid = true;
    } else {
        derive_dephasings(rc.params);
    }
    SystemParams& p = rc.params;

    bool gamma_units = false;
    if (has("units")) {
        const std::string u = raw("units");
        if (u == "gamma31") gamma_units = true;
        else if (u == "mhz") gamma_units = false;
        else throw ConfigError("units must be 'mhz' or 'gamma31', got '" + u + "'");
    }
    bool angular = false;
    if (has("angular")) angular = detail::parse_bool("angular", raw("angular"));
    if (gamma_units && angular)
        throw ConfigError("'angular' only applies to MHz units");

    // anchor first: conversions of every other frequency depend on it
    if (has("gamma31_si")) p.gamma31_si = detail::parse_double("gamma31_si", raw("gamma31_si"));
    if (has("gamma_31")) {
        const double v = detail::parse_double("gamma_31", raw("gamma_31"));
        if (gamma_units) {
            p.gamma_31 = v;
        } else {
            p.gamma31_si = angular ? v * 1e6 : 2.0 * M_PI * v * 1e6;
            p.gamma_31 = 1.0;
        }
    }
    auto freq = [&](const char* k) {
        const double v = detail::parse_double(k, raw(k));
        if (gamma_units) return v;
        const double si = angular ? v * 1e6 : 2.0 * M_PI * v * 1e6;
        return si / p.gamma31_si * p.gamma_31;
    };

    const bool touched_primary =
        has("gamma_21") || has("gamma_31") || has("gamma_41") || has("gamma_51");
    if (has("gamma_21")) p.gamma_21 = freq("gamma_21");
    if (has("gamma_41")) p.gamma_41 = freq("gamma_41");
    if (has("gamma_51")) p.gamma_51 = freq("gamma_51");
    if (touched_primary) derive_dephasings(p);
    if (has("gamma_32")) p.gamma_32 = freq("gamma_32");
    if (has("gamma_42")) p.gamma_42 = freq("gamma_42");
    if (has("gamma_43")) p.gamma_43 = freq("gamma_43");
    if (has("gamma_52")) p.gamma_52 = freq("gamma_52");
    if (has("gamma_53")) p.gamma_53 = freq("gamma_53");
    if (has("gamma_54")) p.gamma_54 = freq("gamma_54");

    if (has("delta_p")) p.delta_p = freq("delta_p");
    if (has("delta_c1")) p.delta_c1 = freq("delta_c1");
    if (has("delta_c2")) p.delta_c2 = freq("delta_c2");

    if ((has("omega_c1") && (has("omega_c1_re") || has("omega_c1_im"))) ||
        (has("omega_c2") && (has("omega_c2_re") || has("omega_c2_im"))))
        throw ConfigError("give a coupling either as magnitude (+phase) or as re/im, not both");
    if (has("omega_c1_re") || has("omega_c1_im")) {
        p.omega_c1 = std::complex<double>(has("omega_c1_re") ? freq("omega_c1_re") : 0.0,
                                          has("omega_c1_im") ? freq("omega_c1_im") : 0.0);
    } else if (has("omega_c1")) {
        p.omega_c1 = freq("omega_c1");
    }
    if (has("omega_c1_phase_rad"))
        p.omega_c1 = std::polar(std::abs(p.omega_c1),
                                detail::parse_double("omega_c1_phase_rad", raw("omega_c1_phase_rad")));
    if (has("omega_c2_re") || has("omega_c2_im")) {
        p.omega_c2 = std::complex<double>(has("omega_c2_re") ? freq("omega_c2_re") : 0.0,
                                          has("omega_c2_im") ? freq("omega_c2_im") : 0.0);
    } else if (has("omega_c2")) {
        p.omega_c2 = freq("omega_c2");
    }
    if (has("omega_c2_phase_rad"))
        p.omega_c2 = std::polar(std::abs(p.omega_c2),
                                detail::parse_double("omega_c2_phase_rad", raw("omega_c2_phase_rad")));

    if (has("optical_depth")) p.optical_depth = detail::parse_double("optical_depth", raw("optical_depth"));
    if (has("length_cm") && has("length_m"))
        throw ConfigError("give the medium length as length_cm or length_m, not both");
    if (has("length_cm")) p.length_L = detail::parse_double("length_cm", raw("length_cm")) / 100.0;
    if (has("length_m")) p.length_L = detail::parse_double("length_m", raw("length_m"));
    if (has("central_freq_s3")) p.central_freq_s3 = detail::parse_double("central_freq_s3", raw("central_freq_s3"));
    if (has("k_offset")) p.k_offset = detail::parse_double("k_offset", raw("k_offset"));
    if (has("chi5_prefactor")) {
        p.chi5_prefactor = detail::parse_double("chi5_prefactor", raw("chi5_prefactor"));
        rc.chi5_prefactor_explicit = true;
    }
    if (has("chi5_unconjugated")) p.chi5_unconjugated = detail::parse_bool("chi5_unconjugated", raw("chi5_unconjugated"));
    if (has("halve_absorption")) p.halve_absorption = detail::parse_bool("halve_absorption", raw("halve_absorption"));
    if (has("literal_omega_tr")) p.literal_omega_tr = detail::parse_bool("literal_omega_tr", raw("literal_omega_tr"));

    if (has("grid_n1")) rc.grid_overrides.n1 = int(detail::parse_long("grid_n1", raw("grid_n1")));
    if (has("grid_n2")) rc.grid_overrides.n2 = int(detail::parse_long("grid_n2", raw("grid_n2")));
    if (has("grid_center1")) rc.grid_overrides.center1 = freq("grid_center1");
    if (has("grid_center2")) rc.grid_overrides.center2 = freq("grid_center2");
    if (has("grid_span1")) rc.grid_overrides.span1 = freq("grid_span1");
    if (has("grid_span2")) rc.grid_overrides.span2 = freq("grid_span2");
    if (has("max_grid_points")) {
        const long v = detail::parse_long("max_grid_points", raw("max_grid_points"));
        if (v <= 0) throw ConfigError("max_grid_points must be positive");
        rc.max_grid_points = std::size_t(v);
    }

    validate(p);
    if (rc.has_preset_grid) rc.grid_overrides.apply(rc.grid);
    return rc;
}

// Writes the exact internal state: units = gamma31 and %.17g everywhere, so
// resolve_config(parse_config_text(serialize_params(p))) reproduces every
// field bit for bit.
inline std::string serialize_params(const SystemParams& p) {
    std::string s = "units = gamma31\n";
    auto put = [&s](const char* k, double v) {
        s += k;
        s += " = ";
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        s += buf;
        s += '\n';
    };
    auto putb = [&s](const char* k, bool v) {
        s += k;
        s += " = ";
        s += v ? "true" : "false";
        s += '\n';
    };
    put("gamma31_si", p.gamma31_si);
    put("gamma_31", p.gamma_31);
    put("gamma_21", p.gamma_21);
    put("gamma_41", p.gamma_41);
    put("gamma_51", p.gamma_51);
    put("gamma_32", p.gamma_32);
    put("gamma_42", p.gamma_42);
    put("gamma_43", p.gamma_43);
    put("gamma_52", p.gamma_52);
    put("gamma_53", p.gamma_53);
    put("gamma_54", p.gamma_54);
    put("delta_p", p.delta_p);
    put("delta_c1", p.delta_c1);
    put("delta_c2", p.delta_c2);
    put("omega_c1_re", p.omega_c1.real());
    put("omega_c1_im", p.omega_c1.imag());
    put("omega_c2_re", p.omega_c2.real());
    put("omega_c2_im", p.omega_c2.imag());
    put("length_m", p.length_L);
    put("optical_depth", p.optical_depth);
    put("central_freq_s3", p.central_freq_s3);
    put("k_offset", p.k_offset);
    put("chi5_prefactor", p.chi5_prefactor);
    putb("chi5_unconjugated", p.chi5_unconjugated);
    putb("halve_absorption", p.halve_absorption);
    putb("literal_omega_tr", p.literal_omega_tr);
    return s;
}

}

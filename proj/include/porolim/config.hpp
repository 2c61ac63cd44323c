#pragma once

#include <cctype>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "porolim/errors.hpp"
#include "porolim/grid.hpp"
#include "porolim/model.hpp"
#include "porolim/solver.hpp"
#include "porolim/sources.hpp"
#include "porolim/transforms.hpp"

namespace porolim {

/// A source field as configured: "dirac <x0> <w>", "cells <v0> <v1> ...",
/// or "none".
struct SourceConfig {
    std::string kind = "none";
    double x0 = 0.0;
    double strength = 0.0;
    std::vector<double> cells;

    SourceField to_field() const {
        if (kind == "dirac") return Dirac{x0, strength};
        if (kind == "cells") return cells;
        return std::vector<double>{};
    }
};

/// Fully resolved run parameters; what the manifest stores.
struct RunConfig {
    std::string run_id = "run";
    std::string model = "paper-test";
    double power_a = 2.0, power_b = 2.0, power_pi0 = 0.1, power_gamma = 0.5;

    std::string scheme = "two-phase"; // or "limit"
    double mu = 1e-8;
    std::string limit_mode = "obstacle"; // or "faithful"
    bool symmetrized = false;

    std::size_t n_cells = 100;
    double T = 0.01;
    std::vector<double> snapshots{0.01};
    double sigma = 0.45;
    double K_nominal = 1e-4;

    SourceConfig injection{"dirac", 0.0, 1.0, {}};
    SourceConfig extraction{"dirac", 1.0, 1.0, {}};
    double c = 0.7;

    std::string u0_kind = "const"; // "const v" or "step x v_left v_right"
    double u0_const = 1.0;
    double u0_step_x = 1.0 / 3.0;
    double u0_left = 0.1;
    double u0_right = 0.7;

    std::string out_dir = ".";
    std::string recording = "snapshots"; // or "dense"
};

inline RunConfig preset(const std::string& name) {
    RunConfig c;
    c.run_id = name;
    if (name == "test1") {
        c.u0_kind = "const";
        c.u0_const = 1.0;
        c.c = 0.7;
        c.T = 0.01;
        c.snapshots = {0.01};
    } else if (name == "test2") {
        c.u0_kind = "step";
        c.c = 0.7;
        c.T = 0.1;
        c.snapshots = {0.01, 0.1};
    } else if (name == "test3") {
        c.u0_kind = "step";
        c.c = 1.0;
        c.T = 0.1;
        c.snapshots = {0.01, 0.1};
    } else {
        throw ConfigError("unknown preset '" + name + "' (have test1, test2, test3)");
    }
    return c;
}

inline std::vector<std::string> preset_names() { return {"test1", "test2", "test3"}; }

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

inline double parse_num(const std::string& tok, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("bad numeric value '" + tok + "' for key '" + key + "'");
    }
}

inline std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream iss(s);
    std::vector<std::string> out;
    std::string tok;
    while (iss >> tok) out.push_back(tok);
    return out;
}

inline SourceConfig parse_source(const std::string& val, const std::string& key) {
    const auto toks = split_ws(val);
    if (toks.empty()) throw ConfigError("empty source spec for '" + key + "'");
    SourceConfig sc;
    sc.kind = toks[0];
    if (sc.kind == "none") {
        if (toks.size() != 1) throw ConfigError("'none' source takes no arguments");
    } else if (sc.kind == "dirac") {
        if (toks.size() != 3)
            throw ConfigError("dirac source needs '<x0> <strength>' for '" + key + "'");
        sc.x0 = parse_num(toks[1], key);
        sc.strength = parse_num(toks[2], key);
    } else if (sc.kind == "cells") {
        for (std::size_t i = 1; i < toks.size(); ++i)
            sc.cells.push_back(parse_num(toks[i], key));
    } else {
        throw ConfigError("unknown source kind '" + sc.kind + "' for '" + key + "'");
    }
    return sc;
}

} // namespace detail

inline void apply_key(RunConfig& c, const std::string& key, const std::string& val) {
    using detail::parse_num;
    if (key == "run_id") c.run_id = val;
    else if (key == "model") {
        const auto toks = detail::split_ws(val);
        if (toks.empty()) throw ConfigError("empty model spec");
        c.model = toks[0];
        if (c.model == "power-law") {
            if (toks.size() != 5)
                throw ConfigError("power-law model needs '<a> <b> <pi0> <gamma>'");
            c.power_a = parse_num(toks[1], key);
            c.power_b = parse_num(toks[2], key);
            c.power_pi0 = parse_num(toks[3], key);
            c.power_gamma = parse_num(toks[4], key);
        } else if (c.model != "paper-test") {
            throw ConfigError("unknown model '" + c.model + "'");
        }
    } else if (key == "scheme") c.scheme = val;
    else if (key == "mu") c.mu = parse_num(val, key);
    else if (key == "limit.mode") c.limit_mode = val;
    else if (key == "symmetrized") c.symmetrized = (val == "true" || val == "1");
    else if (key == "n_cells") c.n_cells = static_cast<std::size_t>(parse_num(val, key));
    else if (key == "T") c.T = parse_num(val, key);
    else if (key == "snapshots") {
        c.snapshots.clear();
        for (const auto& t : detail::split_ws(val)) c.snapshots.push_back(parse_num(t, key));
    } else if (key == "sigma") c.sigma = parse_num(val, key);
    else if (key == "K_nominal") c.K_nominal = parse_num(val, key);
    else if (key == "sources.injection") c.injection = detail::parse_source(val, key);
    else if (key == "sources.extraction") c.extraction = detail::parse_source(val, key);
    else if (key == "sources.c") c.c = parse_num(val, key);
    else if (key == "u0") {
        const auto toks = detail::split_ws(val);
        if (toks.empty()) throw ConfigError("empty u0 spec");
        c.u0_kind = toks[0];
        if (c.u0_kind == "const") {
            if (toks.size() != 2) throw ConfigError("u0 const needs one value");
            c.u0_const = parse_num(toks[1], key);
        } else if (c.u0_kind == "step") {
            if (toks.size() != 4)
                throw ConfigError("u0 step needs '<x_jump> <left> <right>'");
            c.u0_step_x = parse_num(toks[1], key);
            c.u0_left = parse_num(toks[2], key);
            c.u0_right = parse_num(toks[3], key);
        } else {
            throw ConfigError("unknown u0 kind '" + c.u0_kind + "'");
        }
    } else if (key == "out_dir") c.out_dir = val;
    else if (key == "recording") c.recording = val;
    else throw ConfigError("unknown config key '" + key + "'");
}

inline RunConfig parse_config(std::istream& in, RunConfig base = {}) {
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string val = detail::trim(line.substr(eq + 1));
        apply_key(base, key, val);
    }
    return base;
}

inline RunConfig parse_config_file(const std::string& path, RunConfig base = {}) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in, std::move(base));
}

inline void validate(const RunConfig& c) {
    if (c.scheme != "two-phase" && c.scheme != "limit")
        throw ConfigError("scheme must be 'two-phase' or 'limit'");
    if (c.limit_mode != "obstacle" && c.limit_mode != "faithful")
        throw ConfigError("limit.mode must be 'obstacle' or 'faithful'");
    if (c.recording != "snapshots" && c.recording != "dense")
        throw ConfigError("recording must be 'snapshots' or 'dense'");
    if (!(c.mu > 0.0 && c.mu <= 1.0)) throw ConfigError("mu must lie in (0,1]");
    if (!(c.sigma > 0.0 && c.sigma < 1.0)) throw ConfigError("sigma must lie in (0,1)");
    if (!(c.K_nominal > 0.0)) throw ConfigError("K_nominal must be positive");
    if (c.n_cells < 2) throw ConfigError("n_cells must be at least 2");
    if (c.T < 0.0) throw ConfigError("T must be nonnegative");
    for (double t : c.snapshots)
        if (!(t > 0.0 && t <= c.T + 1e-15))
            throw ConfigError("snapshot times must lie in (0,T]");
    if (c.c < 0.0 || c.c > 1.0) throw ConfigError("sources.c must lie in [0,1]");
}

inline ConstitutiveModel model_from_config(const RunConfig& c) {
    if (c.model == "paper-test") return builtin_test_model();
    return power_law_model(c.power_a, c.power_b, c.power_pi0, c.power_gamma);
}

inline std::function<double(double)> u0_from_config(const RunConfig& c) {
    if (c.u0_kind == "const") {
        const double v = c.u0_const;
        return [v](double) { return v; };
    }
    const double x = c.u0_step_x, l = c.u0_left, r = c.u0_right;
    return [x, l, r](double xx) { return xx <= x ? l : r; };
}

/// Assembles a RunSetup. `table` may be null (no pressures on stored states);
/// the caller owns the model and table.
inline RunSetup make_setup(const RunConfig& c, const ConstitutiveModel& model,
                           const TransformTable* table) {
    validate(c);
    RunSetup rs;
    rs.model = model;
    if (c.scheme == "two-phase")
        rs.scheme = SchemeSpec{SchemeKind::TwoPhase, c.mu, false, c.symmetrized};
    else
        rs.scheme = SchemeSpec{SchemeKind::Limit, 0.0, c.limit_mode == "obstacle",
                               c.symmetrized};
    rs.grid = build_grid(c.n_cells);
    SourceSpec ss;
    ss.injection = c.injection.to_field();
    ss.extraction = c.extraction.to_field();
    ss.c = c.c;
    auto [inj, ext] = discretize_sources(ss, rs.grid);
    rs.inj = std::move(inj);
    rs.ext = std::move(ext);
    rs.c = c.c;
    rs.init = initial_state(u0_from_config(c), rs.grid);
    rs.T = c.T;
    rs.record_times = c.snapshots;
    rs.sigma = c.sigma;
    rs.K_nominal = c.K_nominal;
    rs.dense = c.recording == "dense";
    rs.table = table;
    return rs;
}

inline std::string serialize_source(const SourceConfig& s) {
    std::ostringstream os;
    os.precision(17);
    if (s.kind == "dirac") os << "dirac " << s.x0 << " " << s.strength;
    else if (s.kind == "cells") {
        os << "cells";
        for (double v : s.cells) os << " " << v;
    } else os << "none";
    return os.str();
}

/// Manifest text; parse_config on this reproduces the run exactly.
inline std::string serialize_config(const RunConfig& c) {
    std::ostringstream os;
    os.precision(17);
    os << "run_id = " << c.run_id << "\n";
    os << "model = " << c.model;
    if (c.model == "power-law")
        os << " " << c.power_a << " " << c.power_b << " " << c.power_pi0 << " "
           << c.power_gamma;
    os << "\n";
    os << "scheme = " << c.scheme << "\n";
    os << "mu = " << c.mu << "\n";
    os << "limit.mode = " << c.limit_mode << "\n";
    os << "symmetrized = " << (c.symmetrized ? "true" : "false") << "\n";
    os << "n_cells = " << c.n_cells << "\n";
    os << "T = " << c.T << "\n";
    os << "snapshots =";
    for (double t : c.snapshots) os << " " << t;
    os << "\n";
    os << "sigma = " << c.sigma << "\n";
    os << "K_nominal = " << c.K_nominal << "\n";
    os << "sources.injection = " << serialize_source(c.injection) << "\n";
    os << "sources.extraction = " << serialize_source(c.extraction) << "\n";
    os << "sources.c = " << c.c << "\n";
    os << "u0 = ";
    if (c.u0_kind == "const") os << "const " << c.u0_const;
    else os << "step " << c.u0_step_x << " " << c.u0_left << " " << c.u0_right;
    os << "\n";
    os << "out_dir = " << c.out_dir << "\n";
    os << "recording = " << c.recording << "\n";
    return os.str();
}

} // namespace porolim

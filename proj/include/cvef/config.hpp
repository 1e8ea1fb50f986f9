#pragma once

#include <array>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "cvef/grid.hpp"
#include "cvef/initial_data.hpp"
#include "cvef/integrator.hpp"
#include "cvef/params.hpp"

namespace cvef {

/// Flat key=value configuration: UTF-8 text, one `key = value` per line,
/// `#` comments, blank lines ignored.  Unknown keys are hard errors carrying
/// the offending line number; so are malformed lines and unparsable values.
/// Every key has a documented default (see LabConfig).
class Config {
  public:
    static Config parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw Error(ErrorKind::io, "config: cannot open '" + path + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        return parse_string(buf.str());
    }

    static Config parse_string(const std::string& text) {
        Config cfg;
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const std::string trimmed = trim(line);
            if (trimmed.empty()) continue;
            const auto eq = trimmed.find('=');
            if (eq == std::string::npos)
                throw ConfigError(lineno, "config line " + std::to_string(lineno) +
                                              ": expected key = value");
            const std::string key = trim(trimmed.substr(0, eq));
            const std::string value = trim(trimmed.substr(eq + 1));
            if (key.empty())
                throw ConfigError(lineno,
                                  "config line " + std::to_string(lineno) + ": empty key");
            cfg.entries_[key] = {value, lineno};
        }
        return cfg;
    }

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    double get_double(const std::string& key, double fallback) const {
        const auto it = entries_.find(key);
        if (it == entries_.end()) return fallback;
        consumed_.insert(key);
        try {
            std::size_t pos = 0;
            const double v = std::stod(it->second.value, &pos);
            if (pos != it->second.value.size()) throw std::invalid_argument("trailing");
            return v;
        } catch (...) {
            throw ConfigError(it->second.line, "config line " + std::to_string(it->second.line) +
                                                   ": bad numeric value for '" + key + "'");
        }
    }

    long get_long(const std::string& key, long fallback) const {
        const auto it = entries_.find(key);
        if (it == entries_.end()) return fallback;
        consumed_.insert(key);
        try {
            std::size_t pos = 0;
            const long v = std::stol(it->second.value, &pos);
            if (pos != it->second.value.size()) throw std::invalid_argument("trailing");
            return v;
        } catch (...) {
            throw ConfigError(it->second.line, "config line " + std::to_string(it->second.line) +
                                                   ": bad integer value for '" + key + "'");
        }
    }

    std::string get_string(const std::string& key, const std::string& fallback) const {
        const auto it = entries_.find(key);
        if (it == entries_.end()) return fallback;
        consumed_.insert(key);
        return it->second.value;
    }

    std::vector<double> get_double_list(const std::string& key,
                                        const std::vector<double>& fallback) const {
        const auto it = entries_.find(key);
        if (it == entries_.end()) return fallback;
        consumed_.insert(key);
        std::vector<double> out;
        std::istringstream ss(it->second.value);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            try {
                out.push_back(std::stod(trim(tok)));
            } catch (...) {
                throw ConfigError(it->second.line,
                                  "config line " + std::to_string(it->second.line) +
                                      ": bad list entry for '" + key + "'");
            }
        }
        return out;
    }

    /// Any key never consumed by the schema is unknown: hard error with its
    /// line number.
    void reject_unknown_keys() const {
        for (const auto& [key, entry] : entries_) {
            if (!consumed_.count(key))
                throw ConfigError(entry.line, "config line " + std::to_string(entry.line) +
                                                  ": unknown key '" + key + "'");
        }
    }

  private:
    static std::string trim(const std::string& s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return "";
        const auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    }
    struct Entry {
        std::string value;
        int line;
    };
    std::map<std::string, Entry> entries_;
    mutable std::set<std::string> consumed_;
};

/// Every tunable of the laboratory with its default.  Keys (defaults):
///   grid.n (32), grid.box_len (2*pi)
///   params.mu (1.0), params.lambda (0.5), params.kappa (1.0),
///   params.pressure_amp (1.0), params.pressure_exp (1.4)
///   init.kind (gaussian_bump | random_band | zero; default gaussian_bump)
///   init.amplitude (0.0), init.u_amplitude (0.1), init.width (1.0),
///   init.center (L/2,L/2,L/2), init.band (2), init.seed (1)
///   run.t_end (10.0), run.dt (0 = advective default), run.scheme (etd2rk),
///   run.dealias (1), run.record_every (1), run.admissibility_every (1)
///   study.kappas (100,1000,10000), study.fit_t_min (0 = t_end/10),
///   study.fit_t_max (0 = t_end), study.k_max (2)
///   output.snapshot (0)
struct LabConfig {
    Grid grid{32, two_pi};
    SimParams params;
    InitSpec init;
    StepConfig step;
    double t_end = 10.0;
    double dt_raw = 0.0;  // 0: use the advective default at run time
    int record_every = 1;
    std::vector<double> kappas = {100.0, 1000.0, 10000.0};
    double fit_t_min = 0.0;
    double fit_t_max = 0.0;
    int k_max = 2;
    bool write_snapshot = false;

    static LabConfig from_config(const Config& cfg) {
        LabConfig lab;
        const int n = static_cast<int>(cfg.get_long("grid.n", 32));
        const double box = cfg.get_double("grid.box_len", two_pi);
        lab.grid = Grid(n, box);

        lab.params.mu = cfg.get_double("params.mu", 1.0);
        lab.params.lambda = cfg.get_double("params.lambda", 0.5);
        lab.params.kappa = cfg.get_double("params.kappa", 1.0);
        lab.params.pressure_amp = cfg.get_double("params.pressure_amp", 1.0);
        lab.params.pressure_exp = cfg.get_double("params.pressure_exp", 1.4);
        lab.params.validate();

        const std::string kind = cfg.get_string("init.kind", "gaussian_bump");
        if (kind == "gaussian_bump")
            lab.init.kind = InitKind::gaussian_bump;
        else if (kind == "random_band")
            lab.init.kind = InitKind::random_band;
        else if (kind == "zero")
            lab.init.kind = InitKind::zero;
        else
            throw Error(ErrorKind::config, "config: unknown init.kind '" + kind + "'");
        lab.init.amplitude = cfg.get_double("init.amplitude", 0.0);
        lab.init.u_amplitude = cfg.get_double("init.u_amplitude", 0.1);
        lab.init.width = cfg.get_double("init.width", 1.0);
        const double half = 0.5 * box;
        const auto center = cfg.get_double_list("init.center", {half, half, half});
        if (center.size() != 3)
            throw Error(ErrorKind::config, "config: init.center needs three entries");
        lab.init.center = {center[0], center[1], center[2]};
        lab.init.band = static_cast<int>(cfg.get_long("init.band", 2));
        lab.init.seed = static_cast<unsigned long>(cfg.get_long("init.seed", 1));

        lab.t_end = cfg.get_double("run.t_end", 10.0);
        lab.dt_raw = cfg.get_double("run.dt", 0.0);
        const std::string scheme = cfg.get_string("run.scheme", "etd2rk");
        if (scheme == "etd1")
            lab.step.scheme = Scheme::etd1;
        else if (scheme == "etd2rk")
            lab.step.scheme = Scheme::etd2rk;
        else
            throw Error(ErrorKind::config, "config: unknown run.scheme '" + scheme + "'");
        lab.step.dealias_state = cfg.get_long("run.dealias", 1) != 0;
        lab.record_every = static_cast<int>(cfg.get_long("run.record_every", 1));
        lab.step.admissibility_check_every =
            static_cast<int>(cfg.get_long("run.admissibility_every", 1));

        lab.kappas = cfg.get_double_list("study.kappas", {100.0, 1000.0, 10000.0});
        lab.fit_t_min = cfg.get_double("study.fit_t_min", 0.0);
        lab.fit_t_max = cfg.get_double("study.fit_t_max", 0.0);
        lab.k_max = static_cast<int>(cfg.get_long("study.k_max", 2));
        lab.write_snapshot = cfg.get_long("output.snapshot", 0) != 0;

        cfg.reject_unknown_keys();
        return lab;
    }

    /// Fit window default: [t_end/10, t_end] to skip transients.
    std::pair<double, double> fit_window(double t_end_actual) const {
        const double lo = fit_t_min > 0.0 ? fit_t_min : t_end_actual / 10.0;
        const double hi = fit_t_max > 0.0 ? fit_t_max : t_end_actual;
        return {lo, hi};
    }
};

}  // namespace cvef

#include "kinlab/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace kinlab {

std::string ConfigError::join(const std::vector<std::string>& v) {
    std::string s = "invalid config:";
    for (const auto& m : v) s += "\n  " + m;
    return s;
}

SimParams ExperimentConfig::sim_params() const {
    SimParams p;
    p.alpha = alpha;
    p.bigA = bigA;
    p.eps = eps;
    p.grid = TorusGrid(n);
    p.vgrid = VelocityGrid(nv, vmax);
    p.beta_rel = beta_rel;
    p.dt_cap = dt_cap;
    p.t_end = t_end;
    return p;
}

DiffusionParams ExperimentConfig::diffusion_params() const {
    DiffusionParams p;
    p.alpha = alpha;
    p.bigA = bigA;
    p.grid = TorusGrid(n);
    p.dt = dt;
    p.t_end = t_end;
    return p;
}

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct Parser {
    ExperimentConfig cfg;
    std::vector<std::string> errors;
    std::vector<std::pair<std::string, int>> seen; // key -> line, for constraint messages

    int line_of(const std::string& key) const {
        for (const auto& [k, l] : seen)
            if (k == key) return l;
        return 0;
    }

    void fail(int line, const std::string& msg) {
        errors.push_back("line " + std::to_string(line) + ": " + msg);
    }
    void fail_key(const std::string& key, const std::string& msg) {
        int l = line_of(key);
        if (l > 0)
            fail(l, msg);
        else
            errors.push_back(msg);
    }

    bool to_double(int line, const std::string& key, const std::string& v, double& out) {
        try {
            size_t pos = 0;
            double d = std::stod(v, &pos);
            if (pos != v.size() || !std::isfinite(d)) throw std::invalid_argument("");
            out = d;
            return true;
        } catch (...) {
            fail(line, key + ": expected a number, got '" + v + "'");
            return false;
        }
    }
    bool to_int(int line, const std::string& key, const std::string& v, int& out) {
        try {
            size_t pos = 0;
            long d = std::stol(v, &pos);
            if (pos != v.size()) throw std::invalid_argument("");
            out = static_cast<int>(d);
            return true;
        } catch (...) {
            fail(line, key + ": expected an integer, got '" + v + "'");
            return false;
        }
    }
    bool to_u64(int line, const std::string& key, const std::string& v, unsigned long long& out) {
        try {
            size_t pos = 0;
            unsigned long long d = std::stoull(v, &pos);
            if (pos != v.size()) throw std::invalid_argument("");
            out = d;
            return true;
        } catch (...) {
            fail(line, key + ": expected a nonnegative integer, got '" + v + "'");
            return false;
        }
    }
    bool to_list(int line, const std::string& key, std::string v, std::vector<double>& out) {
        std::replace(v.begin(), v.end(), ',', ' ');
        std::istringstream is(v);
        std::vector<double> vals;
        std::string tok;
        while (is >> tok) {
            double d = 0.0;
            if (!to_double(line, key, tok, d)) return false;
            vals.push_back(d);
        }
        if (vals.empty()) {
            fail(line, key + ": expected at least one number");
            return false;
        }
        out = std::move(vals);
        return true;
    }

    void assign(int line, const std::string& key, const std::string& val) {
        seen.emplace_back(key, line);
        if (key == "experiment")
            cfg.experiment = val;
        else if (key == "alpha")
            to_double(line, key, val, cfg.alpha);
        else if (key == "A")
            to_double(line, key, val, cfg.bigA);
        else if (key == "eps")
            to_double(line, key, val, cfg.eps);
        else if (key == "n")
            to_int(line, key, val, cfg.n);
        else if (key == "nv")
            to_int(line, key, val, cfg.nv);
        else if (key == "vmax")
            to_double(line, key, val, cfg.vmax);
        else if (key == "beta_rel")
            to_double(line, key, val, cfg.beta_rel);
        else if (key == "dt_cap")
            to_double(line, key, val, cfg.dt_cap);
        else if (key == "t_end")
            to_double(line, key, val, cfg.t_end);
        else if (key == "dt")
            to_double(line, key, val, cfg.dt);
        else if (key == "amplitude")
            to_double(line, key, val, cfg.amplitude);
        else if (key == "perturbation")
            cfg.perturbation = val;
        else if (key == "snap_dt")
            to_double(line, key, val, cfg.snap_dt);
        else if (key == "snapshot_stride")
            to_int(line, key, val, cfg.snapshot_stride);
        else if (key == "eps_list")
            to_list(line, key, val, cfg.eps_list);
        else if (key == "out")
            cfg.out_dir = val;
        else if (key == "seed")
            to_u64(line, key, val, cfg.seed);
        else
            fail(line, "unknown key '" + key + "'");
    }

    void check_constraints() {
        const ExperimentConfig& c = cfg;
        static const char* kinds[] = {"kinetic", "diffusion", "paired", "sweep", "verify"};
        if (std::find_if(std::begin(kinds), std::end(kinds),
                         [&](const char* k) { return c.experiment == k; }) == std::end(kinds))
            fail_key("experiment", "experiment must be one of kinetic, diffusion, paired, sweep, "
                                   "verify; got '" + c.experiment + "'");
        if (!(c.bigA > 1.0)) fail_key("A", "A must exceed 1");
        if (!(c.eps > 0.0)) fail_key("eps", "eps must be positive");
        if (c.n < 2) fail_key("n", "n must be >= 2");
        if (c.nv < 2 || c.nv % 2 != 0) fail_key("nv", "nv must be even and >= 2");
        if (!(c.vmax >= 6.0)) fail_key("vmax", "vmax must be >= 6 (Gaussian tail truncation)");
        if (!(c.beta_rel > 0.0)) fail_key("beta_rel", "beta_rel must be positive");
        if (c.dt_cap < 0.0) fail_key("dt_cap", "dt_cap must be >= 0 (0 selects the default)");
        if (!(c.t_end > 0.0)) fail_key("t_end", "t_end must be positive");
        if (c.dt < 0.0) fail_key("dt", "dt must be >= 0 (0 selects the default)");
        if (c.snap_dt < 0.0) fail_key("snap_dt", "snap_dt must be >= 0");
        if (c.snapshot_stride < 1) fail_key("snapshot_stride", "snapshot_stride must be >= 1");
        if (c.perturbation != "none" && c.perturbation != "micro")
            fail_key("perturbation", "perturbation must be 'none' or 'micro'");
        if (c.bigA > 1.0) {
            double cap = std::min(c.bigA - 1.0, 1.0 - 1.0 / c.bigA);
            if (std::abs(c.amplitude) > cap) {
                std::ostringstream os;
                os << "amplitude " << c.amplitude << " leaves [1/A, A]: |amplitude| must be <= "
                   << cap << " for A = " << c.bigA;
                fail_key("amplitude", os.str());
            }
            double cap_eps = std::min(eps_zero(c.alpha, c.bigA), 0.5);
            for (size_t k = 0; k < c.eps_list.size(); ++k) {
                if (!(c.eps_list[k] > 0.0 && c.eps_list[k] < cap_eps)) {
                    std::ostringstream os;
                    os << "eps_list entries must lie in (0, " << cap_eps
                       << ") for this (alpha, A)";
                    fail_key("eps_list", os.str());
                    break;
                }
                if (k > 0 && c.eps_list[k] >= c.eps_list[k - 1]) {
                    fail_key("eps_list", "eps_list must be strictly decreasing");
                    break;
                }
            }
        }
    }
};

} // namespace

ExperimentConfig parse_config(const std::string& text) {
    Parser p;
    std::istringstream is(text);
    std::string raw;
    int line = 0;
    while (std::getline(is, raw)) {
        ++line;
        std::string s = raw;
        size_t hash = s.find('#');
        if (hash != std::string::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;
        size_t eq = s.find('=');
        if (eq == std::string::npos) {
            p.fail(line, "expected 'key = value', got '" + trim(raw) + "'");
            continue;
        }
        std::string key = trim(s.substr(0, eq));
        std::string val = trim(s.substr(eq + 1));
        if (key.empty()) {
            p.fail(line, "missing key before '='");
            continue;
        }
        p.assign(line, key, val);
    }
    p.check_constraints();
    if (!p.errors.empty()) throw ConfigError(std::move(p.errors));
    return p.cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError({"cannot read config file '" + path + "'"});
    std::ostringstream os;
    os << in.rdbuf();
    return parse_config(os.str());
}

} // namespace kinlab

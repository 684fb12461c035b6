#pragma once

#include <string>
#include <vector>

#include "kinlab/core.hpp"
#include "kinlab/diffusion.hpp"

namespace kinlab {

/// All violations found while parsing a config, one message per line-tagged
/// problem. CLI maps this to exit code 1.
struct ConfigError : std::runtime_error {
    std::vector<std::string> violations;

    explicit ConfigError(std::vector<std::string> v)
        : std::runtime_error(join(v)), violations(std::move(v)) {}

    static std::string join(const std::vector<std::string>& v);
};

/// Flat experiment description parsed from key = value text.
struct ExperimentConfig {
    std::string experiment = "kinetic"; // kinetic | diffusion | paired | sweep | verify
    double alpha = 1.0;
    double bigA = 2.0;
    double eps = 0.1;
    int n = 128;
    int nv = 128;
    double vmax = 8.0;
    double beta_rel = 0.5;
    double dt_cap = 0.0;  // 0: use 0.5 dx
    double t_end = 1.0;
    double dt = 0.0;      // diffusion step; 0: solver default
    double amplitude = 0.5;             // rho_in = 1 + amplitude cos(2 pi x)
    std::string perturbation = "none";  // none | micro (eps' = eps)
    double snap_dt = 0.0;               // paired/diffusion snapshot spacing; 0: t_end only
    int snapshot_stride = 1;            // kinetic diagnostics every k steps
    std::vector<double> eps_list = {0.4, 0.2, 0.1, 0.05, 0.025};
    std::string out_dir;                // empty: KINLAB_OUT or cwd
    unsigned long long seed = 12345;

    SimParams sim_params() const;
    DiffusionParams diffusion_params() const;
};

/// Parses key = value lines ('#' comments, blank lines allowed) and
/// validates every field, reporting all violations at once with line
/// numbers. Unknown keys and malformed values are errors.
ExperimentConfig parse_config(const std::string& text);

/// parse_config on the contents of a file.
ExperimentConfig load_config(const std::string& path);

} // namespace kinlab

#include <filesystem>
#include <iostream>
#include <limits>
#include <string>

#include <CLI11.hpp>

#include "kinlab/asymptotics.hpp"
#include "kinlab/config.hpp"
#include "kinlab/io.hpp"
#include "kinlab/kinetic.hpp"
#include "kinlab/verify.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::string out_dir;
    unsigned long long seed = 0;
    bool seed_set = false;
    bool quiet = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "experiment config file (key = value lines)");
    cmd->add_option("--out", flags.out_dir, "output directory (overrides config and KINLAB_OUT)");
    cmd->add_option("--seed", flags.seed, "rng seed override")->each([&](const std::string&) {
        flags.seed_set = true;
    });
    cmd->add_flag("--quiet", flags.quiet, "suppress progress output");
}

kinlab::ExperimentConfig load(const CommonFlags& flags) {
    kinlab::ExperimentConfig cfg;
    if (!flags.config_path.empty()) cfg = kinlab::load_config(flags.config_path);
    if (flags.seed_set) cfg.seed = flags.seed;
    return cfg;
}

kinlab::PreparednessPolicy policy_of(const kinlab::ExperimentConfig& cfg) {
    return cfg.perturbation == "micro" ? kinlab::PreparednessPolicy::MatchedPerturbation
                                       : kinlab::PreparednessPolicy::WellPrepared;
}

void note(const CommonFlags& flags, const std::string& msg) {
    if (!flags.quiet) std::cout << msg << '\n';
}

int run_simulate_kinetic(const CommonFlags& flags) {
    kinlab::ExperimentConfig cfg = load(flags);
    kinlab::SimParams p = cfg.sim_params();
    kinlab::PhaseField f_in = kinlab::prepared_initial_state(p, cfg.amplitude, policy_of(cfg));
    kinlab::KineticRun run = kinlab::run_kinetic(p, f_in, cfg.snapshot_stride);
    auto dir = kinlab::resolve_out_dir(flags.out_dir, cfg);
    kinlab::emit_series(run.diagnostics, dir / "kinetic.csv", kinlab::run_metadata(cfg));
    note(flags, "wrote " + (dir / "kinetic.csv").string() + " (" +
                    std::to_string(run.diagnostics.rows()) + " rows, " +
                    std::to_string(run.steps) + " steps)");
    return 0;
}

int run_simulate_diffusion(const CommonFlags& flags) {
    kinlab::ExperimentConfig cfg = load(flags);
    kinlab::DiffusionParams p = cfg.diffusion_params();
    kinlab::ScalarField rho_in = kinlab::cosine_density(p.grid, cfg.amplitude);
    kinlab::DiffusionRun run = kinlab::run_diffusion(p, rho_in, cfg.snap_dt);
    auto dir = kinlab::resolve_out_dir(flags.out_dir, cfg);
    kinlab::emit_series(run.diagnostics, dir / "diffusion.csv", kinlab::run_metadata(cfg));
    note(flags, "wrote " + (dir / "diffusion.csv").string() + " (" +
                    std::to_string(run.diagnostics.rows()) + " rows)");
    return 0;
}

int run_paired_cmd(const CommonFlags& flags) {
    kinlab::ExperimentConfig cfg = load(flags);
    kinlab::SimParams p = cfg.sim_params();
    kinlab::PairedRun run = kinlab::run_paired(p, cfg.amplitude, policy_of(cfg), cfg.snap_dt);
    auto dir = kinlab::resolve_out_dir(flags.out_dir, cfg);
    auto meta = kinlab::run_metadata(cfg);
    meta["derived"]["eps_prime"] = run.eps_prime;
    kinlab::emit_series(run.series, dir / "paired.csv", meta);
    kinlab::emit_series(kinlab::entropy_dissipation_report(run), dir / "paired_entropy.csv", meta);
    kinlab::emit_series(run.kinetic_diagnostics, dir / "paired_kinetic.csv", meta);
    note(flags, "wrote " + (dir / "paired.csv").string() + " (+ entropy and kinetic series, " +
                    std::to_string(run.series.rows()) + " rows)");
    return 0;
}

int run_sweep(const CommonFlags& flags) {
    kinlab::ExperimentConfig cfg = load(flags);
    kinlab::SimParams base = cfg.sim_params();
    kinlab::SweepResult sweep =
        kinlab::epsilon_sweep(base, cfg.eps_list, policy_of(cfg), cfg.amplitude, cfg.snap_dt);

    kinlab::DiagnosticSeries table({"eps_prime", "sup_error", "budget", "horizon"});
    for (size_t k = 0; k < sweep.eps_values.size(); ++k) {
        double row[4] = {sweep.eps_primes[k], sweep.sup_errors[k], sweep.budgets[k],
                         sweep.horizons[k]};
        table.add_row(sweep.eps_values[k], row); // t column carries eps
    }
    auto dir = kinlab::resolve_out_dir(flags.out_dir, cfg);
    auto meta = kinlab::run_metadata(cfg);
    meta["derived"]["fitted_exponent"] = sweep.fitted_exponent;
    meta["derived"]["fitted_prefactor"] = sweep.fitted_prefactor;
    meta["derived"]["kappa_hat"] = sweep.kappa_hat;
    kinlab::emit_series(table, dir / "sweep.csv", meta);
    note(flags, "wrote " + (dir / "sweep.csv").string() + ": fitted exponent " +
                    kinlab::format_g17(sweep.fitted_exponent));
    return 0;
}

int run_verify(const CommonFlags& flags) {
    kinlab::ExperimentConfig cfg = load(flags);
    kinlab::VerifyReport rep = kinlab::run_verification(cfg.seed);
    std::cout << rep.text();
    std::cout << (rep.all_pass() ? "verify: all checks passed" : "verify: FAILURES detected")
              << '\n';
    return rep.all_pass() ? 0 : 2;
}

int run_decay_fit(const std::string& csv, const std::string& column, double t_lo, double t_hi) {
    kinlab::DiagnosticSeries series = kinlab::parse_series_csv(csv);
    std::vector<double> vals = series.column(column);
    kinlab::DecayFit fit =
        kinlab::decay_rate_fit(series.times(), vals, t_lo, t_hi, 3);
    std::cout << "rate=" << kinlab::format_g17(fit.rate)
              << " intercept=" << kinlab::format_g17(fit.intercept)
              << " r_squared=" << kinlab::format_g17(fit.r_squared)
              << " samples=" << fit.samples << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"deterministic laboratory for a BGK-type kinetic equation and its "
                 "nonlinear-diffusion limit"};
    app.require_subcommand(1);

    CommonFlags flags;
    auto* kin = app.add_subcommand("simulate-kinetic", "kinetic run with per-step diagnostics");
    auto* dif = app.add_subcommand("simulate-diffusion", "limit-equation run");
    auto* pair = app.add_subcommand("run-paired", "matched kinetic + diffusion run");
    auto* sweep = app.add_subcommand("sweep-epsilon", "error vs eps study");
    auto* verify = app.add_subcommand("verify", "deterministic invariant/property suite");
    for (auto* cmd : {kin, dif, pair, sweep, verify}) add_common(cmd, flags);

    auto* fit = app.add_subcommand("decay-fit", "log-linear rate fit on an emitted CSV");
    std::string fit_csv, fit_column = "l2_sq";
    double fit_lo = 0.0, fit_hi = std::numeric_limits<double>::max();
    fit->add_option("csv", fit_csv, "input CSV path")->required();
    fit->add_option("--column", fit_column, "column to fit (default l2_sq)");
    fit->add_option("--t-lo", fit_lo, "window start");
    fit->add_option("--t-hi", fit_hi, "window end");

    try {
        app.parse(argc, argv);
        if (kin->parsed()) return run_simulate_kinetic(flags);
        if (dif->parsed()) return run_simulate_diffusion(flags);
        if (pair->parsed()) return run_paired_cmd(flags);
        if (sweep->parsed()) return run_sweep(flags);
        if (verify->parsed()) return run_verify(flags);
        if (fit->parsed()) return run_decay_fit(fit_csv, fit_column, fit_lo, fit_hi);
        return 1;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const kinlab::ConfigError& e) {
        std::cerr << e.what() << '\n';
        return 1;
    } catch (const kinlab::InvariantViolation& e) {
        std::cerr << "invariant violation: " << e.what() << '\n';
        return 2;
    } catch (const kinlab::NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

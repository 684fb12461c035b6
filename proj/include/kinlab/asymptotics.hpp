#pragma once

#include <vector>

#include "kinlab/diffusion.hpp"
#include "kinlab/kinetic.hpp"

namespace kinlab {

enum class PreparednessPolicy {
    WellPrepared,         // f_in = rho_in M exactly (eps' = 0)
    MatchedPerturbation,  // add c v cos(2 pi x) M scaled so eps' = eps
};

/// Hydrodynamic data retained at each matched snapshot time.
struct PairedSnapshot {
    double t = 0.0;
    ScalarField rho_kin;  // density of the kinetic solution
    ScalarField j_kin;    // flux of the kinetic solution
    ScalarField rho_dif;  // limit-equation solution
};

/// A kinetic run and a diffusion run advanced side by side from matched
/// initial data, with snapshots at identical times.
struct PairedRun {
    SimParams params;
    double eps_prime = 0.0; // achieved || f_in - rho_in M ||_{L2(M^-1)}
    // columns: error, entropy_sq, micro_sq, budget
    //   error      = || f - rho_dif M ||_{L2(M^-1)}
    //   entropy_sq = || f/M - rho_dif ||^2_{L2(M)}   (same quantity, h coordinates)
    //   micro_sq   = || f/M - rho_kin ||^2_{L2(M)}
    //   budget     = running time integral of micro_sq (trapezoid)
    DiagnosticSeries series;
    std::vector<PairedSnapshot> snapshots;
    DiagnosticSeries kinetic_diagnostics;
};

/// f_in = rho_in M (+ the scaled micro perturbation under
/// MatchedPerturbation) for rho_in = 1 + rho_amplitude cos(2 pi x).
/// Validates rho_in against [1/A, A]; reports the achieved eps'.
PhaseField prepared_initial_state(const SimParams& params, double rho_amplitude,
                                  PreparednessPolicy policy, double* eps_prime = nullptr);

PairedRun run_paired(const SimParams& params, double rho_amplitude, PreparednessPolicy policy,
                     double snap_dt);

/// Final value of the running micro-dissipation integral.
double micro_dissipation_budget(const PairedRun& run);

/// Per-snapshot entropy-method quantities:
///   q_norm_sq  = || (1/eps) rho_kin^{a/2} j + rho_dif^{-a/2} d_x rho_dif ||^2
///   i1         = (1/4) int (1 - (rho_kin/rho_dif)^a)^2 rho_kin^{-a} |d_x rho_dif|^2
///   i2         = int (1 - (rho_kin/rho_dif)^{a/2})^2 (rho_kin rho_dif)^{-a/2} |d_x rho_dif|^2
///   r_coupling = int (d_x rho_kin + (1/eps) rho_kin^a j) . rho_dif^{-a} d_x rho_dif
///   entropy_sq = copied from the run for the i1 <= K' entropy comparison
DiagnosticSeries entropy_dissipation_report(const PairedRun& run);

struct SweepResult {
    std::vector<double> eps_values;   // strictly decreasing
    std::vector<double> eps_primes;
    std::vector<double> sup_errors;   // sup over t of the error series
    std::vector<double> budgets;      // micro-dissipation budget per eps
    std::vector<double> horizons;
    double fitted_exponent = 0.0;     // slope of log sup_error vs log(eps + eps')
    double fitted_prefactor = 0.0;
    double kappa_hat = 0.0;           // 1 / (2 * fitted decay rate of the coarsest run)
    bool monotone = true;             // sup_errors strictly decreasing in eps
};

/// Paired runs over eps_list (strictly decreasing); the horizon follows
/// -kappa log(eps + eps') with kappa estimated from the coarsest run's
/// fitted error decay rate, floored at base.t_end.
SweepResult epsilon_sweep(const SimParams& base, std::span<const double> eps_list,
                          PreparednessPolicy policy, double rho_amplitude, double snap_dt);

} // namespace kinlab

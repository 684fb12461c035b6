#pragma once

#include <functional>

#include "kinlab/core.hpp"

namespace kinlab {

/// Parameters of a nonlinear-diffusion run for d rho / dt = d_x (rho^{-alpha} d_x rho).
struct DiffusionParams {
    double alpha = 0.0;
    double bigA = 2.0;
    TorusGrid grid;
    double dt = 0.0; // 0 means "use 0.4 dx^2 min(z^alpha) over [1/A, A]"
    double t_end = 1.0;
    Tolerances tol;

    double default_dt() const;
};

/// One explicit flux-form step with arithmetic-mean face mobility
/// mu_{i+1/2} = (rho_i^{-alpha} + rho_{i+1}^{-alpha}) / 2. Conserves the
/// discrete mass exactly and satisfies the maximum principle under the
/// CFL condition dt <= dx^2 / (2 max rho^{-alpha}); violating it refuses
/// the step.
ScalarField diffusion_step(const ScalarField& rho, double dt, double alpha,
                           const TorusGrid& grid);

/// Face-based dissipation sum_i mu_{i+1/2} ((rho_{i+1}-rho_i)/dx)^2 dx,
/// the exact discrete counterpart of int rho^{-alpha} |d_x rho|^2 dx for
/// the flux-form step.
double discrete_dissipation(const ScalarField& rho, double alpha, const TorusGrid& grid);

struct DiffusionRun {
    DiffusionParams params;
    ScalarField state;
    double t = 0.0;
    DiagnosticSeries diagnostics; // columns: mass, min, max, l2_dist, dissipation
};

using DiffusionSnapshotCallback = std::function<void(double t, const ScalarField&)>;

/// Advances to t_end recording mass, min/max, ||rho - 1||_{L2} and the
/// dissipation at every snapshot (snap_dt spacing, 0 = every step).
/// Fails hard if the state leaves [1/A, A].
DiffusionRun run_diffusion(const DiffusionParams& params, const ScalarField& rho_in,
                           double snap_dt = 0.0, const DiffusionSnapshotCallback& on_snapshot = {});

/// Log-linear least-squares fit of a positive series against time over
/// [t_lo, t_hi]. Returns the slope magnitude as the rate. Needs >= 10
/// in-window samples unless fewer are ever available (then >= 3).
struct DecayFit {
    double rate = 0.0;
    double intercept = 0.0; // log value at t = 0
    double r_squared = 0.0;
    int samples = 0;
};

DecayFit decay_rate_fit(std::span<const double> times, std::span<const double> values,
                        double t_lo, double t_hi, int min_samples = 10);

} // namespace kinlab

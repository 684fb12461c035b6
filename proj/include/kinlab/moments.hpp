#pragma once

#include "kinlab/core.hpp"

namespace kinlab {

/// Hydrodynamic quantities of a phase-space state (d = 1):
/// rho = int f dv, j = int f v dv, energy = int f (v^2 - 1) dv.
struct HydroState {
    ScalarField rho;
    ScalarField j;
    ScalarField energy;
};

ScalarField density(const PhaseField& f, const VelocityGrid& vgrid);
ScalarField flux(const PhaseField& f, const VelocityGrid& vgrid);
ScalarField energy(const PhaseField& f, const VelocityGrid& vgrid);
HydroState hydro(const PhaseField& f, const VelocityGrid& vgrid);

/// Pointwise Cauchy-Schwarz bound on flux and energy: returns |j|, |E|
/// and rhs_i = (int (f/M - beta_i)^2 M dv)^{1/2}; callers assert
/// lhs <= rhs pointwise.
struct FluxEnergyBound {
    ScalarField abs_j;
    ScalarField abs_energy;
    ScalarField rhs;
};

FluxEnergyBound flux_energy_bound_check(const PhaseField& f, const ScalarField& beta,
                                        const VelocityProfile& maxw, const VelocityGrid& vgrid);
FluxEnergyBound flux_energy_bound_check(const PhaseField& f, double beta,
                                        const VelocityProfile& maxw, const VelocityGrid& vgrid);

/// One hydro snapshot of a trajectory, used by the residual checks.
struct HydroSnapshot {
    double t = 0.0;
    HydroState h;
};

/// Residuals of the moment evolution equations
///   d rho / dt + (1/eps) d_x j            = 0
///   d j / dt + (1/eps) d_x E + (1/eps) d_x rho + (1/eps^2) rho^alpha j = 0
/// using centered time differences at interior snapshots and spectral
/// space derivatives. Returns per-time L2 norms of the two residuals.
/// Requires >= 3 equally spaced snapshots.
DiagnosticSeries moment_residuals(const std::vector<HydroSnapshot>& snaps, double eps, double alpha,
                                  const TorusGrid& grid);

/// R_eps = d_x rho + (1/eps) rho^alpha j (spectral derivative).
/// Rejects nonpositive density.
ScalarField flux_balance_defect(const PhaseField& f, double eps, double alpha,
                                const TorusGrid& grid, const VelocityGrid& vgrid);

} // namespace kinlab

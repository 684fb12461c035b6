#pragma once

#include "kinlab/core.hpp"

namespace kinlab {

/// Snapshot of the weighted distance to equilibrium and the perturbed
/// functional driving the exponential decay estimate.
struct LyapunovRecord {
    double t = 0.0;
    double l2_sq = 0.0;        // ||f - M||^2_{L2(M^-1)}
    double perturbation = 0.0; // int j . (I-D)^{-1} d_x rho dx
    double functional = 0.0;   // l2_sq + delta * perturbation
    double micro = 0.0;        // ||f - rho M||^2_{L2(M^-1)}
    double macro = 0.0;        // ||rho - mean||^2_{L2_x}
};

/// (I - Pi) f = f - rho M; its density vanishes identically.
PhaseField micro_projection(const PhaseField& f, const VelocityProfile& maxw,
                            const VelocityGrid& vgrid);

/// Coupling weight delta = eps / (A^alpha (2 + A^{2 alpha})).
double perturbation_weight(double alpha, double bigA, double eps);

/// Explicit decay rate gamma = 1 / (8 A^alpha (2 + A^{2 alpha})).
double theoretical_gamma(double alpha, double bigA);

LyapunovRecord lyapunov(const PhaseField& f, const SimParams& params, const VelocityProfile& maxw,
                        double t = 0.0);

/// Audit of a kinetic run's decay diagnostics:
///  (a) the perturbed functional is non-increasing snapshot to snapshot
///      (relative slack per elapsed step, plus a roundoff floor),
///  (b) l2_sq(t) <= 3 exp(-gamma t) l2_sq(0) at every snapshot,
///  (c) the fitted decay rate of l2_sq is at least gamma (the explicit
///      rate is a lower bound on the true one).
struct DecayAuditReport {
    bool functional_monotone = true;
    bool bound_holds = true;
    bool rate_at_least_gamma = true;
    double gamma = 0.0;
    double fitted_rate = 0.0;
    double worst_bound_margin = 0.0;  // min over snapshots of bound - l2_sq
    double worst_increase = 0.0;      // max functional increase beyond slack
    std::string detail;
    bool pass() const { return functional_monotone && bound_holds && rate_at_least_gamma; }
};

/// `series` must carry columns t-implicit plus "l2_sq", "functional",
/// "steps" (cumulative step count at each snapshot).
DecayAuditReport decay_audit(const DiagnosticSeries& series, const SimParams& params);

} // namespace kinlab

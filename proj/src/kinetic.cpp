#include "kinlab/kinetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "kinlab/moments.hpp"

namespace kinlab {

PhaseField transport_step(const PhaseField& f, double dt, double eps, const TorusGrid& grid,
                          const VelocityGrid& vgrid) {
    if (!(dt > 0.0)) throw std::invalid_argument("transport_step: dt must be positive");
    const int n = grid.n, nv = vgrid.nv;
    PhaseField out(n, nv);
    std::vector<double> col(static_cast<size_t>(n)), shifted(static_cast<size_t>(n));
    for (int j = 0; j < nv; ++j) {
        const double s = vgrid.node(j) * dt / (eps * grid.dx); // shift in cells
        const double fl = std::floor(s);
        const int i0 = static_cast<int>(fl);
        const double w = s - fl; // in [0, 1)
        for (int i = 0; i < n; ++i) col[static_cast<size_t>(i)] = f(i, j);
        for (int i = 0; i < n; ++i) {
            double a = col[static_cast<size_t>(grid.wrap(i - i0))];
            double b = col[static_cast<size_t>(grid.wrap(i - i0 - 1))];
            shifted[static_cast<size_t>(i)] = (1.0 - w) * a + w * b;
        }
        for (int i = 0; i < n; ++i) out(i, j) = shifted[static_cast<size_t>(i)];
    }
    return out;
}

PhaseField relaxation_step(const PhaseField& f, double dt, double eps, double alpha,
                           const VelocityProfile& maxw, const TorusGrid& grid,
                           const VelocityGrid& vgrid) {
    (void)grid;
    PhaseField out(f.n, f.nv);
    for (int i = 0; i < f.n; ++i) {
        double rho = quad_v(f.row(i), vgrid.dv);
        if (!(rho > 0.0)) throw NumericalFailure("relaxation_step: nonpositive density");
        double e = std::exp(-std::pow(rho, alpha) * dt / (eps * eps));
        for (int j = 0; j < f.nv; ++j) {
            double tgt = rho * maxw[j];
            out(i, j) = tgt + (f(i, j) - tgt) * e;
        }
    }
    return out;
}

PhaseField strang_step(const PhaseField& f, double dt, const SimParams& params,
                       const VelocityProfile& maxw) {
    PhaseField g = transport_step(f, 0.5 * dt, params.eps, params.grid, params.vgrid);
    g = relaxation_step(g, dt, params.eps, params.alpha, maxw, params.grid, params.vgrid);
    return transport_step(g, 0.5 * dt, params.eps, params.grid, params.vgrid);
}

KineticIntegrator::KineticIntegrator(const SimParams& params, const PhaseField& f_in)
    : params_(params), maxw_(discrete_maxwellian(params.vgrid)), f_(f_in) {
    params_.validate();
    if (f_in.n != params.grid.n || f_in.nv != params.vgrid.nv)
        throw std::invalid_argument("KineticIntegrator: state/grid mismatch");
    mass0_ = total_mass(f_, params_.grid, params_.vgrid);
}

std::pair<double, double> KineticIntegrator::ratio_range() const {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int i = 0; i < f_.n; ++i)
        for (int j = 0; j < f_.nv; ++j) {
            double r = f_(i, j) / maxw_[j];
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
    return {lo, hi};
}

void KineticIntegrator::advance_to(double t_target) {
    const double dt0 = params_.dt_policy();
    const double lo = (1.0 / params_.bigA) * (1.0 - params_.tol.sandwich_slack);
    const double hi = params_.bigA * (1.0 + params_.tol.sandwich_slack);
    while (t_ < t_target - 1e-12 * std::max(1.0, t_target)) {
        double dt = std::min(dt0, t_target - t_);
        f_ = strang_step(f_, dt, params_, maxw_);
        t_ += dt;
        ++steps_;

        auto [rmin, rmax] = ratio_range();
        if (rmin < lo || rmax > hi)
            throw InvariantViolation("kinetic step " + std::to_string(steps_) + " at t=" +
                                     std::to_string(t_) + ": f/M range [" + std::to_string(rmin) +
                                     ", " + std::to_string(rmax) + "] left the sandwich");
        double mass = total_mass(f_, params_.grid, params_.vgrid);
        if (std::abs(mass - mass0_) > params_.tol.mass_rel * std::abs(mass0_))
            throw InvariantViolation("kinetic step " + std::to_string(steps_) +
                                     ": mass drift beyond tolerance");
    }
}

KineticRun run_kinetic(const SimParams& params, const PhaseField& f_in, int snapshot_stride,
                       const KineticSnapshotCallback& on_snapshot) {
    VelocityProfile maxw = discrete_maxwellian(params.vgrid);
    {
        const double lo = 1.0 / params.bigA, hi = params.bigA;
        for (int i = 0; i < f_in.n; ++i)
            for (int j = 0; j < f_in.nv; ++j) {
                double r = f_in(i, j) / maxw[j];
                if (r < lo - params.tol.sandwich_slack || r > hi + params.tol.sandwich_slack)
                    throw std::invalid_argument("run_kinetic: initial data outside the sandwich");
            }
    }

    KineticIntegrator integ(params, f_in);
    KineticRun run;
    run.params = params;
    run.diagnostics = DiagnosticSeries({"mass", "l2_sq", "ratio_min", "ratio_max", "perturbation",
                                        "functional", "micro", "macro", "rho_min", "rho_max",
                                        "steps"});

    auto record = [&]() {
        const PhaseField& f = integ.state();
        LyapunovRecord lr = lyapunov(f, params, integ.maxwellian(), integ.time());
        auto [rmin, rmax] = integ.ratio_range();
        ScalarField rho = density(f, params.vgrid);
        auto [dmn, dmx] = std::minmax_element(rho.values.begin(), rho.values.end());
        double vals[11] = {total_mass(f, params.grid, params.vgrid),
                           lr.l2_sq,
                           rmin,
                           rmax,
                           lr.perturbation,
                           lr.functional,
                           lr.micro,
                           lr.macro,
                           *dmn,
                           *dmx,
                           static_cast<double>(integ.steps())};
        run.diagnostics.add_row(integ.time(), vals);
        if (on_snapshot) on_snapshot(integ.time(), f);
    };

    record();
    const double dt0 = params.dt_policy();
    while (integ.time() < params.t_end - 1e-12 * params.t_end) {
        double t_next = std::min(params.t_end, integ.time() + dt0 * snapshot_stride);
        integ.advance_to(t_next);
        record();
    }
    run.state = integ.state();
    run.t = integ.time();
    run.steps = integ.steps();
    return run;
}

PhaseField fixed_point_map(const PhaseField& f_in, const FrozenDensity& rho_f, double alpha,
                           double bigA, double t_end, double dt, const TorusGrid& grid,
                           const VelocityGrid& vgrid, const KineticSnapshotCallback& on_step) {
    VelocityProfile maxw = discrete_maxwellian(vgrid);
    PhaseField g = f_in;
    double t = 0.0;
    const double lo = 1.0 / bigA - 1e-12, hi = bigA + 1e-12;
    while (t < t_end - 1e-12 * std::max(1.0, t_end)) {
        double step = std::min(dt, t_end - t);
        ScalarField rho = rho_f(t + 0.5 * step);
        for (int i = 0; i < grid.n; ++i)
            if (rho[i] < lo || rho[i] > hi)
                throw std::invalid_argument("fixed_point_map: frozen density outside [1/A, A]");

        g = transport_step(g, 0.5 * step, 1.0, grid, vgrid);
        for (int i = 0; i < g.n; ++i) {
            double e = std::exp(-std::pow(rho[i], alpha) * step);
            for (int j = 0; j < g.nv; ++j) {
                double tgt = rho[i] * maxw[j];
                g(i, j) = tgt + (g(i, j) - tgt) * e;
            }
        }
        g = transport_step(g, 0.5 * step, 1.0, grid, vgrid);
        t += step;
        if (on_step) on_step(t, g);
    }
    return g;
}

double norm_l1(const PhaseField& f, const TorusGrid& grid, const VelocityGrid& vgrid) {
    double s = 0.0;
    for (double x : f.values) s += std::abs(x);
    return s * grid.dx * vgrid.dv;
}

namespace {

// density trajectory 1 + sum_m a_m cos(2 pi m x + phi_m) exp(-b_m t),
// amplitudes scaled to stay strictly inside [1/A, A]
struct RandomDensityTrajectory {
    std::vector<double> amp, phase, decay;

    static RandomDensityTrajectory draw(std::mt19937_64& rng, double bigA) {
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        RandomDensityTrajectory tr;
        double margin = 0.9 * std::min(bigA - 1.0, 1.0 - 1.0 / bigA);
        double total = 0.0;
        for (int m = 0; m < 3; ++m) {
            tr.amp.push_back(u01(rng));
            tr.phase.push_back(2.0 * std::numbers::pi * u01(rng));
            tr.decay.push_back(2.0 * u01(rng));
            total += tr.amp.back();
        }
        for (auto& a : tr.amp) a *= margin / std::max(total, 1e-12);
        return tr;
    }

    ScalarField eval(double t, const TorusGrid& grid) const {
        ScalarField rho(grid.n, 1.0);
        for (size_t m = 0; m < amp.size(); ++m) {
            double e = std::exp(-decay[m] * t);
            for (int i = 0; i < grid.n; ++i)
                rho[i] += amp[m] * e *
                          std::cos(2.0 * std::numbers::pi * (m + 1.0) * grid.node(i) + phase[m]);
        }
        return rho;
    }
};

} // namespace

ContractionAudit contraction_audit(double alpha, double bigA, const TorusGrid& grid,
                                   const VelocityGrid& vgrid, double horizon, int trials,
                                   std::mt19937_64& rng) {
    VelocityProfile maxw = discrete_maxwellian(vgrid);

    ContractionAudit audit;
    audit.pairs = trials;
    // lambda(z) = z^alpha on [1/A, A]
    audit.lambda0 = std::pow(bigA, -std::abs(alpha));
    double sup_dlam = std::abs(alpha) * std::pow(bigA, std::abs(alpha - 1.0));
    double sup_dzlam = std::abs(alpha + 1.0) * std::pow(bigA, std::abs(alpha));
    double m_inf = *std::max_element(maxw.values.begin(), maxw.values.end());
    audit.c_const = m_inf * (sup_dzlam + bigA * sup_dlam);
    audit.bound_factor =
        audit.c_const / audit.lambda0 * (1.0 - std::exp(-audit.lambda0 * horizon));

    const double dt = horizon / 64.0;
    for (int trial = 0; trial < trials; ++trial) {
        auto tr0 = RandomDensityTrajectory::draw(rng, bigA); // shared initial data
        auto tr1 = RandomDensityTrajectory::draw(rng, bigA);
        auto tr2 = RandomDensityTrajectory::draw(rng, bigA);
        PhaseField f_in = tensor_state(tr0.eval(0.0, grid), maxw);

        // sup_t || f1 - f2 ||_{L1} over the step grid
        double sup_in = 0.0;
        for (int k = 0; k <= 64; ++k) {
            double t = k * dt;
            ScalarField r1 = tr1.eval(t, grid), r2 = tr2.eval(t, grid);
            double d = 0.0;
            for (int i = 0; i < grid.n; ++i) d += std::abs(r1[i] - r2[i]);
            sup_in = std::max(sup_in, d * grid.dx); // * integral of M = 1
        }
        if (sup_in < 1e-14) continue; // degenerate pair

        std::vector<PhaseField> g1_traj;
        fixed_point_map(f_in, [&](double t) { return tr1.eval(t, grid); }, alpha, bigA, horizon,
                        dt, grid, vgrid,
                        [&](double, const PhaseField& g) { g1_traj.push_back(g); });
        double sup_out = 0.0;
        size_t idx = 0;
        fixed_point_map(f_in, [&](double t) { return tr2.eval(t, grid); }, alpha, bigA, horizon,
                        dt, grid, vgrid, [&](double, const PhaseField& g) {
                            PhaseField d = g;
                            const PhaseField& g1 = g1_traj[idx++];
                            for (size_t q = 0; q < d.values.size(); ++q)
                                d.values[q] -= g1.values[q];
                            sup_out = std::max(sup_out, norm_l1(d, grid, vgrid));
                        });
        audit.measured = std::max(audit.measured, sup_out / sup_in);
    }
    return audit;
}

} // namespace kinlab

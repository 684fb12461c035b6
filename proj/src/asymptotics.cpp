#include "kinlab/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kinlab/moments.hpp"
#include "kinlab/spectral.hpp"

namespace kinlab {

namespace {

std::vector<double> snapshot_times(double t_end, double snap_dt) {
    std::vector<double> ts{0.0};
    if (snap_dt > 0.0) {
        for (double t = snap_dt; t < t_end - 1e-12 * t_end; t += snap_dt) ts.push_back(t);
    }
    ts.push_back(t_end);
    return ts;
}

PhaseField ratio_field(const PhaseField& f, const VelocityProfile& maxw) {
    PhaseField h(f.n, f.nv);
    for (int i = 0; i < f.n; ++i)
        for (int j = 0; j < f.nv; ++j) h(i, j) = f(i, j) / maxw[j];
    return h;
}

} // namespace

PhaseField prepared_initial_state(const SimParams& params, double rho_amplitude,
                                  PreparednessPolicy policy, double* eps_prime) {
    params.validate();
    const TorusGrid& grid = params.grid;
    const VelocityGrid& vgrid = params.vgrid;
    VelocityProfile maxw = discrete_maxwellian(vgrid);

    ScalarField rho_in = cosine_density(grid, rho_amplitude);
    for (int i = 0; i < grid.n; ++i)
        if (rho_in[i] < 1.0 / params.bigA || rho_in[i] > params.bigA)
            throw std::invalid_argument("prepared_initial_state: rho_in outside [1/A, A]");

    PhaseField f_in = tensor_state(rho_in, maxw);
    if (eps_prime) *eps_prime = 0.0;
    if (policy == PreparednessPolicy::MatchedPerturbation) {
        // c v cos(2 pi x) M, scaled so || f_in - rho_in M ||_{L2(M^-1)} = eps
        double sv = 0.0;
        for (int j = 0; j < vgrid.nv; ++j) sv += vgrid.node(j) * vgrid.node(j) * maxw[j];
        sv *= vgrid.dv;
        double sx = 0.0;
        for (int i = 0; i < grid.n; ++i) {
            double c = std::cos(2.0 * std::numbers::pi * grid.node(i));
            sx += c * c;
        }
        sx *= grid.dx;
        const double c = params.eps / std::sqrt(sv * sx);
        for (int i = 0; i < grid.n; ++i) {
            double cx = std::cos(2.0 * std::numbers::pi * grid.node(i));
            for (int j = 0; j < vgrid.nv; ++j) f_in(i, j) += c * vgrid.node(j) * cx * maxw[j];
        }
        if (eps_prime)
            *eps_prime = norm_l2_minv(f_in, tensor_state(rho_in, maxw), maxw, grid, vgrid);
    }
    return f_in;
}

PairedRun run_paired(const SimParams& params, double rho_amplitude, PreparednessPolicy policy,
                     double snap_dt) {
    const TorusGrid& grid = params.grid;
    const VelocityGrid& vgrid = params.vgrid;
    VelocityProfile maxw = discrete_maxwellian(vgrid);

    PairedRun run;
    run.params = params;
    PhaseField f_in = prepared_initial_state(params, rho_amplitude, policy, &run.eps_prime);
    ScalarField rho_in = cosine_density(grid, rho_amplitude);

    KineticIntegrator kin(params, f_in);

    DiffusionParams dp;
    dp.alpha = params.alpha;
    dp.bigA = params.bigA;
    dp.grid = grid;
    dp.t_end = params.t_end;
    dp.tol = params.tol;
    const double dif_dt = dp.default_dt();
    ScalarField rho_dif = rho_in;
    double t_dif = 0.0;

    run.series = DiagnosticSeries({"error", "entropy_sq", "micro_sq", "budget"});
    run.kinetic_diagnostics = DiagnosticSeries(
        {"mass", "l2_sq", "perturbation", "functional", "micro", "macro", "steps"});

    double budget = 0.0, prev_micro = 0.0, prev_t = 0.0;
    for (double t : snapshot_times(params.t_end, snap_dt)) {
        kin.advance_to(t);
        while (t_dif < t - 1e-14) {
            double step = std::min(dif_dt, t - t_dif);
            rho_dif = diffusion_step(rho_dif, step, dp.alpha, grid);
            t_dif += step;
        }

        const PhaseField& f = kin.state();
        PhaseField h = ratio_field(f, maxw);
        ScalarField rho_kin = density(f, vgrid);
        ScalarField j_kin = flux(f, vgrid);

        double err = norm_l2_minv(f, tensor_state(rho_dif, maxw), maxw, grid, vgrid);
        double ent = norm_l2_m(h, rho_dif, maxw, grid, vgrid);
        double mic = norm_l2_m(h, rho_kin, maxw, grid, vgrid);
        double mic_sq = mic * mic;
        if (!run.series.rows()) {
            prev_micro = mic_sq;
            prev_t = t;
        }
        budget += 0.5 * (prev_micro + mic_sq) * (t - prev_t);
        prev_micro = mic_sq;
        prev_t = t;

        double vals[4] = {err, ent * ent, mic_sq, budget};
        run.series.add_row(t, vals);
        run.snapshots.push_back({t, rho_kin, j_kin, rho_dif});

        LyapunovRecord rec = lyapunov(f, params, maxw, t);
        double kvals[7] = {total_mass(f, grid, vgrid), rec.l2_sq,       rec.perturbation,
                           rec.functional,             rec.micro,       rec.macro,
                           static_cast<double>(kin.steps())};
        run.kinetic_diagnostics.add_row(t, kvals);
    }
    return run;
}

double micro_dissipation_budget(const PairedRun& run) {
    if (!run.series.rows()) throw std::invalid_argument("micro_dissipation_budget: empty run");
    return run.series.at(run.series.rows() - 1, "budget");
}

DiagnosticSeries entropy_dissipation_report(const PairedRun& run) {
    const double a = run.params.alpha;
    const double eps = run.params.eps;
    const TorusGrid& grid = run.params.grid;

    DiagnosticSeries rep({"q_norm_sq", "i1", "i2", "r_coupling", "entropy_sq"});
    for (size_t k = 0; k < run.snapshots.size(); ++k) {
        const PairedSnapshot& s = run.snapshots[k];
        ScalarField drd = grad(s.rho_dif);
        ScalarField drk = grad(s.rho_kin);

        double q = 0.0, i1 = 0.0, i2 = 0.0, rc = 0.0;
        for (int i = 0; i < grid.n; ++i) {
            double rk = s.rho_kin[i], rd = s.rho_dif[i];
            if (!(rk > 0.0) || !(rd > 0.0))
                throw NumericalFailure("entropy_dissipation_report: nonpositive density");
            double qi = std::pow(rk, a / 2.0) * s.j_kin[i] / eps + std::pow(rd, -a / 2.0) * drd[i];
            q += qi * qi;
            double d1 = 1.0 - std::pow(rk / rd, a);
            i1 += 0.25 * d1 * d1 * std::pow(rk, -a) * drd[i] * drd[i];
            double d2 = 1.0 - std::pow(rk / rd, a / 2.0);
            i2 += d2 * d2 * std::pow(rk * rd, -a / 2.0) * drd[i] * drd[i];
            rc += (drk[i] + std::pow(rk, a) * s.j_kin[i] / eps) * std::pow(rd, -a) * drd[i];
        }
        double vals[5] = {q * grid.dx, i1 * grid.dx, i2 * grid.dx, rc * grid.dx,
                          run.series.at(k, "entropy_sq")};
        rep.add_row(s.t, vals);
    }
    return rep;
}

SweepResult epsilon_sweep(const SimParams& base, std::span<const double> eps_list,
                          PreparednessPolicy policy, double rho_amplitude, double snap_dt) {
    if (eps_list.empty()) throw std::invalid_argument("epsilon_sweep: empty eps list");
    for (size_t k = 0; k + 1 < eps_list.size(); ++k)
        if (eps_list[k + 1] >= eps_list[k])
            throw std::invalid_argument("epsilon_sweep: eps list must be strictly decreasing");
    const double eps_cap = std::min(eps_zero(base.alpha, base.bigA), 0.5);
    for (double e : eps_list)
        if (!(e > 0.0 && e < eps_cap))
            throw std::invalid_argument("epsilon_sweep: eps entries must lie in (0, " +
                                        std::to_string(eps_cap) + ")");

    SweepResult res;

    // pilot run at the coarsest eps: fit the post-peak error decay rate
    {
        SimParams p = base;
        p.eps = eps_list.front();
        PairedRun pilot = run_paired(p, rho_amplitude, policy, snap_dt);
        const auto& times = pilot.series.times();
        std::vector<double> err = pilot.series.column("error");
        size_t peak = static_cast<size_t>(
            std::max_element(err.begin(), err.end()) - err.begin());
        std::vector<double> ft, fv;
        for (size_t k = peak; k < err.size(); ++k)
            if (err[k] > 0.0) {
                ft.push_back(times[k]);
                fv.push_back(err[k]);
            }
        if (ft.size() >= 3) {
            DecayFit fit = decay_rate_fit(ft, fv, ft.front(), ft.back(), 3);
            if (fit.rate > 0.0) res.kappa_hat = 1.0 / (2.0 * fit.rate);
        }
    }

    for (double eps : eps_list) {
        SimParams p = base;
        p.eps = eps;
        double ep = policy == PreparednessPolicy::MatchedPerturbation ? eps : 0.0;
        double level = eps + ep;
        if (res.kappa_hat > 0.0 && level < 1.0)
            p.t_end = std::max(base.t_end, -res.kappa_hat * std::log(level));
        PairedRun run = run_paired(p, rho_amplitude, policy, snap_dt);
        std::vector<double> err = run.series.column("error");
        double sup = *std::max_element(err.begin(), err.end());
        res.eps_values.push_back(eps);
        res.eps_primes.push_back(run.eps_prime);
        res.sup_errors.push_back(sup);
        res.budgets.push_back(micro_dissipation_budget(run));
        res.horizons.push_back(p.t_end);
    }

    for (size_t k = 0; k + 1 < res.sup_errors.size(); ++k)
        if (res.sup_errors[k + 1] >= res.sup_errors[k]) res.monotone = false;

    // least-squares fit of log sup_error against log(eps + eps')
    std::vector<double> lx, ly;
    for (size_t k = 0; k < res.eps_values.size(); ++k)
        if (res.sup_errors[k] > 0.0) {
            lx.push_back(std::log(res.eps_values[k] + res.eps_primes[k]));
            ly.push_back(std::log(res.sup_errors[k]));
        }
    if (lx.size() >= 2) {
        double n = static_cast<double>(lx.size());
        double sx = 0.0, sy = 0.0;
        for (size_t k = 0; k < lx.size(); ++k) {
            sx += lx[k];
            sy += ly[k];
        }
        double xb = sx / n, yb = sy / n, sxx = 0.0, sxy = 0.0;
        for (size_t k = 0; k < lx.size(); ++k) {
            sxx += (lx[k] - xb) * (lx[k] - xb);
            sxy += (lx[k] - xb) * (ly[k] - yb);
        }
        if (sxx > 0.0) {
            res.fitted_exponent = sxy / sxx;
            res.fitted_prefactor = std::exp(yb - res.fitted_exponent * xb);
        }
    }
    return res;
}

} // namespace kinlab

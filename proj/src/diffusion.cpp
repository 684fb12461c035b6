#include "kinlab/diffusion.hpp"

#include <algorithm>
#include <cmath>

namespace kinlab {

double DiffusionParams::default_dt() const {
    // rho^alpha minimized at an endpoint of [1/A, A]
    double lo = std::min(std::pow(bigA, alpha), std::pow(bigA, -alpha));
    return 0.4 * grid.dx * grid.dx * lo;
}

ScalarField diffusion_step(const ScalarField& rho, double dt, double alpha,
                           const TorusGrid& grid) {
    const int n = grid.n;
    if (rho.size() != n) throw std::invalid_argument("diffusion_step: grid mismatch");
    double max_mob = 0.0;
    std::vector<double> mob(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        if (!(rho[i] > 0.0)) throw NumericalFailure("diffusion_step: nonpositive density");
        mob[static_cast<size_t>(i)] = std::pow(rho[i], -alpha);
        max_mob = std::max(max_mob, mob[static_cast<size_t>(i)]);
    }
    const double dx2 = grid.dx * grid.dx;
    if (dt > dx2 / (2.0 * max_mob) * (1.0 + 1e-12))
        throw NumericalFailure("diffusion_step: CFL violated, refusing step");

    ScalarField out(n);
    const double r = dt / dx2;
    for (int i = 0; i < n; ++i) {
        int ip = grid.wrap(i + 1), im = grid.wrap(i - 1);
        double mu_p = 0.5 * (mob[static_cast<size_t>(i)] + mob[static_cast<size_t>(ip)]);
        double mu_m = 0.5 * (mob[static_cast<size_t>(im)] + mob[static_cast<size_t>(i)]);
        out[i] = rho[i] + r * (mu_p * (rho[ip] - rho[i]) - mu_m * (rho[i] - rho[im]));
    }
    return out;
}

double discrete_dissipation(const ScalarField& rho, double alpha, const TorusGrid& grid) {
    const int n = grid.n;
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        int ip = grid.wrap(i + 1);
        double mu = 0.5 * (std::pow(rho[i], -alpha) + std::pow(rho[ip], -alpha));
        double g = (rho[ip] - rho[i]) / grid.dx;
        s += mu * g * g;
    }
    return s * grid.dx;
}

namespace {

double field_mass(const ScalarField& rho, const TorusGrid& grid) {
    double s = 0.0;
    for (int i = 0; i < grid.n; ++i) s += rho[i];
    return s * grid.dx;
}

} // namespace

DiffusionRun run_diffusion(const DiffusionParams& params, const ScalarField& rho_in,
                           double snap_dt, const DiffusionSnapshotCallback& on_snapshot) {
    const TorusGrid& grid = params.grid;
    const double lo = 1.0 / params.bigA, hi = params.bigA;
    for (int i = 0; i < grid.n; ++i)
        if (rho_in[i] < lo || rho_in[i] > hi)
            throw std::invalid_argument("run_diffusion: initial data outside [1/A, A]");

    DiffusionRun run;
    run.params = params;
    run.state = rho_in;
    run.diagnostics = DiagnosticSeries({"mass", "min", "max", "l2_dist", "dissipation"});

    const double dt0 = params.dt > 0.0 ? params.dt : params.default_dt();
    const double mass0 = field_mass(rho_in, grid);
    const double slack = params.tol.sandwich_slack;

    auto record = [&](double t) {
        const ScalarField& rho = run.state;
        auto [mn, mx] = std::minmax_element(rho.values.begin(), rho.values.end());
        ScalarField dev(grid.n);
        for (int i = 0; i < grid.n; ++i) dev[i] = rho[i] - 1.0;
        double vals[5] = {field_mass(rho, grid), *mn, *mx, norm_l2_x(dev, grid),
                          discrete_dissipation(rho, params.alpha, grid)};
        run.diagnostics.add_row(t, vals);
        if (on_snapshot) on_snapshot(t, rho);
    };

    record(0.0);
    double next_snap = snap_dt > 0.0 ? snap_dt : 0.0;
    while (run.t < params.t_end - 1e-12 * params.t_end) {
        double target = snap_dt > 0.0 ? std::min(next_snap, params.t_end) : params.t_end;
        double step = std::min(dt0, target - run.t);
        ScalarField prev = run.state;
        run.state = diffusion_step(run.state, step, params.alpha, grid);
        run.t += step;

        // max principle audit: range must not expand
        auto [pmn, pmx] = std::minmax_element(prev.values.begin(), prev.values.end());
        auto [cmn, cmx] = std::minmax_element(run.state.values.begin(), run.state.values.end());
        if (*cmn < *pmn - slack || *cmx > *pmx + slack)
            throw InvariantViolation("run_diffusion: maximum principle violated at t=" +
                                     std::to_string(run.t));
        if (*cmn < lo - slack || *cmx > hi + slack)
            throw InvariantViolation("run_diffusion: state left [1/A, A] at t=" +
                                     std::to_string(run.t));
        double mass = field_mass(run.state, grid);
        if (std::abs(mass - mass0) > params.tol.mass_rel * std::abs(mass0))
            throw InvariantViolation("run_diffusion: mass drift at t=" + std::to_string(run.t));

        bool at_snap = snap_dt > 0.0 ? run.t >= next_snap - 1e-12 : true;
        if (at_snap) {
            record(run.t);
            if (snap_dt > 0.0) next_snap += snap_dt;
        }
    }
    return run;
}

DecayFit decay_rate_fit(std::span<const double> times, std::span<const double> values,
                        double t_lo, double t_hi, int min_samples) {
    if (times.size() != values.size())
        throw std::invalid_argument("decay_rate_fit: length mismatch");
    std::vector<double> ts, ys;
    for (size_t k = 0; k < times.size(); ++k) {
        if (times[k] < t_lo || times[k] > t_hi) continue;
        if (!(values[k] > 0.0))
            throw std::invalid_argument("decay_rate_fit: nonpositive value in window");
        ts.push_back(times[k]);
        ys.push_back(std::log(values[k]));
    }
    int need = std::max(3, std::min<int>(min_samples, static_cast<int>(times.size())));
    if (static_cast<int>(ts.size()) < need)
        throw std::invalid_argument("decay_rate_fit: too few samples in window");

    double n = static_cast<double>(ts.size());
    double st = 0.0, sy = 0.0;
    for (size_t k = 0; k < ts.size(); ++k) {
        st += ts[k];
        sy += ys[k];
    }
    double tbar = st / n, ybar = sy / n;
    double stt = 0.0, sty = 0.0, syy = 0.0;
    for (size_t k = 0; k < ts.size(); ++k) {
        double dt = ts[k] - tbar, dy = ys[k] - ybar;
        stt += dt * dt;
        sty += dt * dy;
        syy += dy * dy;
    }
    DecayFit fit;
    fit.samples = static_cast<int>(ts.size());
    double slope = stt > 0.0 ? sty / stt : 0.0;
    fit.rate = std::abs(slope);
    fit.intercept = ybar - slope * tbar;
    fit.r_squared = syy > 0.0 ? (sty * sty) / (stt * syy) : 1.0;
    return fit;
}

} // namespace kinlab

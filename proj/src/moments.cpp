#include "kinlab/moments.hpp"

#include <cmath>

#include "kinlab/spectral.hpp"

namespace kinlab {

ScalarField density(const PhaseField& f, const VelocityGrid& vgrid) {
    ScalarField rho(f.n);
    for (int i = 0; i < f.n; ++i) rho[i] = quad_v(f.row(i), vgrid.dv);
    return rho;
}

ScalarField flux(const PhaseField& f, const VelocityGrid& vgrid) {
    ScalarField j(f.n);
    for (int i = 0; i < f.n; ++i) {
        double s = 0.0;
        auto row = f.row(i);
        for (int k = 0; k < f.nv; ++k) s += row[static_cast<size_t>(k)] * vgrid.node(k);
        j[i] = s * vgrid.dv;
    }
    return j;
}

ScalarField energy(const PhaseField& f, const VelocityGrid& vgrid) {
    ScalarField e(f.n);
    for (int i = 0; i < f.n; ++i) {
        double s = 0.0;
        auto row = f.row(i);
        for (int k = 0; k < f.nv; ++k) {
            double v = vgrid.node(k);
            s += row[static_cast<size_t>(k)] * (v * v - 1.0);
        }
        e[i] = s * vgrid.dv;
    }
    return e;
}

HydroState hydro(const PhaseField& f, const VelocityGrid& vgrid) {
    return {density(f, vgrid), flux(f, vgrid), energy(f, vgrid)};
}

FluxEnergyBound flux_energy_bound_check(const PhaseField& f, const ScalarField& beta,
                                        const VelocityProfile& maxw, const VelocityGrid& vgrid) {
    FluxEnergyBound out{ScalarField(f.n), ScalarField(f.n), ScalarField(f.n)};
    for (int i = 0; i < f.n; ++i) {
        double j = 0.0, e = 0.0, r2 = 0.0;
        auto row = f.row(i);
        for (int k = 0; k < f.nv; ++k) {
            double v = vgrid.node(k);
            double fv = row[static_cast<size_t>(k)];
            j += fv * v;
            e += fv * (v * v - 1.0);
            double d = fv / maxw[k] - beta[i];
            r2 += d * d * maxw[k];
        }
        out.abs_j[i] = std::abs(j * vgrid.dv);
        out.abs_energy[i] = std::abs(e * vgrid.dv);
        out.rhs[i] = std::sqrt(r2 * vgrid.dv);
    }
    return out;
}

FluxEnergyBound flux_energy_bound_check(const PhaseField& f, double beta,
                                        const VelocityProfile& maxw, const VelocityGrid& vgrid) {
    ScalarField b(f.n, beta);
    return flux_energy_bound_check(f, b, maxw, vgrid);
}

DiagnosticSeries moment_residuals(const std::vector<HydroSnapshot>& snaps, double eps, double alpha,
                                  const TorusGrid& grid) {
    if (snaps.size() < 3)
        throw std::invalid_argument("moment_residuals: need at least 3 snapshots");
    const double dt = snaps[1].t - snaps[0].t;
    for (size_t k = 1; k + 1 < snaps.size(); ++k) {
        double step = snaps[k + 1].t - snaps[k].t;
        if (std::abs(step - dt) > 1e-10 * std::max(1.0, std::abs(dt)))
            throw std::invalid_argument("moment_residuals: snapshots not equally spaced");
    }

    DiagnosticSeries series({"mass_residual", "flux_residual"});
    for (size_t k = 1; k + 1 < snaps.size(); ++k) {
        const HydroState& prev = snaps[k - 1].h;
        const HydroState& cur = snaps[k].h;
        const HydroState& next = snaps[k + 1].h;

        ScalarField div_j = grad(cur.j);
        ScalarField div_e = grad(cur.energy);
        ScalarField grad_rho = grad(cur.rho);

        ScalarField res_mass(grid.n), res_flux(grid.n);
        for (int i = 0; i < grid.n; ++i) {
            double drho = (next.rho[i] - prev.rho[i]) / (2.0 * dt);
            double dj = (next.j[i] - prev.j[i]) / (2.0 * dt);
            res_mass[i] = drho + div_j[i] / eps;
            res_flux[i] = dj + div_e[i] / eps + grad_rho[i] / eps +
                          std::pow(cur.rho[i], alpha) * cur.j[i] / (eps * eps);
        }
        double vals[2] = {norm_l2_x(res_mass, grid), norm_l2_x(res_flux, grid)};
        series.add_row(snaps[k].t, vals);
    }
    return series;
}

ScalarField flux_balance_defect(const PhaseField& f, double eps, double alpha,
                                const TorusGrid& grid, const VelocityGrid& vgrid) {
    ScalarField rho = density(f, vgrid);
    for (int i = 0; i < grid.n; ++i)
        if (!(rho[i] > 0.0))
            throw NumericalFailure("flux_balance_defect: nonpositive density");
    ScalarField j = flux(f, vgrid);
    ScalarField grad_rho = grad(rho);
    ScalarField out(grid.n);
    for (int i = 0; i < grid.n; ++i)
        out[i] = grad_rho[i] + std::pow(rho[i], alpha) * j[i] / eps;
    return out;
}

} // namespace kinlab

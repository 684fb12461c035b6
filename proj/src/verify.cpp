#include "kinlab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "kinlab/asymptotics.hpp"
#include "kinlab/io.hpp"
#include "kinlab/kinetic.hpp"
#include "kinlab/moments.hpp"
#include "kinlab/spectral.hpp"

namespace kinlab {

bool VerifyReport::all_pass() const {
    return std::all_of(results.begin(), results.end(),
                       [](const CriterionResult& r) { return r.pass; });
}

std::string VerifyReport::text() const {
    std::ostringstream os;
    for (const auto& r : results)
        os << "criterion " << r.id << ' ' << (r.pass ? "PASS" : "FAIL") << ' ' << r.name << ": "
           << r.detail << '\n';
    return os.str();
}

namespace {

/// Shared outcome of one criterion-1 style run (A = 2, n = nv = 128,
/// f_in = (1 + 0.5 cos 2 pi x) M, t_end = 5), with moment-bound audits on
/// every snapshot.
struct BaseRunOutcome {
    double alpha = 0.0, eps = 0.0;
    double ratio_min = 0.0, ratio_max = 0.0;
    double mass_drift = 0.0;
    DecayAuditReport audit;
    double worst_moment_margin = 0.0; // min over snapshots/betas of rhs - lhs (relative)
    bool failed = false;              // solver threw
    std::string error;
};

BaseRunOutcome base_run(double alpha, double eps) {
    BaseRunOutcome out;
    out.alpha = alpha;
    out.eps = eps;

    SimParams p;
    p.alpha = alpha;
    p.bigA = 2.0;
    p.eps = eps;
    p.grid = TorusGrid(128);
    p.vgrid = VelocityGrid(128, 8.0);
    p.t_end = 5.0;

    VelocityProfile maxw = discrete_maxwellian(p.vgrid);
    PhaseField f_in = tensor_state(cosine_density(p.grid, 0.5), maxw);

    double worst = std::numeric_limits<double>::infinity();
    auto on_snapshot = [&](double, const PhaseField& f) {
        ScalarField rho = density(f, p.vgrid);
        // roundoff allowance: the moment integrals cancel O(1) terms, so
        // near equilibrium both sides sit on a ~1e-12 * moment-scale floor
        ScalarField tol(p.grid.n);
        for (int i = 0; i < p.grid.n; ++i) {
            double s = 0.0;
            for (int j = 0; j < p.vgrid.nv; ++j) {
                double v = p.vgrid.node(j);
                s += std::abs(f(i, j)) * (1.0 + v * v);
            }
            tol[i] = 1e-12 * s * p.vgrid.dv;
        }
        FluxEnergyBound checks[3] = {
            flux_energy_bound_check(f, 0.0, maxw, p.vgrid),
            flux_energy_bound_check(f, 1.0, maxw, p.vgrid),
            flux_energy_bound_check(f, rho, maxw, p.vgrid),
        };
        for (const auto& b : checks)
            for (int i = 0; i < p.grid.n; ++i) {
                double scale = std::max(b.rhs[i], tol[i]);
                worst = std::min(worst, (b.rhs[i] + tol[i] - b.abs_j[i]) / scale);
                worst = std::min(worst, (b.rhs[i] + tol[i] - b.abs_energy[i]) / scale);
            }
    };

    try {
        KineticRun run = run_kinetic(p, f_in, 1, on_snapshot);
        std::vector<double> rmin = run.diagnostics.column("ratio_min");
        std::vector<double> rmax = run.diagnostics.column("ratio_max");
        out.ratio_min = *std::min_element(rmin.begin(), rmin.end());
        out.ratio_max = *std::max_element(rmax.begin(), rmax.end());
        std::vector<double> mass = run.diagnostics.column("mass");
        double m0 = mass.front(), drift = 0.0;
        for (double m : mass) drift = std::max(drift, std::abs(m - m0) / std::abs(m0));
        out.mass_drift = drift;
        out.audit = decay_audit(run.diagnostics, p);
        out.worst_moment_margin = worst;
    } catch (const std::exception& e) {
        out.failed = true;
        out.error = e.what();
    }
    return out;
}

std::string tag(const BaseRunOutcome& r) {
    std::ostringstream os;
    os << "(alpha=" << r.alpha << ", eps=" << r.eps << ")";
    return os.str();
}

CriterionResult check_sandwich(const std::vector<BaseRunOutcome>& runs) {
    CriterionResult c{1, "sandwich propagation"};
    c.pass = true;
    double lo = 2.0, hi = 0.5;
    const double slack = 1e-10;
    std::string bad;
    for (const auto& r : runs) {
        if (r.failed) {
            c.pass = false;
            bad = tag(r) + " aborted: " + r.error;
            break;
        }
        lo = std::min(lo, r.ratio_min);
        hi = std::max(hi, r.ratio_max);
        if (r.ratio_min < 0.5 - slack || r.ratio_max > 2.0 + slack) {
            c.pass = false;
            bad = "violated at " + tag(r);
        }
    }
    c.detail = "f/M range [" + format_g17(lo) + ", " + format_g17(hi) + "] over all runs" +
               (bad.empty() ? "" : "; " + bad);
    return c;
}

CriterionResult check_mass(const std::vector<BaseRunOutcome>& runs) {
    CriterionResult c{2, "mass conservation"};
    c.pass = true;
    double worst = 0.0;
    for (const auto& r : runs) {
        if (r.failed) {
            c.pass = false;
            continue;
        }
        worst = std::max(worst, r.mass_drift);
        if (r.mass_drift >= 1e-11) c.pass = false;
    }
    c.detail = "worst relative drift " + format_g17(worst) + " (limit 1e-11)";
    return c;
}

CriterionResult check_decay(const std::vector<BaseRunOutcome>& runs) {
    CriterionResult c{3, "hypocoercive decay"};
    c.pass = true;
    std::ostringstream os;
    for (const auto& r : runs) {
        if (r.failed || !r.audit.pass()) {
            c.pass = false;
            os << " " << tag(r) << (r.failed ? " aborted" : "")
               << (!r.failed && !r.audit.bound_holds ? " bound-violated" : "")
               << (!r.failed && !r.audit.functional_monotone ? " functional-increased" : "")
               << (!r.failed && !r.audit.rate_at_least_gamma ? " rate-below-gamma" : "");
        }
    }
    double min_ratio = std::numeric_limits<double>::infinity();
    for (const auto& r : runs)
        if (!r.failed && r.audit.gamma > 0.0)
            min_ratio = std::min(min_ratio, r.audit.fitted_rate / r.audit.gamma);
    c.detail = "min fitted-rate/gamma " + format_g17(min_ratio) +
               (c.pass ? "" : "; failures:" + os.str());
    return c;
}

CriterionResult check_fourier(std::mt19937_64& rng) {
    CriterionResult c{4, "fourier estimate suite"};
    const TorusGrid grid(64);
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    std::uniform_int_distribution<int> modes(1, 10);

    double worst = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 1000; ++trial) {
        int kmax = modes(rng);
        ScalarField u(grid.n, amp(rng));
        for (int k = 1; k <= kmax; ++k) {
            double a = amp(rng), b = amp(rng);
            for (int i = 0; i < grid.n; ++i) {
                double th = 2.0 * std::numbers::pi * k * grid.node(i);
                u[i] += a * std::cos(th) + b * std::sin(th);
            }
        }
        FourierEstimateReport rep = fourier_estimate_check(u);
        double scale = std::max(rep.norm_sq, 1e-30);
        worst = std::min({worst, rep.margin_second / scale, rep.margin_first / scale,
                          rep.margin_half / scale});
    }
    bool margins_ok = worst >= -1e-12;

    // single-mode saturation: equality of the third estimate at |k| = 1
    ScalarField mode1(grid.n);
    for (int i = 0; i < grid.n; ++i)
        mode1[i] = std::cos(2.0 * std::numbers::pi * grid.node(i));
    FourierEstimateReport sat = fourier_estimate_check(mode1);
    bool saturated = std::abs(sat.margin_half) <= 1e-12 * sat.fluct_sq;

    c.pass = margins_ok && saturated;
    c.detail = "worst relative margin " + format_g17(worst) + ", k=1 saturation defect " +
               format_g17(sat.margin_half / sat.fluct_sq);
    return c;
}

CriterionResult check_moment_bounds(const std::vector<BaseRunOutcome>& runs) {
    CriterionResult c{5, "pointwise moment bounds"};
    c.pass = true;
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& r : runs) {
        if (r.failed) {
            c.pass = false;
            continue;
        }
        worst = std::min(worst, r.worst_moment_margin);
    }
    if (worst < -1e-10) c.pass = false;
    c.detail = "worst relative margin " + format_g17(worst) +
               " over all snapshots, beta in {0, 1, rho}";
    return c;
}

CriterionResult check_contraction(std::mt19937_64& rng) {
    CriterionResult c{6, "contraction audit"};
    ContractionAudit audit = contraction_audit(1.0, 2.0, TorusGrid(64), VelocityGrid(64, 8.0),
                                               0.05, 20, rng);
    c.pass = audit.measured < 1.0 && audit.measured <= 1.1 * audit.bound_factor;
    c.detail = "measured " + format_g17(audit.measured) + ", closed-form factor " +
               format_g17(audit.bound_factor) + " over " + std::to_string(audit.pairs) + " pairs";
    return c;
}

double heat_rate(int n) {
    DiffusionParams p;
    p.alpha = 0.0;
    p.bigA = 2.0;
    p.grid = TorusGrid(n);
    p.t_end = 0.1;
    DiffusionRun run = run_diffusion(p, cosine_density(p.grid, 0.1), 0.005);
    std::vector<double> dist = run.diagnostics.column("l2_dist");
    DecayFit fit = decay_rate_fit(run.diagnostics.times(), dist, 0.0, p.t_end, 5);
    return fit.rate;
}

CriterionResult check_diffusion() {
    CriterionResult c{7, "diffusion solver validation"};
    const double pi2 = 4.0 * std::numbers::pi * std::numbers::pi;

    // single-mode decay rate, Richardson-extrapolated in n (dt ~ dx^2 so
    // both error terms cancel together)
    double r1 = heat_rate(128), r2 = heat_rate(256);
    double rate = (4.0 * r2 - r1) / 3.0;
    bool rate_ok = std::abs(rate - pi2) <= 0.02 * pi2;

    // maximum principle + mass conservation across the diffusion regimes
    bool invariants_ok = true;
    std::string inv_err;
    for (double alpha : {-1.0, 0.0, 0.5}) {
        DiffusionParams p;
        p.alpha = alpha;
        p.bigA = 2.0;
        p.grid = TorusGrid(64);
        p.t_end = 0.05;
        try {
            DiffusionRun run = run_diffusion(p, cosine_density(p.grid, 0.4), 0.0);
            std::vector<double> mass = run.diagnostics.column("mass");
            for (double m : mass)
                if (std::abs(m - mass.front()) > 1e-11 * std::abs(mass.front()))
                    invariants_ok = false;
        } catch (const std::exception& e) {
            invariants_ok = false;
            inv_err = e.what();
        }
    }

    // dissipation identity: centered d/dt of the squared distance vs -2 D
    DiffusionParams p;
    p.alpha = 0.5;
    p.bigA = 2.0;
    p.grid = TorusGrid(64);
    p.t_end = 0.04;
    DiffusionRun run = run_diffusion(p, cosine_density(p.grid, 0.3), 0.002);
    std::vector<double> dist = run.diagnostics.column("l2_dist");
    std::vector<double> dis = run.diagnostics.column("dissipation");
    const auto& ts = run.diagnostics.times();
    double worst_rel = 0.0;
    for (size_t k = 1; k + 1 < ts.size(); ++k) {
        double de = 0.5 * (dist[k + 1] * dist[k + 1] - dist[k - 1] * dist[k - 1]) /
                    (ts[k + 1] - ts[k - 1]);
        worst_rel = std::max(worst_rel, std::abs(de + dis[k]) / dis[k]);
    }
    bool dissipation_ok = worst_rel <= 0.05;

    c.pass = rate_ok && invariants_ok && dissipation_ok;
    c.detail = "extrapolated heat rate " + format_g17(rate) + " (target " + format_g17(pi2) +
               "), dissipation defect " + format_g17(worst_rel) +
               (invariants_ok ? "" : "; invariant failure " + inv_err);
    return c;
}

CriterionResult check_budget() {
    CriterionResult c{8, "micro-dissipation budget scaling"};
    SimParams base;
    base.alpha = 0.0;
    base.bigA = 2.0;
    base.grid = TorusGrid(64);
    base.vgrid = VelocityGrid(64, 8.0);
    base.t_end = 0.5;

    const double eps_list[] = {0.4, 0.2, 0.1, 0.05};
    std::vector<double> budgets;
    for (double eps : eps_list) {
        SimParams p = base;
        p.eps = eps;
        PairedRun run = run_paired(p, 0.5, PreparednessPolicy::WellPrepared, 0.005);
        budgets.push_back(micro_dissipation_budget(run));
    }
    c.pass = true;
    std::ostringstream os;
    os << "ratios per eps halving:";
    for (size_t k = 0; k + 1 < budgets.size(); ++k) {
        double r = budgets[k] / budgets[k + 1];
        os << ' ' << format_g17(r);
        if (r < 2.5 || r > 5.5) c.pass = false;
    }
    os << " (window [2.5, 5.5])";
    c.detail = os.str();
    return c;
}

} // namespace

VerifyReport run_verification(unsigned long long seed) {
    std::mt19937_64 rng(seed);

    std::vector<BaseRunOutcome> runs;
    for (double alpha : {-1.0, 0.0, 1.0})
        for (double eps : {0.25, 0.1}) runs.push_back(base_run(alpha, eps));

    VerifyReport rep;
    rep.results.push_back(check_sandwich(runs));
    rep.results.push_back(check_mass(runs));
    rep.results.push_back(check_decay(runs));
    rep.results.push_back(check_fourier(rng));
    rep.results.push_back(check_moment_bounds(runs));
    rep.results.push_back(check_contraction(rng));
    rep.results.push_back(check_diffusion());
    rep.results.push_back(check_budget());
    return rep;
}

CriterionResult check_limit_sweep() {
    CriterionResult c{9, "diffusive-limit sweep"};
    SimParams base;
    base.alpha = 0.0;
    base.bigA = 2.0;
    base.grid = TorusGrid(64);
    base.vgrid = VelocityGrid(64, 8.0);
    base.t_end = 0.5;

    const double eps_list[] = {0.4, 0.2, 0.1, 0.05, 0.025};
    SweepResult sweep =
        epsilon_sweep(base, eps_list, PreparednessPolicy::WellPrepared, 0.5, 0.005);
    c.pass = sweep.monotone && sweep.fitted_exponent >= 0.20;
    c.detail = "fitted exponent " + format_g17(sweep.fitted_exponent) + " (floor 0.20), sup errors" +
               [&] {
                   std::string s;
                   for (double e : sweep.sup_errors) s += ' ' + format_g17(e);
                   return s;
               }() +
               (sweep.monotone ? " strictly decreasing" : " NOT strictly decreasing");
    return c;
}

CriterionResult check_longtime_closure() {
    CriterionResult c{10, "long-time closure"};
    SimParams p;
    p.alpha = 0.0;
    p.bigA = 2.0;
    p.eps = 0.1;
    p.grid = TorusGrid(64);
    p.vgrid = VelocityGrid(64, 8.0);
    p.t_end = 4.0;

    PairedRun run = run_paired(p, 0.5, PreparednessPolicy::WellPrepared, 0.05);
    std::vector<double> err = run.series.column("error");
    try {
        DecayFit fit = decay_rate_fit(run.series.times(), err, 1.0, 4.0, 10);
        c.pass = fit.r_squared > 0.99;
        c.detail = "log-linear fit over t in [1, 4]: rate " + format_g17(fit.rate) + ", R^2 " +
                   format_g17(fit.r_squared) + " (need > 0.99)";
    } catch (const std::exception& e) {
        c.pass = false;
        c.detail = std::string("fit failed: ") + e.what();
    }
    return c;
}

} // namespace kinlab

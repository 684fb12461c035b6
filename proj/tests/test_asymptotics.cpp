#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kinlab/asymptotics.hpp"
#include "kinlab/moments.hpp"
#include "kinlab/spectral.hpp"

using namespace kinlab;

namespace {

SimParams paired_params(double alpha, double eps, int n = 64, double t_end = 0.5) {
    SimParams p;
    p.alpha = alpha;
    p.bigA = 2.0;
    p.eps = eps;
    p.grid = TorusGrid(n);
    p.vgrid = VelocityGrid(64, 8.0);
    p.t_end = t_end;
    return p;
}

double sup_error(const PairedRun& run) {
    double s = 0.0;
    for (size_t r = 0; r < run.series.rows(); ++r)
        s = std::max(s, run.series.at(r, "error"));
    return s;
}

} // namespace

TEST_CASE("prepared initial state: policies and hypothesis checks") {
    SimParams p = paired_params(1.0, 0.2);
    double ep = -1.0;
    PhaseField f = prepared_initial_state(p, 0.4, PreparednessPolicy::WellPrepared, &ep);
    CHECK(ep == 0.0);
    VelocityProfile m = discrete_maxwellian(p.vgrid);
    ScalarField rho = density(f, p.vgrid);
    for (int i = 0; i < p.grid.n; ++i)
        CHECK(rho[i] == doctest::Approx(1.0 + 0.4 * std::cos(2.0 * std::numbers::pi *
                                                             p.grid.node(i))).epsilon(1e-12));

    prepared_initial_state(p, 0.4, PreparednessPolicy::MatchedPerturbation, &ep);
    CHECK(ep == doctest::Approx(p.eps).epsilon(1e-12));

    CHECK_THROWS(prepared_initial_state(p, 1.5, PreparednessPolicy::WellPrepared));
}

TEST_CASE("paired run from equilibrium stays at zero error") {
    SimParams p = paired_params(0.0, 0.2, 32, 0.2);
    PairedRun run = run_paired(p, 0.0, PreparednessPolicy::WellPrepared, 0.05);
    CHECK(run.eps_prime == 0.0);
    for (size_t r = 0; r < run.series.rows(); ++r) {
        CHECK(run.series.at(r, "error") < 1e-12);
        CHECK(run.series.at(r, "micro_sq") < 1e-24);
    }
    CHECK(micro_dissipation_budget(run) < 1e-24);
}

TEST_CASE("paired run: error bounded, decaying in t, and decreasing in eps") {
    SimParams p = paired_params(0.0, 0.1, 64, 1.0);
    PairedRun run = run_paired(p, 0.5, PreparednessPolicy::WellPrepared, 0.05);

    double sup = sup_error(run);
    CHECK(sup > 0.0);
    CHECK(sup < 0.5); // much smaller than the O(1) initial fluctuation
    // exponential trend: late error well below early error
    CHECK(run.series.at(run.series.rows() - 1, "error") <
          0.5 * run.series.at(1, "error"));
    for (size_t r = 0; r < run.series.rows(); ++r)
        CHECK(run.series.at(r, "error") >= 0.0);

    SimParams ph = paired_params(0.0, 0.05, 64, 1.0);
    PairedRun half = run_paired(ph, 0.5, PreparednessPolicy::WellPrepared, 0.05);
    CHECK(sup_error(half) < sup);
}

TEST_CASE("error and entropy series agree: same quantity in two coordinates") {
    // eps small enough that the v-weighted perturbation keeps f inside the
    // sandwich up to |v| = vmax
    SimParams p = paired_params(1.0, 0.02, 32, 0.1);
    PairedRun run = run_paired(p, 0.2, PreparednessPolicy::MatchedPerturbation, 0.02);
    CHECK(run.eps_prime == doctest::Approx(p.eps).epsilon(1e-12));
    for (size_t r = 0; r < run.series.rows(); ++r) {
        double e = run.series.at(r, "error");
        double s = run.series.at(r, "entropy_sq");
        CHECK(e * e == doctest::Approx(s).epsilon(1e-12));
    }
}

TEST_CASE("micro-dissipation budget: eps^2 scaling and monotonicity") {
    auto budget_at = [&](double eps) {
        SimParams p = paired_params(0.0, eps, 64, 0.5);
        PairedRun run = run_paired(p, 0.5, PreparednessPolicy::WellPrepared, 0.01);
        for (size_t r = 1; r < run.series.rows(); ++r)
            CHECK(run.series.at(r, "budget") >= run.series.at(r - 1, "budget"));
        return micro_dissipation_budget(run);
    };
    double b2 = budget_at(0.2), b1 = budget_at(0.1);
    CHECK(b2 / b1 == doctest::Approx(4.0).epsilon(0.5));
}

TEST_CASE("entropy dissipation report: zeros at equilibrium, signs in general") {
    SimParams eq = paired_params(1.0, 0.2, 32, 0.2);
    PairedRun run_eq = run_paired(eq, 0.0, PreparednessPolicy::WellPrepared, 0.05);
    DiagnosticSeries rep_eq = entropy_dissipation_report(run_eq);
    for (size_t r = 0; r < rep_eq.rows(); ++r) {
        CHECK(std::abs(rep_eq.at(r, "q_norm_sq")) < 1e-20);
        CHECK(std::abs(rep_eq.at(r, "i1")) < 1e-20);
        CHECK(std::abs(rep_eq.at(r, "i2")) < 1e-20);
        CHECK(std::abs(rep_eq.at(r, "r_coupling")) < 1e-10);
    }

    SimParams p = paired_params(1.0, 0.2, 64, 0.5);
    PairedRun run = run_paired(p, 0.4, PreparednessPolicy::WellPrepared, 0.02);
    DiagnosticSeries rep = entropy_dissipation_report(run);

    // I1 <= K' entropy_sq with K' = (A^3 / 4) sup |d_x rho_dif|^2, from
    // (1 - rho/rho_dif)^2 / rho <= A^3 (rho - rho_dif)^2 at alpha = 1 and
    // the velocity-average lower bound entropy_sq >= ||rho - rho_dif||^2
    double grad_sup_sq = 0.0;
    for (const auto& s : run.snapshots) {
        ScalarField g = grad(s.rho_dif);
        for (int i = 0; i < p.grid.n; ++i) grad_sup_sq = std::max(grad_sup_sq, g[i] * g[i]);
    }
    double kprime = std::pow(p.bigA, 3) / 4.0 * grad_sup_sq;
    for (size_t r = 0; r < rep.rows(); ++r) {
        CHECK(rep.at(r, "i1") >= 0.0);
        CHECK(rep.at(r, "i2") >= 0.0);
        CHECK(rep.at(r, "i1") <= kprime * rep.at(r, "entropy_sq") + 1e-20);
    }
}

TEST_CASE("epsilon sweep: validation, monotone errors, positive exponent") {
    SimParams base = paired_params(0.0, 0.1, 32, 0.25);
    const double bad_order[] = {0.1, 0.2};
    CHECK_THROWS(epsilon_sweep(base, bad_order, PreparednessPolicy::WellPrepared, 0.5, 0.05));
    const double out_of_range[] = {0.6, 0.3};
    CHECK_THROWS(epsilon_sweep(base, out_of_range, PreparednessPolicy::WellPrepared, 0.5, 0.05));

    const double eps_list[] = {0.4, 0.2, 0.1};
    SweepResult sweep = epsilon_sweep(base, eps_list, PreparednessPolicy::WellPrepared, 0.5, 0.05);
    CHECK(sweep.eps_values.size() == 3);
    CHECK(sweep.monotone);
    CHECK(sweep.fitted_exponent > 0.0);
    for (double h : sweep.horizons) CHECK(h >= base.t_end);
    for (double e : sweep.sup_errors) CHECK(e > 0.0);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "kinlab/hypocoercivity.hpp"
#include "kinlab/kinetic.hpp"
#include "kinlab/moments.hpp"

using namespace kinlab;

namespace {

SimParams small_params(double alpha, double eps) {
    SimParams p;
    p.alpha = alpha;
    p.bigA = 2.0;
    p.eps = eps;
    p.grid = TorusGrid(64);
    p.vgrid = VelocityGrid(64, 8.0);
    p.t_end = 1.0;
    return p;
}

} // namespace

TEST_CASE("micro projection removes the local equilibrium part") {
    SimParams p = small_params(1.0, 0.25);
    VelocityProfile m = discrete_maxwellian(p.vgrid);

    PhaseField f = tensor_state(cosine_density(p.grid, 0.4), m);
    PhaseField mp = micro_projection(f, m, p.vgrid);
    for (double x : mp.values) CHECK(std::abs(x) < 1e-14);

    for (int i = 0; i < p.grid.n; ++i)
        for (int j = 0; j < p.vgrid.nv; ++j)
            f(i, j) = (1.0 + 0.1 * p.vgrid.node(j)) * m[j];
    mp = micro_projection(f, m, p.vgrid);
    for (int i = 0; i < p.grid.n; ++i)
        for (int j = 0; j < p.vgrid.nv; ++j)
            CHECK(mp(i, j) == doctest::Approx(0.1 * p.vgrid.node(j) * m[j]).epsilon(1e-10));

    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.1, 1.0);
    for (auto& x : f.values) x = u(rng);
    ScalarField rho = density(micro_projection(f, m, p.vgrid), p.vgrid);
    for (int i = 0; i < p.grid.n; ++i) CHECK(std::abs(rho[i]) < 1e-13);
}

TEST_CASE("closed-form decay rate") {
    CHECK(theoretical_gamma(0.0, 2.0) == doctest::Approx(1.0 / 24.0).epsilon(1e-14));
    CHECK(theoretical_gamma(1.0, 2.0) == doctest::Approx(1.0 / 96.0).epsilon(1e-14));
    CHECK(theoretical_gamma(0.7, 1.0 + 1e-12) == doctest::Approx(1.0 / 24.0).epsilon(1e-9));
}

TEST_CASE("lyapunov record on reference states") {
    SimParams p = small_params(0.0, 0.25);
    VelocityProfile m = discrete_maxwellian(p.vgrid);

    PhaseField eq(p.grid.n, p.vgrid.nv);
    for (int i = 0; i < p.grid.n; ++i)
        for (int j = 0; j < p.vgrid.nv; ++j) eq(i, j) = m[j];
    LyapunovRecord r0 = lyapunov(eq, p, m, 0.0);
    CHECK(std::abs(r0.l2_sq) < 1e-24);
    CHECK(std::abs(r0.perturbation) < 1e-24);
    CHECK(std::abs(r0.functional) < 1e-24);

    PhaseField f = tensor_state(cosine_density(p.grid, 0.5), m);
    LyapunovRecord r = lyapunov(f, p, m, 0.0);
    CHECK(std::abs(r.perturbation) < 1e-12); // j = 0
    CHECK(std::abs(r.l2_sq - 0.125) < 1e-4);
    CHECK(std::abs(r.macro - 0.125) < 1e-4);
    CHECK(std::abs(r.micro) < 1e-12);
}

TEST_CASE("pythagoras: squared distance splits into micro + macro") {
    SimParams p = small_params(1.0, 0.25);
    VelocityProfile m = discrete_maxwellian(p.vgrid);
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(0.6, 1.8);
    for (int trial = 0; trial < 20; ++trial) {
        PhaseField f(p.grid.n, p.vgrid.nv);
        for (int i = 0; i < p.grid.n; ++i)
            for (int j = 0; j < p.vgrid.nv; ++j) f(i, j) = u(rng) * m[j];
        // the split holds for unit-mass states, where the mean density is 1
        double mass = total_mass(f, p.grid, p.vgrid);
        for (auto& x : f.values) x /= mass;
        LyapunovRecord r = lyapunov(f, p, m, 0.0);
        CHECK(r.l2_sq == doctest::Approx(r.micro + r.macro).epsilon(1e-12));
    }
}

TEST_CASE("norm equivalence of the perturbed functional along a run") {
    SimParams p = small_params(1.0, 0.25);
    REQUIRE(p.eps <= eps_zero(p.alpha, p.bigA));
    VelocityProfile m = discrete_maxwellian(p.vgrid);
    KineticRun run = run_kinetic(p, tensor_state(cosine_density(p.grid, 0.5), m), 1);
    double delta = perturbation_weight(p.alpha, p.bigA, p.eps);
    for (size_t r = 0; r < run.diagnostics.rows(); ++r) {
        double l2 = run.diagnostics.at(r, "l2_sq");
        double pert = run.diagnostics.at(r, "perturbation");
        double func = run.diagnostics.at(r, "functional");
        CHECK(std::abs(delta * pert) <= 0.5 * l2 + 1e-24);
        CHECK(func >= 0.5 * l2 - 1e-24);
        CHECK(func <= 1.5 * l2 + 1e-24);
    }
}

TEST_CASE("relaxation alone decreases distance to equilibrium and micro part") {
    SimParams p = small_params(1.0, 0.5);
    VelocityProfile m = discrete_maxwellian(p.vgrid);
    PhaseField f = tensor_state(cosine_density(p.grid, 0.4), m);
    // put some micro content in first via transport
    f = transport_step(f, 0.02, p.eps, p.grid, p.vgrid);
    for (int step = 0; step < 20; ++step) {
        double before = norm_l2_minv_eq(f, m, p.grid, p.vgrid);
        double micro_before = lyapunov(f, p, m, 0.0).micro;
        f = relaxation_step(f, 0.01, p.eps, p.alpha, m, p.grid, p.vgrid);
        double after = norm_l2_minv_eq(f, m, p.grid, p.vgrid);
        double micro_after = lyapunov(f, p, m, 0.0).micro;
        CHECK(after <= before * (1.0 + 1e-12));
        CHECK(micro_after <= micro_before * (1.0 + 1e-12));
    }
}

TEST_CASE("decay audit: equilibrium run passes trivially") {
    SimParams p = small_params(1.0, 0.25);
    p.t_end = 0.1;
    VelocityProfile m = discrete_maxwellian(p.vgrid);
    PhaseField eq(p.grid.n, p.vgrid.nv);
    for (int i = 0; i < p.grid.n; ++i)
        for (int j = 0; j < p.vgrid.nv; ++j) eq(i, j) = m[j];
    KineticRun run = run_kinetic(p, eq, 1);
    DecayAuditReport rep = decay_audit(run.diagnostics, p);
    CHECK(rep.functional_monotone);
    CHECK(rep.bound_holds);
}

TEST_CASE("decay audit on the reference run (A=2, alpha=1, eps=0.25)") {
    SimParams p = small_params(1.0, 0.25);
    p.t_end = 2.0;
    VelocityProfile m = discrete_maxwellian(p.vgrid);
    KineticRun run = run_kinetic(p, tensor_state(cosine_density(p.grid, 0.5), m), 1);
    DecayAuditReport rep = decay_audit(run.diagnostics, p);
    CHECK(rep.gamma == doctest::Approx(1.0 / 96.0));
    CHECK(rep.functional_monotone);
    CHECK(rep.bound_holds);
    CHECK(rep.rate_at_least_gamma);
    CHECK(rep.fitted_rate >= 1.0 / 96.0);
}

TEST_CASE("decay audit flags a non-monotone functional") {
    SimParams p = small_params(1.0, 0.25);
    DiagnosticSeries s({"l2_sq", "functional", "steps"});
    double r0[3] = {1.0, 1.0, 0.0};
    double r1[3] = {0.9, 1.2, 1.0}; // functional increases
    double r2[3] = {0.8, 0.8, 2.0};
    s.add_row(0.0, r0);
    s.add_row(0.1, r1);
    s.add_row(0.2, r2);
    DecayAuditReport rep = decay_audit(s, p);
    CHECK_FALSE(rep.functional_monotone);
}

TEST_CASE("perturbation weight formula") {
    CHECK(perturbation_weight(0.0, 2.0, 0.3) == doctest::Approx(0.1));
    CHECK(perturbation_weight(1.0, 2.0, 0.24) == doctest::Approx(0.24 / 12.0));
}

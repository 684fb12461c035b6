#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kinlab/diffusion.hpp"
#include "kinlab/spectral.hpp"

using namespace kinlab;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("constant states are stationary") {
    TorusGrid g(32);
    ScalarField rho(g.n, 1.3);
    ScalarField out = diffusion_step(rho, 1e-4, -1.0, g);
    for (int i = 0; i < g.n; ++i) CHECK(out[i] == doctest::Approx(1.3).epsilon(1e-15));
}

TEST_CASE("heat step multiplies a single mode by the 3-point stencil symbol") {
    TorusGrid g(64);
    const double dt = 0.3 * g.dx * g.dx;
    ScalarField rho = cosine_density(g, 0.2);
    ScalarField out = diffusion_step(rho, dt, 0.0, g);

    double symbol = 1.0 - 4.0 * dt / (g.dx * g.dx) * std::pow(std::sin(pi * g.dx), 2);
    SpectrumField s = forward_transform(out);
    double amp = 2.0 * std::abs(s.coeff(1)); // mode amplitude of a cos(2 pi x)
    CHECK(amp == doctest::Approx(0.2 * symbol).epsilon(1e-12));
    CHECK(std::abs(s.coeff(0).real() - 1.0) < 1e-14); // mean unchanged
}

TEST_CASE("mass is conserved over many steps") {
    TorusGrid g(64);
    DiffusionParams p;
    p.alpha = -1.0;
    p.bigA = 2.0;
    p.grid = g;
    ScalarField rho = cosine_density(g, 0.4);
    const double dt = p.default_dt();
    double mass0 = 0.0;
    for (int i = 0; i < g.n; ++i) mass0 += rho[i];
    for (int step = 0; step < 100000; ++step) rho = diffusion_step(rho, dt, p.alpha, g);
    double mass = 0.0;
    for (int i = 0; i < g.n; ++i) mass += rho[i];
    CHECK(std::abs(mass - mass0) < 1e-11 * std::abs(mass0));
}

TEST_CASE("CFL violation and nonpositive density are refused") {
    TorusGrid g(32);
    ScalarField rho = cosine_density(g, 0.4);
    CHECK_THROWS_AS(diffusion_step(rho, g.dx * g.dx, 1.0, g), NumericalFailure);
    ScalarField bad(g.n, -1.0);
    CHECK_THROWS_AS(diffusion_step(bad, 1e-6, 1.0, g), NumericalFailure);
}

TEST_CASE("equilibrium run is stationary") {
    DiffusionParams p;
    p.alpha = 0.5;
    p.bigA = 2.0;
    p.grid = TorusGrid(64);
    p.t_end = 0.1;
    DiffusionRun run = run_diffusion(p, ScalarField(64, 1.0), 0.0);
    for (int i = 0; i < 64; ++i) CHECK(run.state[i] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("heat-mode run decays at 4 pi^2 within 2%") {
    DiffusionParams p;
    p.alpha = 0.0;
    p.bigA = 2.0;
    p.grid = TorusGrid(256);
    p.t_end = 0.1;
    DiffusionRun run = run_diffusion(p, cosine_density(p.grid, 0.5), 0.005);
    DecayFit fit = decay_rate_fit(run.diagnostics.times(), run.diagnostics.column("l2_dist"),
                                  0.0, p.t_end, 10);
    CHECK(fit.rate == doctest::Approx(4.0 * pi * pi).epsilon(0.02));
}

TEST_CASE("porous-medium-side run: bounds hold and decay is exponential") {
    DiffusionParams p;
    p.alpha = -1.0;
    p.bigA = 2.0;
    p.grid = TorusGrid(64);
    p.t_end = 0.5;
    DiffusionRun run = run_diffusion(p, cosine_density(p.grid, 0.5), 0.005);
    for (size_t r = 0; r < run.diagnostics.rows(); ++r) {
        CHECK(run.diagnostics.at(r, "min") >= 0.5 - 1e-12);
        CHECK(run.diagnostics.at(r, "max") <= 1.5 + 1e-12);
    }
    DecayFit fit = decay_rate_fit(run.diagnostics.times(), run.diagnostics.column("l2_dist"),
                                  0.05, 0.5, 10);
    CHECK(fit.rate > 0.0);
    CHECK(fit.r_squared > 0.999);
}

TEST_CASE("per-step range never expands") {
    DiffusionParams p;
    p.alpha = 0.5;
    p.bigA = 2.0;
    p.grid = TorusGrid(64);
    p.t_end = 0.2;
    DiffusionRun run = run_diffusion(p, cosine_density(p.grid, 0.4), 0.0);
    std::vector<double> mins = run.diagnostics.column("min");
    std::vector<double> maxs = run.diagnostics.column("max");
    for (size_t r = 1; r < mins.size(); ++r) {
        CHECK(mins[r] >= mins[r - 1] - 1e-12);
        CHECK(maxs[r] <= maxs[r - 1] + 1e-12);
    }
}

TEST_CASE("dissipation identity holds within 5% on smooth runs") {
    DiffusionParams p;
    p.alpha = 0.5;
    p.bigA = 2.0;
    p.grid = TorusGrid(64);
    p.t_end = 0.04;
    DiffusionRun run = run_diffusion(p, cosine_density(p.grid, 0.3), 0.002);
    const auto& ts = run.diagnostics.times();
    std::vector<double> dist = run.diagnostics.column("l2_dist");
    std::vector<double> dis = run.diagnostics.column("dissipation");
    for (size_t k = 1; k + 1 < ts.size(); ++k) {
        double de = 0.5 * (dist[k + 1] * dist[k + 1] - dist[k - 1] * dist[k - 1]) /
                    (ts[k + 1] - ts[k - 1]);
        CHECK(std::abs(de + dis[k]) <= 0.05 * dis[k]);
    }
}

TEST_CASE("decay rate fit on synthetic series") {
    std::vector<double> ts, clean, wiggly, flat;
    for (int k = 0; k <= 200; ++k) {
        double t = 0.005 * k;
        ts.push_back(t);
        clean.push_back(2.0 * std::exp(-3.0 * t));
        wiggly.push_back(std::exp(-3.0 * t) * (1.0 + 0.01 * std::sin(50.0 * t)));
        flat.push_back(0.7);
    }
    CHECK(decay_rate_fit(ts, clean, 0.0, 1.0, 10).rate == doctest::Approx(3.0).epsilon(1e-6));
    CHECK(std::abs(decay_rate_fit(ts, wiggly, 0.0, 1.0, 10).rate - 3.0) < 0.02);
    CHECK(std::abs(decay_rate_fit(ts, flat, 0.0, 1.0, 10).rate) < 1e-12);

    std::vector<double> neg(ts.size(), -1.0);
    CHECK_THROWS(decay_rate_fit(ts, neg, 0.0, 1.0, 10));
}

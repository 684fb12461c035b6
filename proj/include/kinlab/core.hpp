#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace kinlab {

/// Thrown when a solver detects a broken invariant (bound violation,
/// mass drift beyond tolerance). CLI maps this to exit code 2.
struct InvariantViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown on numerical failure (CFL refusal, nonpositive density).
/// CLI maps this to exit code 3.
struct NumericalFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Uniform grid on the unit torus, nodes x_i = i/n.
struct TorusGrid {
    int n = 0;
    double dx = 0.0;

    TorusGrid() = default;
    explicit TorusGrid(int n_) : n(n_), dx(1.0 / n_) {
        if (n_ < 2) throw std::invalid_argument("TorusGrid: n must be >= 2");
    }
    double node(int i) const { return wrap(i) * dx; }
    int wrap(int i) const {
        int r = i % n;
        return r < 0 ? r + n : r;
    }
};

/// Uniform midpoint grid on [-vmax, vmax], nodes v_j = -vmax + (j+1/2) dv.
/// Midpoint placement with even nv makes the nodes symmetric about 0,
/// so odd moments cancel exactly.
struct VelocityGrid {
    int nv = 0;
    double vmax = 0.0;
    double dv = 0.0;

    VelocityGrid() = default;
    VelocityGrid(int nv_, double vmax_) : nv(nv_), vmax(vmax_), dv(2.0 * vmax_ / nv_) {
        if (nv_ < 2 || nv_ % 2 != 0)
            throw std::invalid_argument("VelocityGrid: nv must be positive and even");
        if (vmax_ < 6.0)
            throw std::invalid_argument("VelocityGrid: vmax must be >= 6 (Gaussian tail truncation)");
    }
    double node(int j) const { return -vmax + (j + 0.5) * dv; }
};

/// Function of v on the velocity grid.
struct VelocityProfile {
    std::vector<double> values;

    VelocityProfile() = default;
    explicit VelocityProfile(int nv) : values(static_cast<size_t>(nv), 0.0) {}
    int size() const { return static_cast<int>(values.size()); }
    double& operator[](int j) { return values[static_cast<size_t>(j)]; }
    double operator[](int j) const { return values[static_cast<size_t>(j)]; }
};

/// Function of x on the torus grid.
struct ScalarField {
    std::vector<double> values;

    ScalarField() = default;
    explicit ScalarField(int n, double fill = 0.0) : values(static_cast<size_t>(n), fill) {}
    int size() const { return static_cast<int>(values.size()); }
    double& operator[](int i) { return values[static_cast<size_t>(i)]; }
    double operator[](int i) const { return values[static_cast<size_t>(i)]; }
};

/// Distribution f(x_i, v_j), stored row-major with x as the slow index.
struct PhaseField {
    int n = 0;
    int nv = 0;
    std::vector<double> values;

    PhaseField() = default;
    PhaseField(int n_, int nv_) : n(n_), nv(nv_), values(static_cast<size_t>(n_) * nv_, 0.0) {}
    double& operator()(int i, int j) { return values[static_cast<size_t>(i) * nv + j]; }
    double operator()(int i, int j) const { return values[static_cast<size_t>(i) * nv + j]; }
    std::span<double> row(int i) { return {values.data() + static_cast<size_t>(i) * nv, static_cast<size_t>(nv)}; }
    std::span<const double> row(int i) const {
        return {values.data() + static_cast<size_t>(i) * nv, static_cast<size_t>(nv)};
    }
    bool same_shape(const PhaseField& o) const { return n == o.n && nv == o.nv; }
};

/// Tolerances used by the solvers' runtime audits.
struct Tolerances {
    double mass_rel = 1e-12;       // relative mass drift allowed over a run
    double sandwich_slack = 1e-10; // slack on the A^{-1} <= f/M <= A check
    double func_slack = 1e-8;      // per-step relative slack for functional monotonicity
};

/// Physical and numerical parameters of a kinetic run.
struct SimParams {
    double alpha = 1.0;
    double bigA = 2.0; // bound constant A > 1
    double eps = 0.1;
    TorusGrid grid;
    VelocityGrid vgrid;
    double beta_rel = 0.5;  // dt = min(beta_rel * eps^2, dt_cap)
    double dt_cap = 0.0;    // 0 means "use 0.5 * dx"
    double t_end = 1.0;
    Tolerances tol;

    double dt_policy() const {
        double cap = dt_cap > 0.0 ? dt_cap : 0.5 * grid.dx;
        double dt = beta_rel * eps * eps;
        return dt < cap ? dt : cap;
    }
    void validate() const {
        if (bigA <= 1.0) throw std::invalid_argument("SimParams: A must exceed 1");
        if (eps <= 0.0) throw std::invalid_argument("SimParams: eps must be positive");
        if (t_end <= 0.0) throw std::invalid_argument("SimParams: t_end must be positive");
    }
};

/// Largest eps for which the hypocoercivity estimates are claimed:
/// eps <= 1 and the perturbation weight delta = eps / (A^a (2 + A^{2a}))
/// at most 1/2, so the perturbed functional stays norm-equivalent.
double eps_zero(double alpha, double bigA);

/// Time-stamped diagnostic records with named columns.
class DiagnosticSeries {
  public:
    DiagnosticSeries() = default;
    explicit DiagnosticSeries(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    const std::vector<std::string>& columns() const { return columns_; }
    const std::vector<double>& times() const { return times_; }
    size_t rows() const { return times_.size(); }

    void add_row(double t, std::span<const double> vals);
    double at(size_t row, const std::string& column) const;
    std::vector<double> column(const std::string& name) const;
    int column_index(const std::string& name) const;

  private:
    std::vector<std::string> columns_;
    std::vector<double> times_;
    std::vector<double> data_; // rows * columns
};

/// Discrete Maxwellian, renormalized so that sum_j M_j dv == 1 exactly.
/// With that normalization f = M is an exact discrete equilibrium of the
/// kinetic scheme.
VelocityProfile discrete_maxwellian(const VelocityGrid& vgrid);

/// Midpoint quadrature in v: dv * sum of values.
double quad_v(std::span<const double> slice, double dv);

/// || f - ref ||_{L^2_{x,v}(M^{-1})} on the discrete grid.
double norm_l2_minv(const PhaseField& f, const PhaseField& ref, const VelocityProfile& maxw,
                    const TorusGrid& grid, const VelocityGrid& vgrid);

/// Same with ref = M broadcast over x (distance to global equilibrium).
double norm_l2_minv_eq(const PhaseField& f, const VelocityProfile& maxw, const TorusGrid& grid,
                       const VelocityGrid& vgrid);

/// || h - ref ||_{L^2_{x,v}(M)} for h given on the phase grid and ref a
/// function of x broadcast over v.
double norm_l2_m(const PhaseField& h, const ScalarField& ref, const VelocityProfile& maxw,
                 const TorusGrid& grid, const VelocityGrid& vgrid);

/// Phase-grid variant of norm_l2_m (both arguments on the phase grid).
double norm_l2_m(const PhaseField& h, const PhaseField& ref, const VelocityProfile& maxw,
                 const TorusGrid& grid, const VelocityGrid& vgrid);

/// || u ||_{L^2_x} on the torus grid.
double norm_l2_x(const ScalarField& u, const TorusGrid& grid);

/// Total phase-space mass: sum f dv dx.
double total_mass(const PhaseField& f, const TorusGrid& grid, const VelocityGrid& vgrid);

/// f(x, v) = rho(x) * M(v).
PhaseField tensor_state(const ScalarField& rho, const VelocityProfile& maxw);

/// rho_in = 1 + amplitude * cos(2 pi x).
ScalarField cosine_density(const TorusGrid& grid, double amplitude);

} // namespace kinlab

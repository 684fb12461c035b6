#include "kinlab/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace kinlab {

double eps_zero(double alpha, double bigA) {
    double w = std::pow(bigA, alpha) * (2.0 + std::pow(bigA, 2.0 * alpha)) / 2.0;
    return std::min(1.0, w);
}

void DiagnosticSeries::add_row(double t, std::span<const double> vals) {
    if (vals.size() != columns_.size())
        throw std::invalid_argument("DiagnosticSeries: row width mismatch");
    times_.push_back(t);
    data_.insert(data_.end(), vals.begin(), vals.end());
}

int DiagnosticSeries::column_index(const std::string& name) const {
    auto it = std::find(columns_.begin(), columns_.end(), name);
    if (it == columns_.end())
        throw std::invalid_argument("DiagnosticSeries: unknown column '" + name + "'");
    return static_cast<int>(it - columns_.begin());
}

double DiagnosticSeries::at(size_t row, const std::string& column) const {
    return data_[row * columns_.size() + static_cast<size_t>(column_index(column))];
}

std::vector<double> DiagnosticSeries::column(const std::string& name) const {
    size_t c = static_cast<size_t>(column_index(name));
    std::vector<double> out(rows());
    for (size_t r = 0; r < rows(); ++r) out[r] = data_[r * columns_.size() + c];
    return out;
}

VelocityProfile discrete_maxwellian(const VelocityGrid& vgrid) {
    VelocityProfile m(vgrid.nv);
    const double c0 = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    double sum = 0.0;
    for (int j = 0; j < vgrid.nv; ++j) {
        double v = vgrid.node(j);
        m[j] = c0 * std::exp(-0.5 * v * v);
        sum += m[j];
    }
    double scale = 1.0 / (sum * vgrid.dv);
    for (int j = 0; j < vgrid.nv; ++j) m[j] *= scale;
    return m;
}

double quad_v(std::span<const double> slice, double dv) {
    double s = 0.0;
    for (double x : slice) s += x;
    return s * dv;
}

double norm_l2_minv(const PhaseField& f, const PhaseField& ref, const VelocityProfile& maxw,
                    const TorusGrid& grid, const VelocityGrid& vgrid) {
    if (!f.same_shape(ref) || f.n != grid.n || f.nv != vgrid.nv)
        throw std::invalid_argument("norm_l2_minv: grid shape mismatch");
    double s = 0.0;
    for (int i = 0; i < f.n; ++i)
        for (int j = 0; j < f.nv; ++j) {
            double d = f(i, j) - ref(i, j);
            s += d * d / maxw[j];
        }
    return std::sqrt(s * vgrid.dv * grid.dx);
}

double norm_l2_minv_eq(const PhaseField& f, const VelocityProfile& maxw, const TorusGrid& grid,
                       const VelocityGrid& vgrid) {
    if (f.n != grid.n || f.nv != vgrid.nv)
        throw std::invalid_argument("norm_l2_minv_eq: grid shape mismatch");
    double s = 0.0;
    for (int i = 0; i < f.n; ++i)
        for (int j = 0; j < f.nv; ++j) {
            double d = f(i, j) - maxw[j];
            s += d * d / maxw[j];
        }
    return std::sqrt(s * vgrid.dv * grid.dx);
}

double norm_l2_m(const PhaseField& h, const ScalarField& ref, const VelocityProfile& maxw,
                 const TorusGrid& grid, const VelocityGrid& vgrid) {
    if (h.n != grid.n || h.nv != vgrid.nv || ref.size() != grid.n)
        throw std::invalid_argument("norm_l2_m: grid shape mismatch");
    double s = 0.0;
    for (int i = 0; i < h.n; ++i)
        for (int j = 0; j < h.nv; ++j) {
            double d = h(i, j) - ref[i];
            s += d * d * maxw[j];
        }
    return std::sqrt(s * vgrid.dv * grid.dx);
}

double norm_l2_m(const PhaseField& h, const PhaseField& ref, const VelocityProfile& maxw,
                 const TorusGrid& grid, const VelocityGrid& vgrid) {
    if (!h.same_shape(ref) || h.n != grid.n || h.nv != vgrid.nv)
        throw std::invalid_argument("norm_l2_m: grid shape mismatch");
    double s = 0.0;
    for (int i = 0; i < h.n; ++i)
        for (int j = 0; j < h.nv; ++j) {
            double d = h(i, j) - ref(i, j);
            s += d * d * maxw[j];
        }
    return std::sqrt(s * vgrid.dv * grid.dx);
}

double norm_l2_x(const ScalarField& u, const TorusGrid& grid) {
    if (u.size() != grid.n) throw std::invalid_argument("norm_l2_x: grid shape mismatch");
    double s = 0.0;
    for (int i = 0; i < grid.n; ++i) s += u[i] * u[i];
    return std::sqrt(s * grid.dx);
}

double total_mass(const PhaseField& f, const TorusGrid& grid, const VelocityGrid& vgrid) {
    double s = 0.0;
    for (double x : f.values) s += x;
    return s * vgrid.dv * grid.dx;
}

PhaseField tensor_state(const ScalarField& rho, const VelocityProfile& maxw) {
    PhaseField f(rho.size(), maxw.size());
    for (int i = 0; i < f.n; ++i)
        for (int j = 0; j < f.nv; ++j) f(i, j) = rho[i] * maxw[j];
    return f;
}

ScalarField cosine_density(const TorusGrid& grid, double amplitude) {
    ScalarField rho(grid.n);
    for (int i = 0; i < grid.n; ++i)
        rho[i] = 1.0 + amplitude * std::cos(2.0 * std::numbers::pi * grid.node(i));
    return rho;
}

} // namespace kinlab

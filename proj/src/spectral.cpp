#include "kinlab/spectral.hpp"

#include <cmath>
#include <numbers>

namespace kinlab {

namespace {

// Direct O(n^2) transform. Grids here are desk scale (n <= 512) and the
// spectral operators are evaluated per snapshot, not per step.
std::vector<std::complex<double>> dft(std::span<const double> u) {
    const int n = static_cast<int>(u.size());
    std::vector<std::complex<double>> out(static_cast<size_t>(n));
    const double w = -2.0 * std::numbers::pi / n;
    for (int k = 0; k < n; ++k) {
        double re = 0.0, im = 0.0;
        for (int i = 0; i < n; ++i) {
            double ph = w * ((static_cast<long long>(k) * i) % n);
            re += u[static_cast<size_t>(i)] * std::cos(ph);
            im += u[static_cast<size_t>(i)] * std::sin(ph);
        }
        out[static_cast<size_t>(k)] = {re, im};
    }
    return out;
}

int signed_mode(int m, int n) { return m <= n / 2 - 1 ? m : m - n; }

ScalarField apply_multiplier(const ScalarField& u, auto&& mult) {
    const int n = u.size();
    SpectrumField s = forward_transform(u);
    for (int m = 0; m < n; ++m) {
        int k = signed_mode(m, n);
        s.c[static_cast<size_t>(m)] *= mult(k);
    }
    return inverse_transform(s);
}

} // namespace

SpectrumField forward_transform(const ScalarField& u) {
    SpectrumField s;
    s.n = u.size();
    s.c = dft(u.values);
    const double dx = 1.0 / s.n;
    for (auto& z : s.c) z *= dx;
    return s;
}

ScalarField inverse_transform(const SpectrumField& s) {
    const int n = s.n;
    ScalarField u(n);
    const double w = 2.0 * std::numbers::pi / n;
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int m = 0; m < n; ++m) {
            double ph = w * ((static_cast<long long>(m) * i) % n);
            acc += s.c[static_cast<size_t>(m)].real() * std::cos(ph) -
                   s.c[static_cast<size_t>(m)].imag() * std::sin(ph);
        }
        u[i] = acc; // real part; inputs are real fields
    }
    return u;
}

ScalarField inv_helmholtz(const ScalarField& u) {
    const double c = 4.0 * std::numbers::pi * std::numbers::pi;
    return apply_multiplier(
        u, [c](int k) { return std::complex<double>(1.0 / (1.0 + c * k * k), 0.0); });
}

ScalarField inv_helmholtz_sqrt(const ScalarField& u) {
    const double c = 4.0 * std::numbers::pi * std::numbers::pi;
    return apply_multiplier(
        u, [c](int k) { return std::complex<double>(1.0 / std::sqrt(1.0 + c * k * k), 0.0); });
}

ScalarField grad(const ScalarField& u) {
    const int n = u.size();
    return apply_multiplier(u, [n](int k) {
        if (k == -n / 2) return std::complex<double>(0.0, 0.0); // Nyquist
        return std::complex<double>(0.0, 2.0 * std::numbers::pi * k);
    });
}

double fourier_poincare_constant() {
    const double c = 4.0 * std::numbers::pi * std::numbers::pi;
    return c / (1.0 + c);
}

FourierEstimateReport fourier_estimate_check(const ScalarField& u) {
    const int n = u.size();
    const double c = 4.0 * std::numbers::pi * std::numbers::pi;
    SpectrumField s = forward_transform(u);

    FourierEstimateReport r;
    double lhs_second = 0.0, lhs_first = 0.0, lhs_half = 0.0;
    for (int m = 0; m < n; ++m) {
        int k = signed_mode(m, n);
        double a2 = std::norm(s.c[static_cast<size_t>(m)]);
        r.norm_sq += a2;
        if (k != 0) r.fluct_sq += a2;
        if (k == -n / 2) continue; // derivative convention: Nyquist zeroed
        double k2 = static_cast<double>(k) * k;
        double h = 1.0 + c * k2;
        lhs_second += (c * k2) * (c * k2) / (h * h) * a2;
        lhs_first += c * k2 / (h * h) * a2;
        lhs_half += c * k2 / h * a2;
    }
    r.margin_second = r.norm_sq - lhs_second;
    r.margin_first = r.fluct_sq - lhs_first;
    r.margin_half = lhs_half - fourier_poincare_constant() * r.fluct_sq;
    return r;
}

} // namespace kinlab

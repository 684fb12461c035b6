#pragma once

#include <complex>
#include <vector>

#include "kinlab/core.hpp"

namespace kinlab {

/// Fourier coefficients u_hat(k) = integral of u e^{-2 pi i k x}, realized
/// as the discrete transform scaled by dx. Mode k = 0 is the spatial mean.
/// Modes run over k in {-n/2, ..., n/2 - 1}; coeff(k) accepts that range.
struct SpectrumField {
    int n = 0;
    std::vector<std::complex<double>> c; // index m = 0..n-1 holds mode k = m (mod n)

    std::complex<double> coeff(int k) const { return c[static_cast<size_t>(((k % n) + n) % n)]; }
    std::complex<double>& coeff(int k) { return c[static_cast<size_t>(((k % n) + n) % n)]; }
};

SpectrumField forward_transform(const ScalarField& u);
ScalarField inverse_transform(const SpectrumField& s);

/// (I - Laplacian)^{-1}: mode multiplier 1 / (1 + 4 pi^2 k^2). Mean preserved.
ScalarField inv_helmholtz(const ScalarField& u);

/// (I - Laplacian)^{-1/2}: mode multiplier (1 + 4 pi^2 k^2)^{-1/2}.
ScalarField inv_helmholtz_sqrt(const ScalarField& u);

/// Spectral derivative, multiplier 2 pi i k. The Nyquist mode (k = -n/2,
/// present for even n) has no real odd-derivative representation and is
/// zeroed.
ScalarField grad(const ScalarField& u);

/// Margins of the three Fourier estimates. All must be >= -1e-12 relative:
///   ||u||^2              - ||(I-D)^{-1} d^2 u||^2      (second derivative)
///   ||u - mean||^2       - ||(I-D)^{-1} d u||^2        (first derivative)
///   ||(I-D)^{-1/2} du||^2 - C ||u - mean||^2           with C = 4pi^2/(1+4pi^2)
struct FourierEstimateReport {
    double margin_second = 0.0;
    double margin_first = 0.0;
    double margin_half = 0.0;
    double norm_sq = 0.0;        // ||u||^2
    double fluct_sq = 0.0;       // ||u - mean||^2
};

/// The sharp constant in the third estimate, attained at |k| = 1.
double fourier_poincare_constant();

FourierEstimateReport fourier_estimate_check(const ScalarField& u);

} // namespace kinlab

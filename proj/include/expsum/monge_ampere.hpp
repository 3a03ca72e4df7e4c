#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "expsum/polytope.hpp"
#include "expsum/spectrum.hpp"

namespace expsum {

/// Complex Hessian  d^2 h_eps / dz_j dzbar_k  of the smoothed support function,
/// in closed form: (1/4eps) Cov_w(xi_j, xi_k) under the softmax weights at z.
/// Hermitian positive semidefinite.
CMatrix complex_hessian(const Spectrum& k, double eps, const ComplexPoint& z);

/// Density of (dd^c h_eps)^n with respect to Lebesgue measure on R^2n under
/// the dd^c = i d dbar convention: 2^n n! det(complex_hessian).
double ma_density(const Spectrum& k, double eps, const ComplexPoint& z);

enum class QuadMethod { TensorGrid, LowDiscrepancy, MonteCarlo };

struct QuadratureSpec {
    QuadMethod method = QuadMethod::TensorGrid;
    long samples = 0;          // 0 -> per-dimension default
    double radius = 1.0;
    std::vector<double> epsilons;  // strictly decreasing; empty -> diameter-scaled default
    bool extrapolate = true;
    std::uint64_t seed = 0;
    int batches = 64;
    int workers = 0;           // 0 -> EXPSUM_WORKERS / hardware
    double variance_tol = 0.0; // 0 -> never flags

    void validate() const;
    /// Default sample budget and epsilon schedule for dimension n and a
    /// spectrum of the given diameter.
    QuadratureSpec resolved(int n, double diameter) const;
};

struct BallIntegral {
    double value = 0.0;
    double error = 0.0;
    bool flagged = false;  // variance above the requested tolerance
};

/// Integral over the Euclidean ball of radius spec.radius in R^2n.
/// Tensor polar grid (Gauss-Legendre x trapezoid) for 2n = 2; randomized
/// Halton with ball rejection for 2n = 4; plain Monte Carlo on request.
BallIntegral integrate_ball(const std::function<double(const ComplexPoint&)>& density, int n,
                            const QuadratureSpec& spec);

struct EpsRow {
    double eps;
    double value;
    double error;
};

struct PvolResult {
    double value = 0.0;
    double error = 0.0;
    std::vector<EpsRow> per_eps;
    bool flagged = false;
};

/// Pseudo-volume: mass of (dd^c h_K)^n on the ball, via the epsilon schedule
/// and Richardson extrapolation in epsilon.
PvolResult pvol(const Spectrum& k, const QuadratureSpec& spec);

/// Mixed pseudo-volume by polarization over Minkowski sums, normalized so
/// that mixed_pvol(A,...,A) = pvol(A).
PvolResult mixed_pvol(const std::vector<Spectrum>& ks, const QuadratureSpec& spec);

/// Classical mixed volume of real polytopes in R^n (n <= 3), by polarization
/// over volumes of Minkowski sums; MV(A,...,A) = vol(A).
double mixed_volume_real(const std::vector<Polytope>& ps);

double polytope_volume(const Polytope& p);

}  // namespace expsum

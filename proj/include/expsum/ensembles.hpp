#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "expsum/spectrum.hpp"
#include "expsum/zeros1d.hpp"

namespace expsum {

/// Finite-dimensional function space V with a declared Hermitian inner product
/// (Gram matrix on the stored basis). Evaluation-functional norms and random
/// samples are expressed through the orthonormalized basis, obtained from the
/// Cholesky factor of the Gram matrix.
class HermitianBasisSpace {
public:
    HermitianBasisSpace(std::vector<QuasiPolynomial> basis, CMatrix gram,
                        std::optional<Spectrum> declared_spectrum = std::nullopt);

    int dimension() const { return static_cast<int>(basis_.size()); }
    int ambient_dimension() const { return n_; }
    const std::vector<QuasiPolynomial>& basis() const { return basis_; }
    const CMatrix& gram() const { return gram_; }
    const CMatrix& chol_lower() const { return chol_lower_; }
    const Spectrum& spectrum() const { return spectrum_; }

    /// Basis values at z with a common scale factored out: returns (u, M) with
    /// b_i(z) = e^M u_i and max_i |u_i| = 1.
    std::pair<Eigen::VectorXcd, double> scaled_basis_values(const ComplexPoint& z) const;
    std::pair<Eigen::VectorXcd, double> scaled_derivative_values(const ComplexPoint& z,
                                                                 int k) const;

    /// log ||Theta(z)|| where Theta(z): f -> f(z); equals sup_{||f||=1} |f(z)|.
    double log_eval_functional_norm(const ComplexPoint& z) const;
    double eval_functional_norm(const ComplexPoint& z) const;

    /// f = sum_i c_i e~_i over the orthonormalized basis.
    QuasiPolynomial from_orthonormal_coeffs(const Eigen::VectorXcd& c) const;

private:
    int n_;
    std::vector<QuasiPolynomial> basis_;
    std::vector<QuasiPolynomial> derivs_;  // d/dz_k of each basis element, k-major
    CMatrix gram_;
    CMatrix chol_lower_;
    Spectrum spectrum_;
};

/// Draw sum c_i e~_i with i.i.d. standard complex Gaussian coefficients; the
/// induced law on the projectivization is Fubini-Study for the declared
/// inner product.
QuasiPolynomial sample_random_function(const HermitianBasisSpace& v, std::uint64_t seed);

/// Exact expected zero density at z for n = 1:
/// (1/2pi) * (1/2) * Laplacian of log ||Theta(z)||^2, via the closed form on
/// the orthonormalized holomorphic frame.
double expected_density_exact(const HermitianBasisSpace& v, Complex z);

struct AveragedCount {
    double mean = 0.0;
    double stderr_mean = 0.0;
    long trials = 0;
    long resampled = 0;  // counting failures replaced by fresh draws
};

/// Monte-Carlo mean of (1/t) * #zeros of f(t z) in the disk of radius r.
AveragedCount averaged_count_1d(const HermitianBasisSpace& v, double t, double r, int trials,
                                std::uint64_t seed, int workers = 0,
                                const ContourSpec& base = {});

struct ProfileRow {
    double t = 0.0;
    double sup_deviation = 0.0;
    int worst_direction = 0;
};

struct RegularityProfile {
    std::vector<double> t_list;
    std::vector<ComplexPoint> directions;           // unit sphere sample used for the sup
    Eigen::MatrixXd deviations;                     // (t, direction) -> |(1/t)log||Theta|| - h_K|
    std::vector<ProfileRow> rows;
    double bound_epsilon = 0.0;                     // epsilon used in the upper-bound fit
    double bound_constant = 0.0;                    // fitted C on the profile directions
    int bound_violations = 0;                       // violations on an independent direction sample
};

/// Deviation profile of (1/t) log ||Theta(t z)|| from h_K over a quasi-uniform
/// sphere sample, with the linear-growth upper bound fitted on the profile
/// directions and checked on an independent sample.
RegularityProfile regularity_profile(const HermitianBasisSpace& v, const std::vector<double>& t_list,
                                     int sphere_samples, std::uint64_t seed,
                                     double bound_epsilon = 0.05);

}  // namespace expsum

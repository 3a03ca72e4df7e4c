#pragma once

#include <optional>
#include <vector>

#include "expsum/types.hpp"

namespace expsum {

/// Finite set of frequencies xi in (C^n)*, pairwise distinct within the
/// duplicate tolerance (relative to the spectrum diameter).
class Spectrum {
public:
    static constexpr double kDupTolerance = 1e-9;

    explicit Spectrum(std::vector<Frequency> frequencies);

    int dimension() const { return n_; }
    std::size_t size() const { return freqs_.size(); }
    const Frequency& operator[](std::size_t i) const { return freqs_[i]; }
    const std::vector<Frequency>& frequencies() const { return freqs_; }

    /// Max pairwise distance; 0 for a single point.
    double diameter() const { return diameter_; }

private:
    int n_;
    std::vector<Frequency> freqs_;
    double diameter_;
};

/// All pairwise sums, deduplicated at the spectrum tolerance.
Spectrum minkowski_sum(const Spectrum& a, const Spectrum& b);
Spectrum translate(const Spectrum& k, const Frequency& shift);
Spectrum dilate(const Spectrum& k, double lambda);
/// Coordinate change xi -> U xi on (C^n)*.
Spectrum transform(const Spectrum& k, const CMatrix& u);

struct PolyTerm {
    Eigen::VectorXi exponents;  // multi-exponent alpha, one entry per variable
    Complex coeff;
};

struct QpTerm {
    Frequency freq;
    std::vector<PolyTerm> poly;  // p_xi as (alpha, c_alpha) pairs
};

/// Finite sum  f(z) = sum_xi p_xi(z) exp(xi(z))  with polynomial coefficients.
/// Exponential sums are the degree-0 case. The zero function is represented
/// by an empty term list; operations that need f != 0 reject it.
class QuasiPolynomial {
public:
    QuasiPolynomial(int n, std::vector<QpTerm> terms);

    static QuasiPolynomial exponential_sum(const Spectrum& k, const Eigen::VectorXcd& coeffs);

    int dimension() const { return n_; }
    const std::vector<QpTerm>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    Spectrum spectrum() const;
    int total_degree() const;
    double max_frequency_norm() const;

private:
    int n_;
    std::vector<QpTerm> terms_;
};

struct ScaledEval {
    ScaledComplex value;
    /// log of the largest single-term magnitude at the evaluation point; the
    /// natural reference scale for "relatively zero" tests.
    double term_scale_log;
};

ScaledEval eval_scaled(const QuasiPolynomial& f, const ComplexPoint& z);

/// Plain complex evaluation; throws NumericError if the value overflows double.
Complex eval(const QuasiPolynomial& f, const ComplexPoint& z);

/// g with g(z) = f(t z): frequencies scaled by t, degree-|alpha| coefficients by t^|alpha|.
QuasiPolynomial scale(const QuasiPolynomial& f, double t);

/// Holomorphic partial d/dz_k, computed structurally: (p' + xi_k p) e^{xi(z)}.
QuasiPolynomial derivative(const QuasiPolynomial& f, int k);

QuasiPolynomial linear_combination(const Eigen::VectorXcd& coeffs,
                                   const std::vector<QuasiPolynomial>& basis);

/// h_K(z) = max_xi Re xi(z).
double support_function(const Spectrum& k, const ComplexPoint& z);

/// Log-sum-exp regularization h_eps(z) = eps log sum exp(Re xi(z)/eps),
/// evaluated max-shifted; nests between h_K and h_K + eps log|K|.
double smoothed_support(const Spectrum& k, double eps, const ComplexPoint& z);

/// Softmax weights w_xi on the spectrum at z (max-shifted).
Eigen::VectorXd softmax_weights(const Spectrum& k, double eps, const ComplexPoint& z);

/// Indices of {xi : Re xi(z) >= h_K(z) - tol |z|}; tol = 0 gives K on the
/// supporting face of z exactly.
std::vector<int> supporting_face_indices(const Spectrum& k, const ComplexPoint& z, double tol);
Spectrum supporting_face(const Spectrum& k, const ComplexPoint& z, double tol);

/// The face exponential sum F_z = sum_{xi in face} c_xi e^{xi(w)}. Verifies the
/// nonvanishing of every sub-face sum at z; throws FaceSumError listing the
/// offending sub-faces so the caller can re-randomize coefficients.
struct FaceSumError : NumericError {
    explicit FaceSumError(std::string msg, std::vector<std::vector<int>> failed)
        : NumericError(std::move(msg)), failed_subfaces(std::move(failed)) {}
    std::vector<std::vector<int>> failed_subfaces;  // indices into the face
};

QuasiPolynomial construct_face_sum(const Spectrum& k, const ComplexPoint& z,
                                   const Eigen::VectorXcd& coefficients);

}  // namespace expsum

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

namespace expsum {

using Complex = std::complex<double>;

/// A point z in C^n.
using ComplexPoint = Eigen::VectorXcd;

/// A linear functional xi in (C^n)*, acting as xi(z) = sum_k xi_k z_k.
using Frequency = Eigen::VectorXcd;

using CMatrix = Eigen::MatrixXcd;

inline Complex apply_functional(const Frequency& xi, const ComplexPoint& z) {
    return xi.cwiseProduct(z).sum();
}

struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct SpectrumError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Numeric failure past the point where the log-scaled paths can help
/// (overflowing plain evaluation, broken Hessians, Gram factorization, ...).
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Argument-principle counting gave up (jitter budget or refinement depth).
struct CountingError : NumericError {
    using NumericError::NumericError;
};

/// A nonzero complex value kept as log-magnitude and argument so that
/// exponential-growth evaluations never overflow. log_mag == -inf encodes 0.
struct ScaledComplex {
    double log_mag = -std::numeric_limits<double>::infinity();
    double arg = 0.0;

    static ScaledComplex from(Complex v) {
        if (v == Complex(0.0, 0.0)) return {};
        return {std::log(std::abs(v)), std::arg(v)};
    }

    bool is_zero() const { return !std::isfinite(log_mag) && log_mag < 0; }

    /// Plain complex value; throws when the magnitude exceeds double range.
    Complex value() const {
        if (is_zero()) return {0.0, 0.0};
        if (log_mag > 700.0)
            throw NumericError("scaled value exceeds double range (log|v| = " +
                               std::to_string(log_mag) + ")");
        return std::exp(log_mag) * Complex(std::cos(arg), std::sin(arg));
    }

    ScaledComplex operator*(const ScaledComplex& o) const {
        if (is_zero() || o.is_zero()) return {};
        return {log_mag + o.log_mag, arg + o.arg};
    }
    ScaledComplex operator/(const ScaledComplex& o) const {
        return {log_mag - o.log_mag, arg - o.arg};
    }
};

/// Sum of scaled values, accumulated after factoring out the largest magnitude.
template <typename Iter>
ScaledComplex scaled_sum(Iter begin, Iter end) {
    double m = -std::numeric_limits<double>::infinity();
    for (Iter it = begin; it != end; ++it) m = std::max(m, it->log_mag);
    if (!std::isfinite(m)) return {};
    Complex acc(0.0, 0.0);
    for (Iter it = begin; it != end; ++it) {
        if (it->is_zero()) continue;
        acc += std::exp(it->log_mag - m) * Complex(std::cos(it->arg), std::sin(it->arg));
    }
    if (acc == Complex(0.0, 0.0)) return {};
    return {m + std::log(std::abs(acc)), std::arg(acc)};
}

inline double principal_angle(double a) {
    a = std::remainder(a, 2.0 * M_PI);
    return a;
}

}  // namespace expsum

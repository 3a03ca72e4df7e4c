#pragma once

#include <vector>

#include "expsum/spectrum.hpp"

namespace expsum::test {

inline ComplexPoint pt1(Complex z) {
    ComplexPoint p(1);
    p[0] = z;
    return p;
}

inline ComplexPoint pt2(Complex z1, Complex z2) {
    ComplexPoint p(2);
    p[0] = z1;
    p[1] = z2;
    return p;
}

inline Frequency freq1(Complex xi) {
    Frequency f(1);
    f[0] = xi;
    return f;
}

inline Spectrum spectrum1(std::initializer_list<Complex> freqs) {
    std::vector<Frequency> fs;
    for (Complex c : freqs) fs.push_back(freq1(c));
    return Spectrum(std::move(fs));
}

inline Spectrum spectrum2(std::initializer_list<std::pair<Complex, Complex>> freqs) {
    std::vector<Frequency> fs;
    for (const auto& [a, b] : freqs) {
        Frequency f(2);
        f[0] = a;
        f[1] = b;
        fs.push_back(f);
    }
    return Spectrum(std::move(fs));
}

/// Exponential sum in one variable from (frequency, coefficient) pairs.
inline QuasiPolynomial exp_sum_1d(std::initializer_list<std::pair<Complex, Complex>> terms) {
    std::vector<QpTerm> ts;
    for (const auto& [f, c] : terms) {
        PolyTerm p{Eigen::VectorXi::Zero(1), c};
        ts.push_back({freq1(f), {p}});
    }
    return QuasiPolynomial(1, std::move(ts));
}

/// One-variable quasi-polynomial term p(z) e^{xi z} with p given by
/// coefficients c_0 + c_1 z + ... in increasing degree.
inline QpTerm poly_term_1d(Complex xi, std::initializer_list<Complex> coeffs) {
    QpTerm t;
    t.freq = freq1(xi);
    int deg = 0;
    for (Complex c : coeffs) {
        PolyTerm p;
        p.exponents = Eigen::VectorXi::Constant(1, deg++);
        p.coeff = c;
        t.poly.push_back(p);
    }
    return t;
}

/// f = 1 + e^z.
inline QuasiPolynomial one_plus_ez() {
    return exp_sum_1d({{Complex(0, 0), Complex(1, 0)}, {Complex(1, 0), Complex(1, 0)}});
}

/// Two-variable exponential sum from ((xi1, xi2), coeff) entries.
inline QuasiPolynomial exp_sum_2d(
    std::initializer_list<std::pair<std::pair<Complex, Complex>, Complex>> terms) {
    std::vector<QpTerm> ts;
    for (const auto& [f, c] : terms) {
        Frequency fr(2);
        fr[0] = f.first;
        fr[1] = f.second;
        PolyTerm p{Eigen::VectorXi::Zero(2), c};
        ts.push_back({fr, {p}});
    }
    return QuasiPolynomial(2, std::move(ts));
}

}  // namespace expsum::test

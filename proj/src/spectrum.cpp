#include "expsum/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "expsum/polytope.hpp"

namespace expsum {

namespace {

void check_finite(const Eigen::VectorXcd& v, const char* what) {
    if (!v.allFinite()) throw SpectrumError(std::string(what) + " has non-finite coordinates");
}

/// Lexicographic order on (re, im) pairs; used to make constructions
/// independent of input order where a canonical order matters.
bool lex_less(const Frequency& a, const Frequency& b) {
    for (int i = 0; i < a.size(); ++i) {
        if (a[i].real() != b[i].real()) return a[i].real() < b[i].real();
        if (a[i].imag() != b[i].imag()) return a[i].imag() < b[i].imag();
    }
    return false;
}

}  // namespace

Spectrum::Spectrum(std::vector<Frequency> frequencies) : freqs_(std::move(frequencies)) {
    if (freqs_.empty()) throw SpectrumError("spectrum must be non-empty");
    n_ = static_cast<int>(freqs_.front().size());
    if (n_ < 1) throw SpectrumError("spectrum dimension must be >= 1");
    diameter_ = 0.0;
    for (const auto& f : freqs_) {
        if (f.size() != n_) throw DimensionError("spectrum frequencies must share dimension");
        check_finite(f, "frequency");
    }
    for (std::size_t i = 0; i < freqs_.size(); ++i)
        for (std::size_t j = i + 1; j < freqs_.size(); ++j)
            diameter_ = std::max(diameter_, (freqs_[i] - freqs_[j]).norm());
    const double tol = kDupTolerance * std::max(diameter_, 1e-300);
    for (std::size_t i = 0; i < freqs_.size(); ++i)
        for (std::size_t j = i + 1; j < freqs_.size(); ++j)
            if ((freqs_[i] - freqs_[j]).norm() <= tol)
                throw SpectrumError("duplicate frequencies in spectrum (within tolerance)");
}

Spectrum minkowski_sum(const Spectrum& a, const Spectrum& b) {
    if (a.dimension() != b.dimension())
        throw DimensionError("minkowski_sum: dimension mismatch");
    std::vector<Frequency> sums;
    sums.reserve(a.size() * b.size());
    for (const auto& fa : a.frequencies())
        for (const auto& fb : b.frequencies()) sums.push_back(fa + fb);
    std::sort(sums.begin(), sums.end(), lex_less);
    double diam = 0.0;
    for (std::size_t i = 0; i < sums.size(); ++i)
        for (std::size_t j = i + 1; j < sums.size(); ++j)
            diam = std::max(diam, (sums[i] - sums[j]).norm());
    const double tol = Spectrum::kDupTolerance * std::max(diam, 1e-300);
    std::vector<Frequency> dedup;
    for (const auto& s : sums) {
        bool dup = false;
        for (const auto& kept : dedup)
            if ((s - kept).norm() <= tol) { dup = true; break; }
        if (!dup) dedup.push_back(s);
    }
    return Spectrum(std::move(dedup));
}

Spectrum translate(const Spectrum& k, const Frequency& shift) {
    if (shift.size() != k.dimension()) throw DimensionError("translate: dimension mismatch");
    std::vector<Frequency> out;
    out.reserve(k.size());
    for (const auto& f : k.frequencies()) out.push_back(f + shift);
    return Spectrum(std::move(out));
}

Spectrum dilate(const Spectrum& k, double lambda) {
    std::vector<Frequency> out;
    out.reserve(k.size());
    for (const auto& f : k.frequencies()) out.push_back(lambda * f);
    return Spectrum(std::move(out));
}

Spectrum transform(const Spectrum& k, const CMatrix& u) {
    if (u.rows() != k.dimension() || u.cols() != k.dimension())
        throw DimensionError("transform: matrix dimension mismatch");
    std::vector<Frequency> out;
    out.reserve(k.size());
    for (const auto& f : k.frequencies()) out.push_back(u * f);
    return Spectrum(std::move(out));
}

// ---------------------------------------------------------------------------
// QuasiPolynomial
// ---------------------------------------------------------------------------

namespace {

bool poly_term_less(const PolyTerm& a, const PolyTerm& b) {
    for (int i = 0; i < a.exponents.size(); ++i)
        if (a.exponents[i] != b.exponents[i]) return a.exponents[i] < b.exponents[i];
    return false;
}

std::vector<PolyTerm> normalize_poly(std::vector<PolyTerm> poly, int n) {
    for (auto& t : poly) {
        if (t.exponents.size() != n)
            throw DimensionError("polynomial multi-exponent has wrong length");
        if ((t.exponents.array() < 0).any())
            throw SpectrumError("polynomial exponents must be nonnegative");
    }
    std::sort(poly.begin(), poly.end(), poly_term_less);
    std::vector<PolyTerm> merged;
    for (auto& t : poly) {
        if (!merged.empty() && merged.back().exponents == t.exponents)
            merged.back().coeff += t.coeff;
        else
            merged.push_back(t);
    }
    std::erase_if(merged, [](const PolyTerm& t) { return t.coeff == Complex(0.0, 0.0); });
    return merged;
}

Complex eval_poly(const std::vector<PolyTerm>& poly, const ComplexPoint& z) {
    Complex acc(0.0, 0.0);
    for (const auto& t : poly) {
        Complex m = t.coeff;
        for (int i = 0; i < z.size(); ++i)
            for (int e = 0; e < t.exponents[i]; ++e) m *= z[i];
        acc += m;
    }
    return acc;
}

}  // namespace

QuasiPolynomial::QuasiPolynomial(int n, std::vector<QpTerm> terms) : n_(n) {
    if (n_ < 1) throw DimensionError("quasi-polynomial dimension must be >= 1");
    // merge duplicate frequencies, normalize polynomials, drop vanished terms
    for (auto& t : terms) {
        if (t.freq.size() != n_) throw DimensionError("term frequency has wrong dimension");
        check_finite(t.freq, "frequency");
    }
    std::sort(terms.begin(), terms.end(),
              [](const QpTerm& a, const QpTerm& b) { return lex_less(a.freq, b.freq); });
    for (auto& t : terms) {
        if (!terms_.empty() && (terms_.back().freq - t.freq).norm() == 0.0) {
            auto& dst = terms_.back().poly;
            dst.insert(dst.end(), t.poly.begin(), t.poly.end());
        } else {
            terms_.push_back(std::move(t));
        }
    }
    for (auto& t : terms_) t.poly = normalize_poly(std::move(t.poly), n_);
    std::erase_if(terms_, [](const QpTerm& t) { return t.poly.empty(); });
}

QuasiPolynomial QuasiPolynomial::exponential_sum(const Spectrum& k,
                                                 const Eigen::VectorXcd& coeffs) {
    if (static_cast<std::size_t>(coeffs.size()) != k.size())
        throw DimensionError("exponential_sum: one coefficient per frequency required");
    std::vector<QpTerm> terms;
    for (std::size_t i = 0; i < k.size(); ++i) {
        PolyTerm c{Eigen::VectorXi::Zero(k.dimension()), coeffs[static_cast<long>(i)]};
        terms.push_back({k[i], {c}});
    }
    return QuasiPolynomial(k.dimension(), std::move(terms));
}

Spectrum QuasiPolynomial::spectrum() const {
    if (terms_.empty()) throw SpectrumError("zero quasi-polynomial has no spectrum");
    std::vector<Frequency> fs;
    fs.reserve(terms_.size());
    for (const auto& t : terms_) fs.push_back(t.freq);
    return Spectrum(std::move(fs));
}

int QuasiPolynomial::total_degree() const {
    int deg = 0;
    for (const auto& t : terms_)
        for (const auto& p : t.poly) deg = std::max(deg, static_cast<int>(p.exponents.sum()));
    return deg;
}

double QuasiPolynomial::max_frequency_norm() const {
    double m = 0.0;
    for (const auto& t : terms_) m = std::max(m, t.freq.norm());
    return m;
}

ScaledEval eval_scaled(const QuasiPolynomial& f, const ComplexPoint& z) {
    if (z.size() != f.dimension()) throw DimensionError("eval: point dimension mismatch");
    if (!z.allFinite()) throw NumericError("eval: non-finite point");
    // online max-shifted accumulation; rescale the running sum when a larger
    // term arrives so nothing ever overflows
    double m = -std::numeric_limits<double>::infinity();
    Complex acc(0.0, 0.0);
    double term_scale = -std::numeric_limits<double>::infinity();
    for (const auto& t : f.terms()) {
        const Complex p = eval_poly(t.poly, z);
        if (p == Complex(0.0, 0.0)) continue;
        const Complex e = apply_functional(t.freq, z);
        const double lm = std::log(std::abs(p)) + e.real();
        const double ph = std::arg(p) + e.imag();
        term_scale = std::max(term_scale, lm);
        if (lm <= m) {
            acc += std::exp(lm - m) * Complex(std::cos(ph), std::sin(ph));
        } else {
            acc = acc * std::exp(m - lm) + Complex(std::cos(ph), std::sin(ph));
            m = lm;
        }
    }
    ScaledComplex sum;
    if (acc != Complex(0.0, 0.0) && std::isfinite(m))
        sum = {m + std::log(std::abs(acc)), std::arg(acc)};
    return {sum, term_scale};
}

Complex eval(const QuasiPolynomial& f, const ComplexPoint& z) {
    return eval_scaled(f, z).value.value();
}

QuasiPolynomial scale(const QuasiPolynomial& f, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("scale: t must be positive");
    std::vector<QpTerm> terms;
    terms.reserve(f.terms().size());
    for (const auto& term : f.terms()) {
        QpTerm out{t * term.freq, term.poly};
        for (auto& p : out.poly) p.coeff *= std::pow(t, static_cast<double>(p.exponents.sum()));
        terms.push_back(std::move(out));
    }
    return QuasiPolynomial(f.dimension(), std::move(terms));
}

QuasiPolynomial derivative(const QuasiPolynomial& f, int k) {
    if (k < 0 || k >= f.dimension()) throw DimensionError("derivative: bad coordinate index");
    std::vector<QpTerm> terms;
    for (const auto& term : f.terms()) {
        std::vector<PolyTerm> poly;
        for (const auto& p : term.poly) {
            // product rule: d/dz_k (p e^{xi z}) = (dp/dz_k + xi_k p) e^{xi z}
            if (p.exponents[k] > 0) {
                PolyTerm dp = p;
                dp.coeff *= static_cast<double>(p.exponents[k]);
                dp.exponents[k] -= 1;
                poly.push_back(std::move(dp));
            }
            if (term.freq[k] != Complex(0.0, 0.0)) {
                PolyTerm xp = p;
                xp.coeff *= term.freq[k];
                poly.push_back(std::move(xp));
            }
        }
        terms.push_back({term.freq, std::move(poly)});
    }
    return QuasiPolynomial(f.dimension(), std::move(terms));
}

QuasiPolynomial linear_combination(const Eigen::VectorXcd& coeffs,
                                   const std::vector<QuasiPolynomial>& basis) {
    if (basis.empty()) throw std::invalid_argument("linear_combination: empty basis");
    if (static_cast<std::size_t>(coeffs.size()) != basis.size())
        throw DimensionError("linear_combination: coefficient count mismatch");
    const int n = basis.front().dimension();
    std::vector<QpTerm> terms;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (basis[i].dimension() != n) throw DimensionError("linear_combination: mixed dimensions");
        for (const auto& term : basis[i].terms()) {
            QpTerm out = term;
            for (auto& p : out.poly) p.coeff *= coeffs[static_cast<long>(i)];
            terms.push_back(std::move(out));
        }
    }
    return QuasiPolynomial(n, std::move(terms));
}

// ---------------------------------------------------------------------------
// Support functions and faces
// ---------------------------------------------------------------------------

double support_function(const Spectrum& k, const ComplexPoint& z) {
    if (z.size() != k.dimension()) throw DimensionError("support_function: dimension mismatch");
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& f : k.frequencies()) m = std::max(m, apply_functional(f, z).real());
    return m;
}

double smoothed_support(const Spectrum& k, double eps, const ComplexPoint& z) {
    if (!(eps > 0.0)) throw std::invalid_argument("smoothed_support: eps must be positive");
    const double h = support_function(k, z);
    double acc = 0.0;
    for (const auto& f : k.frequencies())
        acc += std::exp((apply_functional(f, z).real() - h) / eps);
    return h + eps * std::log(acc);
}

Eigen::VectorXd softmax_weights(const Spectrum& k, double eps, const ComplexPoint& z) {
    if (!(eps > 0.0)) throw std::invalid_argument("softmax_weights: eps must be positive");
    const double h = support_function(k, z);
    Eigen::VectorXd w(static_cast<long>(k.size()));
    for (std::size_t i = 0; i < k.size(); ++i)
        w[static_cast<long>(i)] = std::exp((apply_functional(k[i], z).real() - h) / eps);
    w /= w.sum();
    return w;
}

std::vector<int> supporting_face_indices(const Spectrum& k, const ComplexPoint& z, double tol) {
    if (z.size() != k.dimension()) throw DimensionError("supporting_face: dimension mismatch");
    if (z.norm() == 0.0) throw std::invalid_argument("supporting_face: z must be nonzero");
    if (tol < 0.0) throw std::invalid_argument("supporting_face: tol must be >= 0");
    const double h = support_function(k, z);
    const double cut = h - tol * z.norm();
    std::vector<int> idx;
    for (std::size_t i = 0; i < k.size(); ++i)
        if (apply_functional(k[i], z).real() >= cut) idx.push_back(static_cast<int>(i));
    return idx;
}

Spectrum supporting_face(const Spectrum& k, const ComplexPoint& z, double tol) {
    std::vector<Frequency> fs;
    for (int i : supporting_face_indices(k, z, tol)) fs.push_back(k[static_cast<std::size_t>(i)]);
    return Spectrum(std::move(fs));
}

QuasiPolynomial construct_face_sum(const Spectrum& k, const ComplexPoint& z,
                                   const Eigen::VectorXcd& coefficients) {
    const std::vector<int> face = supporting_face_indices(k, z, 0.0);
    if (static_cast<std::size_t>(coefficients.size()) != face.size())
        throw DimensionError("construct_face_sum: one coefficient per face frequency required");
    for (long i = 0; i < coefficients.size(); ++i)
        if (coefficients[i] == Complex(0.0, 0.0))
            throw std::invalid_argument("construct_face_sum: coefficients must be nonzero");

    std::vector<Frequency> face_freqs;
    std::vector<Eigen::VectorXd> embedded;
    for (int i : face) {
        face_freqs.push_back(k[static_cast<std::size_t>(i)]);
        embedded.push_back(real_embedding(k[static_cast<std::size_t>(i)]));
    }

    // sub-face sums sum_{xi in face_i} c_xi e^{xi(z)} must all be nonzero at z
    std::vector<std::vector<int>> failed;
    for (const auto& sub : face_lattice(embedded)) {
        std::vector<ScaledComplex> parts;
        double scale = -std::numeric_limits<double>::infinity();
        for (int j : sub) {
            Complex e = apply_functional(face_freqs[static_cast<std::size_t>(j)], z);
            ScaledComplex s = ScaledComplex::from(coefficients[j]);
            s = ScaledComplex{s.log_mag + e.real(), s.arg + e.imag()};
            scale = std::max(scale, s.log_mag);
            parts.push_back(s);
        }
        ScaledComplex sum = scaled_sum(parts.begin(), parts.end());
        if (sum.is_zero() || sum.log_mag < scale + std::log(1e-12)) failed.push_back(sub);
    }
    if (!failed.empty()) {
        std::ostringstream msg;
        msg << "construct_face_sum: " << failed.size()
            << " sub-face sum(s) vanish at z; re-randomize coefficients";
        throw FaceSumError(msg.str(), std::move(failed));
    }
    return QuasiPolynomial::exponential_sum(Spectrum(std::move(face_freqs)), coefficients);
}

}  // namespace expsum

#include "expsum/ensembles.hpp"

#include <algorithm>
#include <cmath>

#include "expsum/parallel.hpp"
#include "expsum/rng.hpp"

namespace expsum {

namespace {

Spectrum union_spectrum(const std::vector<QuasiPolynomial>& basis) {
    std::vector<Frequency> freqs;
    for (const auto& b : basis)
        for (const auto& t : b.terms()) freqs.push_back(t.freq);
    double diam = 0.0;
    for (std::size_t i = 0; i < freqs.size(); ++i)
        for (std::size_t j = i + 1; j < freqs.size(); ++j)
            diam = std::max(diam, (freqs[i] - freqs[j]).norm());
    const double tol = Spectrum::kDupTolerance * std::max(diam, 1e-300);
    std::vector<Frequency> dedup;
    for (const auto& f : freqs) {
        bool dup = false;
        for (const auto& kept : dedup)
            if ((f - kept).norm() <= tol) { dup = true; break; }
        if (!dup) dedup.push_back(f);
    }
    return Spectrum(std::move(dedup));
}

}  // namespace

HermitianBasisSpace::HermitianBasisSpace(std::vector<QuasiPolynomial> basis, CMatrix gram,
                                         std::optional<Spectrum> declared_spectrum)
    : basis_(std::move(basis)),
      gram_(std::move(gram)),
      spectrum_(declared_spectrum ? std::move(*declared_spectrum) : union_spectrum(basis_)) {
    if (basis_.empty()) throw std::invalid_argument("basis space: empty basis");
    n_ = basis_.front().dimension();
    for (const auto& b : basis_) {
        if (b.dimension() != n_) throw DimensionError("basis space: mixed dimensions");
        if (b.is_zero()) throw std::invalid_argument("basis space: zero basis element");
    }
    const long d = static_cast<long>(basis_.size());
    if (gram_.rows() != d || gram_.cols() != d)
        throw DimensionError("basis space: Gram matrix must match the basis size");
    if ((gram_ - gram_.adjoint()).norm() > 1e-12 * std::max(1.0, gram_.norm()))
        throw std::invalid_argument("basis space: Gram matrix must be Hermitian");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(gram_);
    if (es.info() != Eigen::Success ||
        es.eigenvalues().minCoeff() <= 1e-12 * es.eigenvalues().maxCoeff())
        throw NumericError("basis space: Gram matrix is not positive definite");
    Eigen::LLT<CMatrix> llt(gram_);
    if (llt.info() != Eigen::Success)
        throw NumericError("basis space: Gram factorization failed");
    chol_lower_ = llt.matrixL();

    // every basis frequency must belong to the declared spectrum
    const double tol =
        Spectrum::kDupTolerance * std::max(spectrum_.diameter(), 1.0);
    for (const auto& b : basis_)
        for (const auto& t : b.terms()) {
            bool ok = false;
            for (const auto& f : spectrum_.frequencies())
                if ((t.freq - f).norm() <= tol) { ok = true; break; }
            if (!ok)
                throw SpectrumError("basis space: basis frequency outside the declared spectrum");
        }

    derivs_.reserve(static_cast<std::size_t>(n_) * basis_.size());
    for (int k = 0; k < n_; ++k)
        for (const auto& b : basis_) derivs_.push_back(derivative(b, k));
}

std::pair<Eigen::VectorXcd, double> HermitianBasisSpace::scaled_basis_values(
    const ComplexPoint& z) const {
    const long d = static_cast<long>(basis_.size());
    Eigen::VectorXd lm(d);
    Eigen::VectorXd ph(d);
    double m = -std::numeric_limits<double>::infinity();
    for (long i = 0; i < d; ++i) {
        ScaledComplex v = eval_scaled(basis_[static_cast<std::size_t>(i)], z).value;
        lm[i] = v.log_mag;
        ph[i] = v.arg;
        m = std::max(m, lm[i]);
    }
    Eigen::VectorXcd u = Eigen::VectorXcd::Zero(d);
    if (std::isfinite(m))
        for (long i = 0; i < d; ++i)
            if (std::isfinite(lm[i]))
                u[i] = std::exp(lm[i] - m) * Complex(std::cos(ph[i]), std::sin(ph[i]));
    return {u, m};
}

std::pair<Eigen::VectorXcd, double> HermitianBasisSpace::scaled_derivative_values(
    const ComplexPoint& z, int k) const {
    if (k < 0 || k >= n_) throw DimensionError("basis space: bad derivative index");
    const long d = static_cast<long>(basis_.size());
    Eigen::VectorXd lm(d), ph(d);
    double m = -std::numeric_limits<double>::infinity();
    for (long i = 0; i < d; ++i) {
        const auto& df = derivs_[static_cast<std::size_t>(k) * basis_.size() +
                                 static_cast<std::size_t>(i)];
        ScaledComplex v = eval_scaled(df, z).value;
        lm[i] = v.log_mag;
        ph[i] = v.arg;
        m = std::max(m, lm[i]);
    }
    Eigen::VectorXcd u = Eigen::VectorXcd::Zero(d);
    if (std::isfinite(m))
        for (long i = 0; i < d; ++i)
            if (std::isfinite(lm[i]))
                u[i] = std::exp(lm[i] - m) * Complex(std::cos(ph[i]), std::sin(ph[i]));
    return {u, m};
}

double HermitianBasisSpace::log_eval_functional_norm(const ComplexPoint& z) const {
    auto [u, m] = scaled_basis_values(z);
    if (!std::isfinite(m)) return -std::numeric_limits<double>::infinity();
    Eigen::VectorXcd a = chol_lower_.triangularView<Eigen::Lower>().solve(u);
    return m + std::log(a.norm());
}

double HermitianBasisSpace::eval_functional_norm(const ComplexPoint& z) const {
    const double lg = log_eval_functional_norm(z);
    if (lg > 700.0) throw NumericError("eval_functional_norm overflows; use the log form");
    return std::isfinite(lg) ? std::exp(lg) : 0.0;
}

QuasiPolynomial HermitianBasisSpace::from_orthonormal_coeffs(const Eigen::VectorXcd& c) const {
    if (c.size() != static_cast<long>(basis_.size()))
        throw DimensionError("basis space: coefficient count mismatch");
    // e~_i = sum_j (L^{-1})_{ij} b_j, so monomial coefficients are L^{-T} c
    Eigen::VectorXcd a = chol_lower_.transpose().triangularView<Eigen::Upper>().solve(c);
    return linear_combination(a, basis_);
}

QuasiPolynomial sample_random_function(const HermitianBasisSpace& v, std::uint64_t seed) {
    SplitMix64 g(seed);
    for (int attempt = 0; attempt < 16; ++attempt) {
        Eigen::VectorXcd c(v.dimension());
        for (long i = 0; i < c.size(); ++i) c[i] = sample_complex_gaussian(g);
        if (c.norm() == 0.0) continue;  // probability-zero event
        QuasiPolynomial f = v.from_orthonormal_coeffs(c);
        if (!f.is_zero()) return f;
    }
    throw NumericError("sample_random_function: degenerate draws");
}

double expected_density_exact(const HermitianBasisSpace& v, Complex z) {
    if (v.ambient_dimension() != 1)
        throw DimensionError("expected_density_exact: one-variable spaces only");
    ComplexPoint zp(1);
    zp[0] = z;
    auto [u, mu] = v.scaled_basis_values(zp);
    if (!std::isfinite(mu))
        throw NumericError("expected_density_exact: ||Theta|| vanishes at z");
    auto [w, mw] = v.scaled_derivative_values(zp, 0);
    Eigen::VectorXcd a = v.chol_lower().triangularView<Eigen::Lower>().solve(u);
    Eigen::VectorXcd b = v.chol_lower().triangularView<Eigen::Lower>().solve(w);
    const double na2 = a.squaredNorm();
    const double nb2 = b.squaredNorm();
    const Complex ip = a.dot(b);  // sum conj(a_i) b_i
    const double num = na2 * nb2 - std::norm(ip);
    // density = (1/pi) e^{2(mw-mu)} (|a|^2|b|^2 - |<a,b>|^2) / |a|^4 under dd^c = i d dbar
    return std::exp(2.0 * (mw - mu)) * std::max(num, 0.0) / (M_PI * na2 * na2);
}

// ---------------------------------------------------------------------------
// Monte-Carlo averaged counts
// ---------------------------------------------------------------------------

AveragedCount averaged_count_1d(const HermitianBasisSpace& v, double t, double r, int trials,
                                std::uint64_t seed, int workers, const ContourSpec& base) {
    if (v.ambient_dimension() != 1)
        throw DimensionError("averaged_count_1d: one-variable spaces only");
    if (trials < 2) throw std::invalid_argument("averaged_count_1d: need >= 2 trials");
    if (!(t > 0.0)) throw std::invalid_argument("averaged_count_1d: t must be positive");

    constexpr int kAttemptsPerTrial = 8;
    std::vector<double> value(static_cast<std::size_t>(trials), 0.0);
    std::vector<int> attempts(static_cast<std::size_t>(trials), 0);

    parallel_batches(trials, workers, [&](int trial) {
        const std::uint64_t trial_seed = derive_seed(seed, static_cast<std::uint64_t>(trial));
        for (int a = 0; a < kAttemptsPerTrial; ++a) {
            try {
                QuasiPolynomial f =
                    sample_random_function(v, derive_seed(trial_seed, static_cast<std::uint64_t>(a)));
                QuasiPolynomial ft = scale(f, t);
                ContourSpec c = base;
                c.center = Complex(0.0, 0.0);
                c.radius = r;
                value[static_cast<std::size_t>(trial)] =
                    static_cast<double>(count_zeros_disk(ft, c).count) / t;
                attempts[static_cast<std::size_t>(trial)] = a + 1;
                return;
            } catch (const CountingError&) {
                continue;  // resample this trial with a fresh derived seed
            }
        }
        attempts[static_cast<std::size_t>(trial)] = kAttemptsPerTrial + 1;
    });

    AveragedCount out;
    out.trials = trials;
    long failures = 0;
    for (int i = 0; i < trials; ++i) {
        const int a = attempts[static_cast<std::size_t>(i)];
        if (a > kAttemptsPerTrial) ++failures;
        out.resampled += std::max(0, a - 1);
    }
    if (failures > 0)
        throw CountingError("averaged_count_1d: a trial exhausted its resampling attempts");
    if (out.resampled > std::max<long>(1, trials / 20))
        throw CountingError("averaged_count_1d: more than 5% of trials needed resampling");

    KahanSum mean_acc;
    for (double x : value) mean_acc.add(x);
    out.mean = mean_acc.sum / trials;
    KahanSum var_acc;
    for (double x : value) var_acc.add((x - out.mean) * (x - out.mean));
    out.stderr_mean = std::sqrt(var_acc.sum / (trials - 1.0) / trials);
    return out;
}

// ---------------------------------------------------------------------------
// Regularity profiles
// ---------------------------------------------------------------------------

namespace {

std::vector<ComplexPoint> sphere_sample(int n, int count, std::uint64_t offset) {
    std::vector<ComplexPoint> dirs;
    dirs.reserve(static_cast<std::size_t>(count));
    if (n == 1) {
        for (int j = 0; j < count; ++j) {
            const double th =
                2.0 * M_PI * (static_cast<double>(j) + (offset ? 0.5 : 0.0)) / count;
            ComplexPoint z(1);
            z[0] = Complex(std::cos(th), std::sin(th));
            dirs.push_back(z);
        }
        return dirs;
    }
    // quasi-uniform on S^3: Halton points through the Gaussian map, normalized
    for (int j = 0; j < count; ++j) {
        const std::uint64_t idx = static_cast<std::uint64_t>(j) + 1 + offset;
        double g[4];
        for (int d = 0; d < 2; ++d) {
            const double u1 = std::max(radical_inverse(idx, kHaltonBases[2 * d]), 1e-17);
            const double u2 = radical_inverse(idx, kHaltonBases[2 * d + 1]);
            const double rad = std::sqrt(-2.0 * std::log(u1));
            g[2 * d] = rad * std::cos(2.0 * M_PI * u2);
            g[2 * d + 1] = rad * std::sin(2.0 * M_PI * u2);
        }
        Eigen::Vector4d v(g[0], g[1], g[2], g[3]);
        v.normalize();
        ComplexPoint z(2);
        z[0] = Complex(v[0], v[1]);
        z[1] = Complex(v[2], v[3]);
        dirs.push_back(z);
    }
    return dirs;
}

}  // namespace

RegularityProfile regularity_profile(const HermitianBasisSpace& v,
                                     const std::vector<double>& t_list, int sphere_samples,
                                     std::uint64_t seed, double bound_epsilon) {
    if (t_list.empty()) throw std::invalid_argument("regularity_profile: empty t list");
    for (std::size_t i = 0; i < t_list.size(); ++i) {
        if (!(t_list[i] > 0.0))
            throw std::invalid_argument("regularity_profile: t values must be positive");
        if (i > 0 && !(t_list[i] > t_list[i - 1]))
            throw std::invalid_argument("regularity_profile: t list must be increasing");
    }
    const int n = v.ambient_dimension();
    if (sphere_samples <= 0) sphere_samples = (n == 1) ? 64 : 256;

    RegularityProfile prof;
    prof.t_list = t_list;
    prof.directions = sphere_sample(n, sphere_samples, 0);
    prof.bound_epsilon = bound_epsilon;
    const Spectrum& k = v.spectrum();

    const long nt = static_cast<long>(t_list.size());
    const long nd = static_cast<long>(prof.directions.size());
    prof.deviations.resize(nt, nd);
    double bound_c = -std::numeric_limits<double>::infinity();
    for (long ti = 0; ti < nt; ++ti) {
        const double t = t_list[static_cast<std::size_t>(ti)];
        double sup = -1.0;
        int worst = 0;
        for (long j = 0; j < nd; ++j) {
            const ComplexPoint& dir = prof.directions[static_cast<std::size_t>(j)];
            const double h = support_function(k, dir);
            const double lg = v.log_eval_functional_norm(t * dir);
            const double dev = std::abs(lg / t - h);
            prof.deviations(ti, j) = dev;
            if (dev > sup) {
                sup = dev;
                worst = static_cast<int>(j);
            }
            bound_c = std::max(bound_c, lg - t * h - bound_epsilon * t * dir.norm());
        }
        prof.rows.push_back({t, sup, worst});
    }
    prof.bound_constant = bound_c;

    // verify the fitted bound on an independent direction sample
    const auto check_dirs =
        sphere_sample(n, 2 * sphere_samples, n == 1 ? 1 : 7919 + seed % 1024);
    int violations = 0;
    const double slack = 1e-9 * (1.0 + std::abs(bound_c));
    for (double t : t_list)
        for (const auto& dir : check_dirs) {
            const double h = support_function(k, dir);
            const double lg = v.log_eval_functional_norm(t * dir);
            if (lg - t * h - bound_epsilon * t * dir.norm() > bound_c + slack) ++violations;
        }
    prof.bound_violations = violations;
    return prof;
}

}  // namespace expsum

#include "expsum/monge_ampere.hpp"

#include <algorithm>
#include <cmath>

#include "expsum/parallel.hpp"
#include "expsum/rng.hpp"

namespace expsum {

CMatrix complex_hessian(const Spectrum& k, double eps, const ComplexPoint& z) {
    if (!(eps > 0.0)) throw std::invalid_argument("complex_hessian: eps must be positive");
    const int n = k.dimension();
    const Eigen::VectorXd w = softmax_weights(k, eps, z);
    // center at the heaviest frequency: the covariance is exactly shift
    // invariant, and centering avoids cancellation when weights concentrate
    long ref = 0;
    w.maxCoeff(&ref);
    const Frequency center = k[static_cast<std::size_t>(ref)];
    Eigen::VectorXcd mean = Eigen::VectorXcd::Zero(n);
    CMatrix second = CMatrix::Zero(n, n);
    for (std::size_t i = 0; i < k.size(); ++i) {
        const Frequency xi = k[i] - center;
        const double wi = w[static_cast<long>(i)];
        mean += wi * xi;
        second.noalias() += wi * (xi * xi.adjoint());
    }
    CMatrix h = (second - mean * mean.adjoint()) / (4.0 * eps);
    return ((h + h.adjoint()) / 2.0).eval();  // kill rounding skew
}

double ma_density(const Spectrum& k, double eps, const ComplexPoint& z) {
    if (!(eps > 0.0)) throw std::invalid_argument("ma_density: eps must be positive");
    const int n = k.dimension();
    double det, trace;
    if (n <= 2) {
        // fused allocation-free path; this sits in the quadrature inner loop
        const std::size_t m = k.size();
        double h = -std::numeric_limits<double>::infinity();
        std::size_t ref = 0;
        for (std::size_t i = 0; i < m; ++i) {
            double a = apply_functional(k[i], z).real();
            if (a > h) {
                h = a;
                ref = i;  // heaviest frequency; see complex_hessian on centering
            }
        }
        const Frequency& c = k[ref];
        double wsum = 0.0;
        Eigen::Vector2cd mean = Eigen::Vector2cd::Zero();
        Eigen::Matrix2cd second = Eigen::Matrix2cd::Zero();
        for (std::size_t i = 0; i < m; ++i) {
            const double w = std::exp((apply_functional(k[i], z).real() - h) / eps);
            wsum += w;
            const Complex x0 = k[i](0) - c(0);
            if (n == 1) {
                mean(0) += w * x0;
                second(0, 0) += w * x0 * std::conj(x0);
            } else {
                const Complex x1 = k[i](1) - c(1);
                mean(0) += w * x0;
                mean(1) += w * x1;
                second(0, 0) += w * x0 * std::conj(x0);
                second(0, 1) += w * x0 * std::conj(x1);
                second(1, 1) += w * x1 * std::conj(x1);
            }
        }
        mean /= wsum;
        second /= wsum;
        const double s = 4.0 * eps;
        if (n == 1) {
            double c = (second(0, 0) - mean(0) * std::conj(mean(0))).real() / s;
            det = c;
            trace = c;
        } else {
            Complex c00 = (second(0, 0) - mean(0) * std::conj(mean(0))) / s;
            Complex c01 = (second(0, 1) - mean(0) * std::conj(mean(1))) / s;
            Complex c11 = (second(1, 1) - mean(1) * std::conj(mean(1))) / s;
            det = (c00 * c11 - c01 * std::conj(c01)).real();
            trace = (c00 + c11).real();
        }
    } else {
        const CMatrix h = complex_hessian(k, eps, z);
        det = h.determinant().real();
        trace = h.trace().real();
    }
    if (det < -1e-10 * std::max(trace * trace, 1e-300))
        throw NumericError("ma_density: negative determinant beyond tolerance");
    double factorial = 1.0;
    for (int i = 2; i <= n; ++i) factorial *= i;
    return std::ldexp(factorial, n) * std::max(det, 0.0);  // 2^n n! det
}

// ---------------------------------------------------------------------------
// Quadrature over balls
// ---------------------------------------------------------------------------

void QuadratureSpec::validate() const {
    if (samples < 0) throw std::invalid_argument("quadrature: samples must be >= 0");
    if (!(radius > 0.0)) throw std::invalid_argument("quadrature: radius must be positive");
    if (batches < 1) throw std::invalid_argument("quadrature: batches must be >= 1");
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
        if (!(epsilons[i] > 0.0)) throw std::invalid_argument("quadrature: eps must be positive");
        if (i > 0 && !(epsilons[i] < epsilons[i - 1]))
            throw std::invalid_argument("quadrature: eps schedule must be strictly decreasing");
    }
}

QuadratureSpec QuadratureSpec::resolved(int n, double diameter) const {
    QuadratureSpec q = *this;
    if (q.samples == 0) q.samples = (n == 1) ? 131072 : 2000000;
    if (q.method == QuadMethod::TensorGrid && n == 2) q.method = QuadMethod::LowDiscrepancy;
    if (q.epsilons.empty()) {
        const double d = diameter > 0.0 ? diameter : 1.0;
        // n = 2 integrands carry a much larger eps^2 coefficient, so the
        // schedule starts lower there
        if (n == 1)
            q.epsilons = {0.2 * d, 0.1 * d, 0.05 * d, 0.025 * d};
        else
            q.epsilons = {0.1 * d, 0.07 * d, 0.05 * d, 0.025 * d};
    }
    q.validate();
    return q;
}

namespace {

/// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on P_m.
void gauss_legendre(int m, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(static_cast<std::size_t>(m), 0.0);
    weights.assign(static_cast<std::size_t>(m), 0.0);
    for (int i = 0; i < (m + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (m + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= m; ++j) {
                double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = m * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[static_cast<std::size_t>(i)] = -x;
        nodes[static_cast<std::size_t>(m - 1 - i)] = x;
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[static_cast<std::size_t>(i)] = w;
        weights[static_cast<std::size_t>(m - 1 - i)] = w;
    }
}

/// Polar tensor grid on the disk: Gauss-Legendre radially, trapezoid in angle
/// (spectrally accurate for smooth periodic integrands).
double disk_grid_integral(const std::function<double(const ComplexPoint&)>& density, double radius,
                          int nr, int nth, int workers) {
    std::vector<double> nodes, weights;
    gauss_legendre(nr, nodes, weights);
    std::vector<double> ring(static_cast<std::size_t>(nr), 0.0);
    parallel_batches(nr, workers, [&](int i) {
        const double rho = 0.5 * radius * (nodes[static_cast<std::size_t>(i)] + 1.0);
        KahanSum s;
        ComplexPoint z(1);
        for (int j = 0; j < nth; ++j) {
            const double th = 2.0 * M_PI * (j + 0.5) / nth;
            z[0] = Complex(rho * std::cos(th), rho * std::sin(th));
            s.add(density(z));
        }
        ring[static_cast<std::size_t>(i)] =
            s.sum * (2.0 * M_PI / nth) * rho * (0.5 * radius * weights[static_cast<std::size_t>(i)]);
    });
    KahanSum total;
    for (double v : ring) total.add(v);
    return total.sum;
}

BallIntegral integrate_disk(const std::function<double(const ComplexPoint&)>& density,
                            const QuadratureSpec& spec) {
    // grid sized from the sample budget, error from one refinement step
    const long budget = spec.samples;
    int nr = std::max(32, static_cast<int>(std::sqrt(static_cast<double>(budget) / 2.0)));
    int nth = 2 * nr;
    double fine = disk_grid_integral(density, spec.radius, nr, nth, spec.workers);
    double coarse = disk_grid_integral(density, spec.radius, nr / 2, nth / 2, spec.workers);
    BallIntegral out;
    out.value = fine;
    out.error = std::abs(fine - coarse);
    out.flagged = spec.variance_tol > 0.0 && out.error > spec.variance_tol;
    return out;
}

/// Randomized (Cranley-Patterson) Halton points in the 2n-cube, rejected to
/// the ball; plain Monte Carlo on request. Batch layout is fixed by the seed
/// alone, so results do not depend on the worker count.
BallIntegral integrate_ball_random(const std::function<double(const ComplexPoint&)>& density,
                                   int n, const QuadratureSpec& spec, bool plain_mc) {
    const int dim = 2 * n;
    const int nbatch = spec.batches;
    const long per_batch = std::max<long>(1, spec.samples / nbatch);
    const double r = spec.radius;
    const double cube_vol = std::pow(2.0 * r, dim);
    std::vector<double> batch_mean(static_cast<std::size_t>(nbatch), 0.0);

    parallel_batches(nbatch, spec.workers, [&](int b) {
        SplitMix64 g(derive_seed(spec.seed, static_cast<std::uint64_t>(b)));
        double shift[4];
        for (double& s : shift) s = g.uniform();
        KahanSum acc;
        ComplexPoint z(n);
        for (long i = 0; i < per_batch; ++i) {
            double x[4];
            double norm_sq = 0.0;
            const std::uint64_t idx =
                static_cast<std::uint64_t>(b) * static_cast<std::uint64_t>(per_batch) +
                static_cast<std::uint64_t>(i) + 1;
            for (int d = 0; d < dim; ++d) {
                double u;
                if (plain_mc) {
                    u = g.uniform();
                } else {
                    u = radical_inverse(idx, kHaltonBases[d]) + shift[d];
                    u -= std::floor(u);
                }
                x[d] = r * (2.0 * u - 1.0);
                norm_sq += x[d] * x[d];
            }
            if (norm_sq >= r * r) continue;
            for (int c = 0; c < n; ++c) z[c] = Complex(x[2 * c], x[2 * c + 1]);
            acc.add(density(z));
        }
        batch_mean[static_cast<std::size_t>(b)] = acc.sum / static_cast<double>(per_batch);
    });

    KahanSum mean_acc;
    for (double v : batch_mean) mean_acc.add(v);
    const double mean = mean_acc.sum / nbatch;
    KahanSum var_acc;
    for (double v : batch_mean) var_acc.add((v - mean) * (v - mean));
    const double stderr_mean =
        nbatch > 1 ? std::sqrt(var_acc.sum / (nbatch - 1.0) / nbatch) : 0.0;

    BallIntegral out;
    out.value = cube_vol * mean;
    out.error = cube_vol * stderr_mean;
    out.flagged = spec.variance_tol > 0.0 && out.error > spec.variance_tol;
    return out;
}

}  // namespace

BallIntegral integrate_ball(const std::function<double(const ComplexPoint&)>& density, int n,
                            const QuadratureSpec& spec) {
    if (n != 1 && n != 2) throw std::invalid_argument("integrate_ball: only n in {1,2} supported");
    QuadratureSpec q = spec;
    if (q.samples == 0) q.samples = (n == 1) ? 131072 : 2000000;
    q.validate();
    if (q.method == QuadMethod::TensorGrid) {
        if (n == 1) return integrate_disk(density, q);
        // no tensor grid in R^4; the low-discrepancy path replaces it
        return integrate_ball_random(density, n, q, false);
    }
    return integrate_ball_random(density, n, q, q.method == QuadMethod::MonteCarlo);
}

// ---------------------------------------------------------------------------
// Pseudo-volumes
// ---------------------------------------------------------------------------

namespace {

/// Richardson-style extrapolation to eps = 0: least-squares polynomial in eps
/// of degree min(#eps - 1, 3). Returns the fitted constant term, the
/// propagated quadrature error (per-eps errors through the fit weights), and
/// the spread against the one-degree-lower fit as a model-error proxy.
struct EpsFit {
    double value;
    double propagated_error;
    double model_spread;
};

EpsFit extrapolate_eps(const std::vector<EpsRow>& rows) {
    const int m = static_cast<int>(rows.size());
    // weights of the constant term: e_0^T (A^T A)^{-1} A^T
    auto fit_weights = [&](int degree) {
        Eigen::MatrixXd a(m, degree + 1);
        for (int i = 0; i < m; ++i) {
            double p = 1.0;
            for (int d = 0; d <= degree; ++d) {
                a(i, d) = p;
                p *= rows[static_cast<std::size_t>(i)].eps;
            }
        }
        Eigen::MatrixXd pinv =
            (a.transpose() * a).ldlt().solve(a.transpose() * Eigen::MatrixXd::Identity(m, m));
        return Eigen::VectorXd(pinv.row(0));
    };
    auto apply = [&](const Eigen::VectorXd& w) {
        double v = 0.0;
        for (int i = 0; i < m; ++i) v += w[i] * rows[static_cast<std::size_t>(i)].value;
        return v;
    };
    const int degree = std::min(m - 1, 3);
    const Eigen::VectorXd w_hi = fit_weights(degree);
    const double a_hi = apply(w_hi);
    const double a_lo = degree >= 1 ? apply(fit_weights(degree - 1)) : a_hi;
    double err_sq = 0.0;
    for (int i = 0; i < m; ++i) {
        const double e = w_hi[i] * rows[static_cast<std::size_t>(i)].error;
        err_sq += e * e;
    }
    return {a_hi, std::sqrt(err_sq), std::abs(a_hi - a_lo)};
}

PvolResult pvol_of_density(const Spectrum& k, const QuadratureSpec& spec) {
    const int n = k.dimension();
    const QuadratureSpec q = spec.resolved(n, k.diameter());
    PvolResult res;
    double err_sq = 0.0;
    for (double eps : q.epsilons) {
        auto density = [&, eps](const ComplexPoint& z) { return ma_density(k, eps, z); };
        BallIntegral bi = integrate_ball(density, n, q);
        res.per_eps.push_back({eps, bi.value, bi.error});
        res.flagged = res.flagged || bi.flagged;
        err_sq += bi.error * bi.error;
    }
    if (q.extrapolate && res.per_eps.size() > 1) {
        EpsFit fit = extrapolate_eps(res.per_eps);
        res.value = fit.value;
        res.error = std::hypot(fit.propagated_error, fit.model_spread);
    } else {
        res.value = res.per_eps.back().value;
        res.error = std::sqrt(err_sq);
    }
    return res;
}

}  // namespace

PvolResult pvol(const Spectrum& k, const QuadratureSpec& spec) {
    if (k.size() == 1) {
        // single frequency: Re xi(z) is pluriharmonic, the density vanishes
        PvolResult res;
        for (double eps : spec.epsilons) res.per_eps.push_back({eps, 0.0, 0.0});
        return res;
    }
    return pvol_of_density(k, spec);
}

PvolResult mixed_pvol(const std::vector<Spectrum>& ks, const QuadratureSpec& spec) {
    const std::size_t n = ks.size();
    if (n == 0) throw std::invalid_argument("mixed_pvol: need at least one spectrum");
    for (const auto& k : ks)
        if (k.dimension() != static_cast<int>(n))
            throw DimensionError("mixed_pvol: need exactly n spectra of dimension n");

    // polarization: (1/n!) sum_{S nonempty} (-1)^{n-|S|} pvol(sum_{i in S} K_i)
    PvolResult res;
    double value = 0.0, err_sq = 0.0;
    double factorial = 1.0;
    for (std::size_t i = 2; i <= n; ++i) factorial *= static_cast<double>(i);
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        std::optional<Spectrum> sum;
        int bits = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!(mask & (1u << i))) continue;
            ++bits;
            sum = sum ? minkowski_sum(*sum, ks[i]) : ks[i];
        }
        const double sign = ((static_cast<int>(n) - bits) % 2 == 0) ? 1.0 : -1.0;
        PvolResult part = pvol(*sum, spec);
        value += sign * part.value;
        err_sq += part.error * part.error;
        res.flagged = res.flagged || part.flagged;
        if (n == 1 || bits == static_cast<int>(n)) res.per_eps = part.per_eps;
    }
    res.value = value / factorial;
    res.error = std::sqrt(err_sq) / factorial;
    return res;
}

// ---------------------------------------------------------------------------
// Classical mixed volume for real polytopes
// ---------------------------------------------------------------------------

namespace {

std::vector<Eigen::VectorXd> real_vertices(const Polytope& p) {
    std::vector<Eigen::VectorXd> out;
    out.reserve(p.vertices.size());
    for (const auto& v : p.vertices) {
        for (int i = 0; i < v.size(); ++i)
            if (v[i].imag() != 0.0)
                throw std::invalid_argument("mixed_volume_real: vertices must be real");
        Eigen::VectorXd r(v.size());
        for (int i = 0; i < v.size(); ++i) r[i] = v[i].real();
        out.push_back(r);
    }
    return out;
}

}  // namespace

double polytope_volume(const Polytope& p) {
    return polytope_volume(real_vertices(p), p.n);
}

double mixed_volume_real(const std::vector<Polytope>& ps) {
    const std::size_t n = ps.size();
    if (n == 0 || n > 3) throw std::invalid_argument("mixed_volume_real: need 1 <= n <= 3");
    std::vector<std::vector<Eigen::VectorXd>> verts;
    for (const auto& p : ps) {
        if (p.n != static_cast<int>(n))
            throw DimensionError("mixed_volume_real: need n polytopes in R^n");
        verts.push_back(real_vertices(p));
    }
    double factorial = 1.0;
    for (std::size_t i = 2; i <= n; ++i) factorial *= static_cast<double>(i);
    double total = 0.0;
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        std::vector<Eigen::VectorXd> sum{Eigen::VectorXd::Zero(static_cast<long>(n))};
        int bits = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!(mask & (1u << i))) continue;
            ++bits;
            std::vector<Eigen::VectorXd> next;
            next.reserve(sum.size() * verts[i].size());
            for (const auto& a : sum)
                for (const auto& b : verts[i]) next.push_back(a + b);
            sum = std::move(next);
        }
        const double sign = ((static_cast<int>(n) - bits) % 2 == 0) ? 1.0 : -1.0;
        total += sign * polytope_volume(sum, static_cast<int>(n));
    }
    return total / factorial;
}

}  // namespace expsum

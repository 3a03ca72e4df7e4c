#include "expsum/systems2d.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "expsum/parallel.hpp"

namespace expsum {

namespace {

struct System {
    const QuasiPolynomial& f1;
    const QuasiPolynomial& f2;
    QuasiPolynomial d11, d12, d21, d22;  // d_ik = d f_i / d z_k
};

struct RowEval {
    ScaledEval value;
    ScaledComplex j1, j2;
};

RowEval eval_row(const QuasiPolynomial& f, const QuasiPolynomial& dk1, const QuasiPolynomial& dk2,
                 const ComplexPoint& z) {
    return {eval_scaled(f, z), eval_scaled(dk1, z).value, eval_scaled(dk2, z).value};
}

std::optional<Root2D> newton_from_seed(const System& sys, Eigen::Vector2cd seed,
                                       const SearchRegion& region) {
    ComplexPoint z(2);
    z[0] = seed[0];
    z[1] = seed[1];
    const double log_tol = std::log(kSystemTol);
    bool degenerate = false;
    for (int it = 0; it < 50; ++it) {
        RowEval r1 = eval_row(sys.f1, sys.d11, sys.d12, z);
        RowEval r2 = eval_row(sys.f2, sys.d21, sys.d22, z);
        const double rel1 =
            r1.value.value.is_zero() ? -1e300 : r1.value.value.log_mag - r1.value.term_scale_log;
        const double rel2 =
            r2.value.value.is_zero() ? -1e300 : r2.value.value.log_mag - r2.value.term_scale_log;
        if (rel1 < log_tol && rel2 < log_tol) {
            Root2D root;
            root.z = Eigen::Vector2cd(z[0], z[1]);
            root.residual = std::exp(std::max(rel1, rel2));
            root.iters = it;
            // singular Jacobian at the root marks a possibly degenerate zero
            const double s1 = std::max({r1.value.value.log_mag, r1.j1.log_mag, r1.j2.log_mag});
            const double s2 = std::max({r2.value.value.log_mag, r2.j1.log_mag, r2.j2.log_mag});
            auto sc = [](const ScaledComplex& v, double s) {
                return v.is_zero() ? Complex(0, 0)
                                   : std::exp(v.log_mag - s) *
                                         Complex(std::cos(v.arg), std::sin(v.arg));
            };
            Complex det = sc(r1.j1, s1) * sc(r2.j2, s2) - sc(r1.j2, s1) * sc(r2.j1, s2);
            degenerate = std::abs(det) < 1e-10;
            root.degenerate = degenerate;
            root.near_tube = std::abs(z[0].real()) > 0.95 * region.rho ||
                             std::abs(z[1].real()) > 0.95 * region.rho;
            return root;
        }

        // row-scaled 2x2 solve: multiplying a row by a constant leaves the
        // Newton step unchanged, so each row is normalized by its own scale
        const double s1 = std::max({r1.value.value.log_mag, r1.j1.log_mag, r1.j2.log_mag});
        const double s2 = std::max({r2.value.value.log_mag, r2.j1.log_mag, r2.j2.log_mag});
        if (!std::isfinite(s1) || !std::isfinite(s2)) return std::nullopt;
        auto sc = [](const ScaledComplex& v, double s) {
            return v.is_zero() ? Complex(0, 0)
                               : std::exp(v.log_mag - s) * Complex(std::cos(v.arg), std::sin(v.arg));
        };
        const Complex a = sc(r1.j1, s1), b = sc(r1.j2, s1), f1v = sc(r1.value.value, s1);
        const Complex c = sc(r2.j1, s2), d = sc(r2.j2, s2), f2v = sc(r2.value.value, s2);
        const Complex det = a * d - b * c;
        if (std::abs(det) < 1e-13) return std::nullopt;
        Complex dz1 = (f1v * d - b * f2v) / det;
        Complex dz2 = (a * f2v - f1v * c) / det;
        double step = std::hypot(std::abs(dz1), std::abs(dz2));
        if (step > 1.5) {
            dz1 *= 1.5 / step;
            dz2 *= 1.5 / step;
        }
        z[0] -= dz1;
        z[1] -= dz2;
        if (std::abs(z[0].real()) > region.rho + 3.0 || std::abs(z[1].real()) > region.rho + 3.0 ||
            std::hypot(z[0].imag(), z[1].imag()) > region.r + 2.0 * M_PI)
            return std::nullopt;
    }
    return std::nullopt;
}

}  // namespace

RootSet2D solve_system(const QuasiPolynomial& f1, const QuasiPolynomial& f2,
                       const SearchRegion& region, int workers) {
    if (f1.dimension() != 2 || f2.dimension() != 2)
        throw DimensionError("solve_system: two-variable systems only");
    if (f1.is_zero() || f2.is_zero())
        throw std::invalid_argument("solve_system: equations must be nonzero");
    if (!(region.rho > 0.0) || !(region.r > 0.0))
        throw std::invalid_argument("solve_system: region bounds must be positive");
    if (!(region.dedup < M_PI / 4.0))
        throw std::invalid_argument("solve_system: dedup distance must stay below pi/4");

    System sys{f1, f2, derivative(f1, 0), derivative(f1, 1), derivative(f2, 0),
               derivative(f2, 1)};

    std::vector<double> xs, ys;
    for (int i = 0; i < region.grid_re; ++i)
        xs.push_back(region.grid_re == 1
                         ? 0.0
                         : -region.rho + 2.0 * region.rho * i / (region.grid_re - 1));
    const double dy = M_PI / region.grid_per_pi;
    const int ny = static_cast<int>(std::floor(region.r / dy));
    for (int i = -ny; i <= ny; ++i) ys.push_back(i * dy);

    const long nx = static_cast<long>(xs.size()), my = static_cast<long>(ys.size());
    const long total = nx * my * nx * my;
    const int nbatch = static_cast<int>(std::min<long>(256, total));
    std::vector<std::vector<Root2D>> found(static_cast<std::size_t>(nbatch));
    std::vector<long> conv(static_cast<std::size_t>(nbatch), 0);

    parallel_batches(nbatch, workers, [&](int b) {
        const long lo = total * b / nbatch, hi = total * (b + 1) / nbatch;
        for (long s = lo; s < hi; ++s) {
            long rest = s;
            const long i1 = rest % nx;
            rest /= nx;
            const long j1 = rest % my;
            rest /= my;
            const long i2 = rest % nx;
            rest /= nx;
            const long j2 = rest;
            Eigen::Vector2cd seed(Complex(xs[static_cast<std::size_t>(i1)],
                                          ys[static_cast<std::size_t>(j1)]),
                                  Complex(xs[static_cast<std::size_t>(i2)],
                                          ys[static_cast<std::size_t>(j2)]));
            auto root = newton_from_seed(sys, seed, region);
            if (!root) continue;
            ++conv[static_cast<std::size_t>(b)];
            // filter to the region with a small margin
            if (std::abs(root->z[0].real()) > region.rho + 1e-6 ||
                std::abs(root->z[1].real()) > region.rho + 1e-6)
                continue;
            if (std::hypot(root->z[0].imag(), root->z[1].imag()) > region.r + 1e-6) continue;
            found[static_cast<std::size_t>(b)].push_back(*root);
        }
    });

    RootSet2D out;
    out.seeds = total;
    std::vector<Root2D> all;
    for (int b = 0; b < nbatch; ++b) {
        out.converged += conv[static_cast<std::size_t>(b)];
        all.insert(all.end(), found[static_cast<std::size_t>(b)].begin(),
                   found[static_cast<std::size_t>(b)].end());
    }
    out.empty_flagged = (out.converged == 0);

    std::sort(all.begin(), all.end(), [](const Root2D& a, const Root2D& b) {
        for (int i = 0; i < 2; ++i) {
            if (a.z[i].real() != b.z[i].real()) return a.z[i].real() < b.z[i].real();
            if (a.z[i].imag() != b.z[i].imag()) return a.z[i].imag() < b.z[i].imag();
        }
        return false;
    });
    for (const auto& root : all) {
        bool dup = false;
        for (const auto& kept : out.roots)
            if ((root.z - kept.z).norm() <= region.dedup) { dup = true; break; }
        if (!dup) out.roots.push_back(root);
    }
    return out;
}

long count_roots_ball(const QuasiPolynomial& f1, const QuasiPolynomial& f2, double r, double rho,
                      int grid_per_pi, int workers) {
    SearchRegion region;
    region.rho = rho;
    region.r = r;
    region.grid_per_pi = grid_per_pi;
    RootSet2D roots = solve_system(f1, f2, region, workers);
    long count = 0;
    for (const auto& root : roots.roots) {
        const double norm = std::sqrt(std::norm(root.z[0]) + std::norm(root.z[1]));
        if (norm < r) ++count;
    }
    return count;
}

}  // namespace expsum

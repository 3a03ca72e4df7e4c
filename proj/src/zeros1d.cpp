#include "expsum/zeros1d.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

namespace expsum {

namespace {

constexpr double kEdgeLogTol = -18.4206807439524;  // log(1e-8): relative |f| dip threshold

struct ContourPoint {
    double theta;
    ScaledComplex v;
};

struct WalkResult {
    double winding;  // raw argument increment / 2pi
    int refinements;
    bool dipped;  // |f| fell below tau_edge * local term scale somewhere
};

/// Evaluates f on the circle; a point "dips" when |f| is small against the
/// local term scale, i.e. the terms nearly cancel -- the signature of a zero
/// close to the contour. (A global-max reference would misfire: exponential
/// sums legitimately range over e^{+-r max|xi|} along a circle.)
ScaledComplex eval_on_circle(const QuasiPolynomial& f, Complex center, double radius,
                             double theta, ComplexPoint& scratch, bool& dipped) {
    scratch[0] = center + radius * Complex(std::cos(theta), std::sin(theta));
    ScaledEval se = eval_scaled(f, scratch);
    if (se.value.is_zero() || se.value.log_mag < se.term_scale_log + kEdgeLogTol) dipped = true;
    return se.value;
}

/// Walk the circle accumulating principal argument increments, bisecting arcs
/// until each step is below pi/2. The pi/2 bound (instead of pi) leaves a 2x
/// margin against branch-jump aliasing.
WalkResult walk_contour(const QuasiPolynomial& f, Complex center, double radius,
                        int initial_segments, int max_depth) {
    ComplexPoint scratch(1);
    WalkResult res{0.0, 0, false};

    std::vector<ContourPoint> nodes;
    nodes.reserve(static_cast<std::size_t>(initial_segments) + 1);
    for (int i = 0; i <= initial_segments; ++i) {
        double th = 2.0 * M_PI * i / initial_segments;
        ScaledComplex v = (i == initial_segments)
                              ? nodes.front().v
                              : eval_on_circle(f, center, radius, th, scratch, res.dipped);
        if (res.dipped) return res;
        nodes.push_back({th, v});
    }

    double total = 0.0;
    struct Arc {
        ContourPoint a, b;
        int depth;
    };
    std::vector<Arc> stack;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
        stack.push_back({nodes[i], nodes[i + 1], 0});

    while (!stack.empty()) {
        Arc arc = stack.back();
        stack.pop_back();
        const double d = principal_angle(arc.b.v.arg - arc.a.v.arg);
        if (std::abs(d) < M_PI / 2.0) {
            total += d;
            continue;
        }
        if (arc.depth >= max_depth)
            throw CountingError("count_zeros_disk: refinement depth exhausted");
        const double tm = 0.5 * (arc.a.theta + arc.b.theta);
        ScaledComplex vm = eval_on_circle(f, center, radius, tm, scratch, res.dipped);
        if (res.dipped) return res;
        ++res.refinements;
        stack.push_back({{tm, vm}, arc.b, arc.depth + 1});
        stack.push_back({arc.a, {tm, vm}, arc.depth + 1});
    }
    res.winding = total / (2.0 * M_PI);
    return res;
}

int initial_segments_for(const QuasiPolynomial& f, double radius, int requested) {
    // enough initial samples that true argument swings per arc stay below pi
    const double swing_scale = radius * f.max_frequency_norm();
    int n = 32 + static_cast<int>(1.5 * swing_scale) + 8 * f.total_degree();
    return std::min(std::max(requested, n), 200000);
}

}  // namespace

ZeroCountReport count_zeros_disk(const QuasiPolynomial& f, const ContourSpec& c) {
    if (f.dimension() != 1) throw DimensionError("count_zeros_disk: one-variable only");
    if (f.is_zero()) throw std::invalid_argument("count_zeros_disk: f is identically zero");
    if (!(c.radius > 0.0)) throw std::invalid_argument("count_zeros_disk: radius must be positive");
    if (c.segments < 8) throw std::invalid_argument("count_zeros_disk: need >= 8 segments");

    ZeroCountReport report;
    for (int j = 0; j <= c.jitter_budget; ++j) {
        // 0, +1, -1, +2, -2, ... relative offsets of 1e-3
        const int step = (j + 1) / 2;
        const double sign = (j % 2 == 1) ? 1.0 : -1.0;
        const double radius = c.radius * (1.0 + sign * 1e-3 * step);
        const int n0 = initial_segments_for(f, radius, c.segments);
        WalkResult walk = walk_contour(f, c.center, radius, n0, c.max_depth);
        if (walk.dipped) continue;  // zero too close to the contour; jitter
        const long count = std::lround(walk.winding);
        const double residual = std::abs(walk.winding - static_cast<double>(count));
        if (count < 0 || residual >= 0.25)
            throw CountingError("count_zeros_disk: winding integral far from an integer");
        report.radius = radius;
        report.count = count;
        report.winding_residual = residual;
        report.refinements = walk.refinements;
        report.jitters = j;
        return report;
    }
    throw CountingError("count_zeros_disk: jitter budget exhausted (zero persistently near contour)");
}

// ---------------------------------------------------------------------------
// Zero location by quadtree subdivision + Newton polish
// ---------------------------------------------------------------------------

namespace {

std::optional<Complex> newton_polish(const QuasiPolynomial& f, const QuasiPolynomial& fp,
                                     Complex z0, const NewtonParams& p, double step_cap) {
    Complex z = z0;
    ComplexPoint zp(1);
    for (int it = 0; it < p.max_iters; ++it) {
        zp[0] = z;
        ScaledEval se = eval_scaled(f, zp);
        if (se.value.is_zero() ||
            se.value.log_mag < se.term_scale_log + std::log(p.tol))
            return z;
        ScaledEval sp = eval_scaled(fp, zp);
        if (sp.value.is_zero()) return std::nullopt;
        ScaledComplex ratio = se.value / sp.value;
        if (ratio.log_mag > std::log(8.0 * step_cap)) return std::nullopt;  // diverging
        Complex step = ratio.value();
        if (std::abs(step) > step_cap) step *= step_cap / std::abs(step);
        z -= step;
        // stalled-step convergence: multiple roots of single-term-dominated
        // regions shrink |f| geometrically but never below the term scale
        if (std::abs(step) <= 1e-13 * (1.0 + std::abs(z))) return z;
    }
    return std::nullopt;
}

/// Winding count on a small disk; jitters are handled by count_zeros_disk.
long cell_count(const QuasiPolynomial& f, Complex center, double radius, const ContourSpec& base) {
    ContourSpec c = base;
    c.center = center;
    c.radius = radius;
    c.segments = 32;
    return count_zeros_disk(f, c).count;
}

}  // namespace

LocateResult locate_zeros_disk(const QuasiPolynomial& f, const ContourSpec& c,
                               const NewtonParams& newton) {
    LocateResult result;
    result.outer = count_zeros_disk(f, c);
    if (result.outer.count == 0) return result;

    const QuasiPolynomial fp = derivative(f, 0);
    const double r = c.radius;
    const double isolate = std::max(r * 1e-4, 1e-12 * (1.0 + std::abs(c.center)));

    struct Cell {
        Complex center;
        double half;
    };
    std::vector<Cell> stack{{c.center, r}};
    std::vector<std::pair<Complex, long>> raw;  // polished point, cell winding
    while (!stack.empty()) {
        Cell cell = stack.back();
        stack.pop_back();
        long cnt;
        try {
            cnt = cell_count(f, cell.center, cell.half * std::sqrt(2.0) * 1.02, c);
        } catch (const CountingError&) {
            cnt = 1;  // undecided cell: keep subdividing rather than dropping zeros
        }
        if (cnt == 0) continue;
        if (cell.half <= isolate) {
            auto z = newton_polish(f, fp, cell.center, newton, 4.0 * cell.half);
            raw.emplace_back(z.value_or(cell.center), cnt);
            continue;
        }
        const double h = cell.half / 2.0;
        for (int dx = -1; dx <= 1; dx += 2)
            for (int dy = -1; dy <= 1; dy += 2)
                stack.push_back({cell.center + Complex(dx * h, dy * h), h});
    }

    // cluster raw candidates, then take the multiplicity from a tiny-disk winding
    std::sort(raw.begin(), raw.end(), [](const auto& a, const auto& b) {
        if (a.first.real() != b.first.real()) return a.first.real() < b.first.real();
        return a.first.imag() < b.first.imag();
    });
    const double cluster_dist = 4.0 * isolate;
    std::vector<Complex> reps;
    for (const auto& [z, cnt] : raw) {
        bool merged = false;
        for (const auto& rep : reps)
            if (std::abs(z - rep) <= cluster_dist) { merged = true; break; }
        if (!merged) reps.push_back(z);
    }

    long mult_sum = 0;
    ComplexPoint zp(1);
    for (const Complex& rep : reps) {
        if (std::abs(rep - c.center) >= r) continue;  // escaped the disk
        long mult;
        try {
            mult = cell_count(f, rep, 2.0 * isolate, c);
        } catch (const CountingError&) {
            mult = 1;
        }
        if (mult == 0) continue;  // Newton landed on a spurious flat spot
        zp[0] = rep;
        ScaledEval se = eval_scaled(f, zp);
        double rel = se.value.is_zero() ? 0.0 : std::exp(se.value.log_mag - se.term_scale_log);
        result.zeros.push_back({rep, static_cast<int>(mult), rel});
        mult_sum += mult;
    }
    result.complete = (mult_sum == result.outer.count);
    return result;
}

DensityFit density_slope(const QuasiPolynomial& f, const std::vector<double>& radii,
                         const ContourSpec& base) {
    if (radii.size() < 4) throw std::invalid_argument("density_slope: need >= 4 radii");
    for (std::size_t i = 1; i < radii.size(); ++i)
        if (!(radii[i] > radii[i - 1]))
            throw std::invalid_argument("density_slope: radii must be increasing");

    DensityFit fit;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (double r : radii) {
        ContourSpec c = base;
        c.radius = r;
        ZeroCountReport rep = count_zeros_disk(f, c);
        fit.counts.push_back(rep);
        const double x = r, y = static_cast<double>(rep.count);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double m = static_cast<double>(radii.size());
    const double denom = m * sxx - sx * sx;
    fit.slope = (m * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / m;
    double rss = 0.0;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const double pred = fit.slope * radii[i] + fit.intercept;
        const double d = static_cast<double>(fit.counts[i].count) - pred;
        rss += d * d;
    }
    fit.residual = std::sqrt(rss / m);
    return fit;
}

}  // namespace expsum

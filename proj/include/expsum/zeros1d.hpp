#pragma once

#include <vector>

#include "expsum/spectrum.hpp"

namespace expsum {

struct ContourSpec {
    Complex center{0.0, 0.0};
    double radius = 1.0;
    int segments = 64;      // initial arcs (>= 8); raised automatically with radius*frequency
    int max_depth = 30;     // bisection depth per arc
    int jitter_budget = 8;  // radius perturbations when |f| dips near the contour
};

struct ZeroCountReport {
    double radius = 0.0;  // radius actually used (after jitter)
    long count = 0;
    double winding_residual = 0.0;  // distance of the raw winding integral to the nearest integer
    int refinements = 0;            // arc bisections performed
    int jitters = 0;
};

/// Argument-principle count of zeros of f in the disk. Arcs are bisected until
/// each step's argument change is below pi/2; contours passing too close to a
/// zero are jittered in radius and re-run.
ZeroCountReport count_zeros_disk(const QuasiPolynomial& f, const ContourSpec& c);

struct NewtonParams {
    int max_iters = 100;
    double tol = 1e-11;  // |f| relative to the local term scale
};

struct LocatedZero {
    Complex z;
    int multiplicity = 1;
    double residual = 0.0;  // |f(z)| relative to term scale
};

struct LocateResult {
    std::vector<LocatedZero> zeros;
    ZeroCountReport outer;
    bool complete = true;  // multiplicities sum to the outer count
};

/// Quadtree subdivision of the disk's bounding box with per-cell winding
/// counts, then Newton polish; multiplicities from small-disk windings.
LocateResult locate_zeros_disk(const QuasiPolynomial& f, const ContourSpec& c,
                               const NewtonParams& newton = {});

struct DensityFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // rms of fit residuals
    std::vector<ZeroCountReport> counts;
};

/// Least-squares fit N(r) ~ slope*r + intercept over the given radii; for a
/// real spectrum [alpha,beta] the slope estimates (beta-alpha)/pi.
DensityFit density_slope(const QuasiPolynomial& f, const std::vector<double>& radii,
                         const ContourSpec& base = {});

}  // namespace expsum

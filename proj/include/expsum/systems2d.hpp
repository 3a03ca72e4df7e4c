#pragma once

#include <vector>

#include "expsum/spectrum.hpp"

namespace expsum {

struct SearchRegion {
    double rho = 1.0;     // roots sought with |Re z_k| <= rho
    double r = 8.0;       // imaginary-part ball radius
    int grid_per_pi = 8;  // Newton seeds per pi of imaginary axis
    int grid_re = 4;      // seeds across the tube per real axis
    double dedup = 0.05;  // must stay below half the minimal root spacing
};

struct Root2D {
    Eigen::Vector2cd z;
    double residual = 0.0;  // max relative residual over the two equations
    int iters = 0;
    bool degenerate = false;  // Jacobian singular at the root
    bool near_tube = false;   // converged close to the |Re| bound
};

struct RootSet2D {
    std::vector<Root2D> roots;
    long seeds = 0;
    long converged = 0;
    bool empty_flagged = false;  // no seed converged at all
};

inline constexpr double kSystemTol = 1e-9;

/// Newton's method on the 2x2 holomorphic system from every grid seed in the
/// region, with analytic Jacobian; converged points are filtered to the
/// region, deduplicated and residual-validated.
RootSet2D solve_system(const QuasiPolynomial& f1, const QuasiPolynomial& f2,
                       const SearchRegion& region, int workers = 0);

/// Number of common roots with Euclidean norm (on C^2 as R^4) below r.
long count_roots_ball(const QuasiPolynomial& f1, const QuasiPolynomial& f2, double r, double rho,
                      int grid_per_pi = 8, int workers = 0);

}  // namespace expsum

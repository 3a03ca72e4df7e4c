#pragma once

#include <vector>

#include "expsum/spectrum.hpp"

namespace expsum {

/// Vertex set of conv(K) in the real 2n-space underlying (C^n)*.
struct Polytope {
    int n = 1;
    std::vector<Frequency> vertices;
};

/// C^n -> R^2n, (re, im) interleaved per coordinate.
Eigen::VectorXd real_embedding(const Frequency& xi);

/// Extreme points of conv(K). Planar hull for n = 1; for n = 2 each point is
/// tested for extremality by a small linear feasibility solve in R^4.
Polytope hull(const Spectrum& k);

double support_function(const Polytope& p, const ComplexPoint& z);

/// Is p inside conv(points) up to tol? Phase-1 simplex on the convex
/// combination constraints; points live in R^d, d <= 4.
bool in_convex_hull(const Eigen::VectorXd& p, const std::vector<Eigen::VectorXd>& points,
                    double tol);

/// All faces of conv(points) as sorted index lists, from vertices up to and
/// including the whole polytope. Intended for the small spectra of this
/// artifact (dimension of the affine span <= 4, few dozen points).
std::vector<std::vector<int>> face_lattice(const std::vector<Eigen::VectorXd>& points);

/// Euclidean volume of conv(points) for real polytopes in R^n, n <= 3:
/// interval length, shoelace on the planar hull, or a fan of tetrahedra.
double polytope_volume(const std::vector<Eigen::VectorXd>& points, int n);

}  // namespace expsum

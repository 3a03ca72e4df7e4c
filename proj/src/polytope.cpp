#include "expsum/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>

namespace expsum {

Eigen::VectorXd real_embedding(const Frequency& xi) {
    Eigen::VectorXd v(2 * xi.size());
    for (int i = 0; i < xi.size(); ++i) {
        v[2 * i] = xi[i].real();
        v[2 * i + 1] = xi[i].imag();
    }
    return v;
}

namespace {

double coordinate_scale(const std::vector<Eigen::VectorXd>& pts) {
    double s = 0.0;
    for (const auto& p : pts) s = std::max(s, p.lpNorm<Eigen::Infinity>());
    return std::max(s, 1.0);
}

/// Planar convex hull (monotone chain), counterclockwise, strictly convex
/// corners only. Returns indices into pts.
std::vector<int> planar_hull(const std::vector<Eigen::Vector2d>& pts, double tol) {
    const int m = static_cast<int>(pts.size());
    std::vector<int> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (pts[a].x() != pts[b].x()) return pts[a].x() < pts[b].x();
        return pts[a].y() < pts[b].y();
    });
    auto cross = [&](int o, int a, int b) {
        Eigen::Vector2d u = pts[a] - pts[o], v = pts[b] - pts[o];
        return u.x() * v.y() - u.y() * v.x();
    };
    std::vector<int> h;
    for (int pass = 0; pass < 2; ++pass) {
        const std::size_t base = h.size();
        for (int idx : order) {
            while (h.size() >= base + 2 && cross(h[h.size() - 2], h.back(), idx) <= tol)
                h.pop_back();
            h.push_back(idx);
        }
        h.pop_back();
        std::reverse(order.begin(), order.end());
    }
    if (h.empty()) h.push_back(order.front());  // all points coincide
    return h;
}

}  // namespace

bool in_convex_hull(const Eigen::VectorXd& p, const std::vector<Eigen::VectorXd>& points,
                    double tol) {
    if (points.empty()) return false;
    const int d = static_cast<int>(p.size());
    const int m = static_cast<int>(points.size());
    const int rows = d + 1;
    const double scale = std::max(coordinate_scale(points), p.lpNorm<Eigen::Infinity>());

    // phase-1 simplex: lambda >= 0, sum lambda = 1, sum lambda q_i = p
    Eigen::MatrixXd t(rows, m + rows + 1);
    for (int j = 0; j < m; ++j) {
        t.block(0, j, d, 1) = points[static_cast<std::size_t>(j)] / scale;
        t(d, j) = 1.0;
    }
    t.block(0, m, rows, rows).setIdentity();
    t.block(0, m + rows, d, 1) = p / scale;
    t(d, m + rows) = 1.0;
    for (int r = 0; r < rows; ++r)
        if (t(r, m + rows) < 0.0) t.row(r) = -t.row(r);

    std::vector<int> basis(static_cast<std::size_t>(rows));
    for (int r = 0; r < rows; ++r) basis[static_cast<std::size_t>(r)] = m + r;

    Eigen::VectorXd obj = Eigen::VectorXd::Zero(m + rows);
    for (int j = 0; j < m + rows; ++j) {
        double cj = (j >= m) ? 1.0 : 0.0;
        obj[j] = cj - t.block(0, j, rows, 1).sum();  // artificial costs are all 1
    }
    double obj_val = -t.col(m + rows).sum();

    const double pivot_tol = 1e-11;
    for (int iter = 0; iter < 200 * (m + rows); ++iter) {
        int enter = -1;
        for (int j = 0; j < m + rows; ++j)
            if (obj[j] < -pivot_tol) { enter = j; break; }  // Bland's rule
        if (enter < 0) break;
        int leave = -1;
        double best = 0.0;
        for (int r = 0; r < rows; ++r) {
            if (t(r, enter) <= pivot_tol) continue;
            double ratio = t(r, m + rows) / t(r, enter);
            if (leave < 0 || ratio < best - 1e-12 ||
                (ratio <= best + 1e-12 &&
                 basis[static_cast<std::size_t>(r)] < basis[static_cast<std::size_t>(leave)])) {
                leave = r;
                best = ratio;
            }
        }
        if (leave < 0) break;  // unbounded; cannot happen for this feasibility system
        t.row(leave) /= t(leave, enter);
        for (int r = 0; r < rows; ++r)
            if (r != leave && t(r, enter) != 0.0) t.row(r) -= t(r, enter) * t.row(leave);
        double coef = obj[enter];
        obj -= coef * t.row(leave).head(m + rows);
        obj_val -= coef * t(leave, m + rows);
        basis[static_cast<std::size_t>(leave)] = enter;
    }
    return -obj_val <= tol;  // residual artificial mass
}

Polytope hull(const Spectrum& k) {
    const int n = k.dimension();
    std::vector<Eigen::VectorXd> pts;
    pts.reserve(k.size());
    for (const auto& f : k.frequencies()) pts.push_back(real_embedding(f));
    const double scale = coordinate_scale(pts);

    std::vector<int> vertex_idx;
    if (n == 1) {
        std::vector<Eigen::Vector2d> p2;
        p2.reserve(pts.size());
        for (const auto& p : pts) p2.emplace_back(p[0], p[1]);
        vertex_idx = planar_hull(p2, 1e-12 * scale * scale);
    } else {
        for (std::size_t i = 0; i < pts.size(); ++i) {
            std::vector<Eigen::VectorXd> others;
            for (std::size_t j = 0; j < pts.size(); ++j)
                if (j != i) others.push_back(pts[j]);
            if (others.empty() || !in_convex_hull(pts[i], others, 1e-9))
                vertex_idx.push_back(static_cast<int>(i));
        }
    }
    Polytope p;
    p.n = n;
    for (int i : vertex_idx) p.vertices.push_back(k[static_cast<std::size_t>(i)]);
    return p;
}

double support_function(const Polytope& p, const ComplexPoint& z) {
    if (z.size() != p.n) throw DimensionError("support_function: dimension mismatch");
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& f : p.vertices) m = std::max(m, apply_functional(f, z).real());
    return m;
}

// ---------------------------------------------------------------------------
// Face lattice by recursive supporting-hyperplane enumeration
// ---------------------------------------------------------------------------

namespace {

/// Orthonormal basis of the affine span of pts (columns), with its dimension.
std::pair<Eigen::MatrixXd, int> affine_frame(const std::vector<Eigen::VectorXd>& pts,
                                             double tol) {
    const int d = static_cast<int>(pts.front().size());
    Eigen::MatrixXd diff(d, static_cast<int>(pts.size()) - 1);
    for (std::size_t i = 1; i < pts.size(); ++i)
        diff.col(static_cast<int>(i) - 1) = pts[i] - pts[0];
    if (diff.cols() == 0) return {Eigen::MatrixXd(d, 0), 0};
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(diff);
    qr.setThreshold(tol);
    const int rank = static_cast<int>(qr.rank());
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(d, rank);
    return {q, rank};
}

void collect_faces(const std::vector<Eigen::VectorXd>& pts, const std::vector<int>& index_map,
                   std::set<std::vector<int>>& out) {
    std::vector<int> whole = index_map;
    std::sort(whole.begin(), whole.end());
    if (!out.insert(whole).second) return;  // already explored this face
    const int m = static_cast<int>(pts.size());
    if (m == 1) return;

    const double scale = coordinate_scale(pts);
    const double tol = 1e-9 * scale;
    auto [frame, k] = affine_frame(pts, tol);
    if (k == 0) return;  // coincident points; nothing below the whole face

    // coordinates inside the affine span
    std::vector<Eigen::VectorXd> y(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i)
        y[i] = frame.transpose() * (pts[i] - pts[0]);

    std::set<std::vector<int>> facets;  // local indices
    if (k == 1) {
        int lo = 0, hi = 0;
        for (int i = 1; i < m; ++i) {
            if (y[static_cast<std::size_t>(i)][0] < y[static_cast<std::size_t>(lo)][0]) lo = i;
            if (y[static_cast<std::size_t>(i)][0] > y[static_cast<std::size_t>(hi)][0]) hi = i;
        }
        for (int end : {lo, hi}) {
            std::vector<int> f;
            for (int i = 0; i < m; ++i)
                if (std::abs(y[static_cast<std::size_t>(i)][0] -
                             y[static_cast<std::size_t>(end)][0]) <= tol)
                    f.push_back(i);
            facets.insert(f);
        }
    } else {
        // hyperplanes through k affinely independent points, all others one-sided
        std::vector<int> comb(static_cast<std::size_t>(k));
        std::function<void(int, int)> rec = [&](int start, int depth) {
            if (depth == k) {
                Eigen::MatrixXd d(k, k - 1);
                for (int c = 1; c < k; ++c)
                    d.col(c - 1) = y[static_cast<std::size_t>(comb[static_cast<std::size_t>(c)])] -
                                   y[static_cast<std::size_t>(comb[0])];
                Eigen::JacobiSVD<Eigen::MatrixXd> svd(d, Eigen::ComputeFullU);
                if (k > 1 && svd.singularValues()[k - 2] <= tol) return;  // degenerate subset
                Eigen::VectorXd normal = svd.matrixU().col(k - 1);
                double lo = 0.0, hi = 0.0;
                Eigen::VectorXd s(m);
                for (int i = 0; i < m; ++i) {
                    s[i] = normal.dot(y[static_cast<std::size_t>(i)] -
                                      y[static_cast<std::size_t>(comb[0])]);
                    lo = std::min(lo, s[i]);
                    hi = std::max(hi, s[i]);
                }
                for (int side = 0; side < 2; ++side) {
                    if ((side == 0 && lo < -tol) || (side == 1 && hi > tol)) continue;
                    std::vector<int> f;
                    for (int i = 0; i < m; ++i)
                        if (std::abs(s[i]) <= tol) f.push_back(i);
                    facets.insert(f);
                }
                return;
            }
            for (int i = start; i <= m - (k - depth); ++i) {
                comb[static_cast<std::size_t>(depth)] = i;
                rec(i + 1, depth + 1);
            }
        };
        rec(0, 0);
    }

    for (const auto& facet : facets) {
        if (static_cast<int>(facet.size()) == m) continue;  // flat polytope, skip self
        std::vector<Eigen::VectorXd> sub_pts;
        std::vector<int> sub_map;
        for (int i : facet) {
            sub_pts.push_back(pts[static_cast<std::size_t>(i)]);
            sub_map.push_back(index_map[static_cast<std::size_t>(i)]);
        }
        collect_faces(sub_pts, sub_map, out);
    }
}

}  // namespace

std::vector<std::vector<int>> face_lattice(const std::vector<Eigen::VectorXd>& points) {
    if (points.empty()) return {};
    std::vector<int> ids(points.size());
    std::iota(ids.begin(), ids.end(), 0);
    std::set<std::vector<int>> faces;
    collect_faces(points, ids, faces);
    return {faces.begin(), faces.end()};
}

// ---------------------------------------------------------------------------
// Volumes of real polytopes, n <= 3
// ---------------------------------------------------------------------------

double polytope_volume(const std::vector<Eigen::VectorXd>& points, int n) {
    if (points.empty()) return 0.0;
    if (n > 3) throw std::invalid_argument("polytope_volume: only n <= 3 supported");
    const double scale = coordinate_scale(points);
    const double tol = 1e-9 * scale;

    if (n == 1) {
        double lo = points[0][0], hi = points[0][0];
        for (const auto& p : points) {
            lo = std::min(lo, p[0]);
            hi = std::max(hi, p[0]);
        }
        return hi - lo;
    }
    if (n == 2) {
        std::vector<Eigen::Vector2d> p2;
        p2.reserve(points.size());
        for (const auto& p : points) p2.emplace_back(p[0], p[1]);
        std::vector<int> h = planar_hull(p2, 1e-12 * scale * scale);
        double a = 0.0;
        for (std::size_t i = 0; i < h.size(); ++i) {
            const auto& u = p2[static_cast<std::size_t>(h[i])];
            const auto& v = p2[static_cast<std::size_t>(h[(i + 1) % h.size()])];
            a += u.x() * v.y() - v.x() * u.y();
        }
        return std::abs(a) / 2.0;
    }

    // n == 3: facet areas times distance from the centroid
    Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
    for (const auto& p : points) centroid += p.head<3>();
    centroid /= static_cast<double>(points.size());

    double vol = 0.0;
    std::set<std::vector<int>> seen;
    const int m = static_cast<int>(points.size());
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            for (int l = j + 1; l < m; ++l) {
                Eigen::Vector3d a = points[static_cast<std::size_t>(i)].head<3>();
                Eigen::Vector3d u = points[static_cast<std::size_t>(j)].head<3>() - a;
                Eigen::Vector3d v = points[static_cast<std::size_t>(l)].head<3>() - a;
                Eigen::Vector3d normal = u.cross(v);
                if (normal.norm() <= tol * scale) continue;
                normal.normalize();
                double lo = 0.0, hi = 0.0;
                std::vector<int> on;
                for (int q = 0; q < m; ++q) {
                    double s = normal.dot(points[static_cast<std::size_t>(q)].head<3>() - a);
                    lo = std::min(lo, s);
                    hi = std::max(hi, s);
                    if (std::abs(s) <= tol) on.push_back(q);
                }
                if (lo < -tol && hi > tol) continue;  // not supporting
                if (!seen.insert(on).second) continue;
                // facet area via its planar hull
                Eigen::Vector3d e1 = u.normalized();
                Eigen::Vector3d e2 = normal.cross(e1);
                std::vector<Eigen::Vector2d> flat;
                flat.reserve(on.size());
                for (int q : on) {
                    Eigen::Vector3d w = points[static_cast<std::size_t>(q)].head<3>() - a;
                    flat.emplace_back(e1.dot(w), e2.dot(w));
                }
                std::vector<int> h = planar_hull(flat, 1e-12 * scale * scale);
                double area2 = 0.0;
                for (std::size_t ii = 0; ii < h.size(); ++ii) {
                    const auto& p = flat[static_cast<std::size_t>(h[ii])];
                    const auto& q = flat[static_cast<std::size_t>(h[(ii + 1) % h.size()])];
                    area2 += p.x() * q.y() - q.x() * p.y();
                }
                double area = std::abs(area2) / 2.0;
                double dist = std::abs(normal.dot(centroid - a));
                vol += area * dist / 3.0;
            }
    return vol;
}

}  // namespace expsum

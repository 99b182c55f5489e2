#pragma once

#include <optional>
#include <vector>

#include "polyknot/polygon.hpp"
#include "polyknot/thickness.hpp"

namespace polyknot {

struct Plane {
    Vec3 point;
    Vec3 normal;  // unit

    double signed_distance(const Vec3& x) const { return dot(x - point, normal); }
    Vec3 project(const Vec3& x) const { return x - normal * signed_distance(x); }
};

// Angle-bisecting plane at v_i: contains v_i, makes equal angles with both
// incident edges, and contains the normal of the plane spanned by them.  At
// a collinear vertex this degenerates to the plane normal to the common edge
// direction.
inline Plane bisecting_plane(const PolygonalKnot& K, int i) {
    const Vec3 a = K.edge_dir(K.mod(i - 1));
    const Vec3 b = K.edge_dir(K.mod(i));
    const Vec3 s = a + b;
    if (s.norm() <= 1e-12)
        throw AntiParallelEdges("bisecting plane undefined at anti-parallel vertex " +
                                std::to_string(K.mod(i)));
    return Plane{K.vertex(i), normalized(s)};
}

inline std::vector<Plane> bisecting_planes(const PolygonalKnot& K) {
    std::vector<Plane> out;
    out.reserve(K.size());
    for (int i = 0; i < K.size(); ++i) out.push_back(bisecting_plane(K, i));
    return out;
}

struct RetractResult {
    KnotPoint point;
    Vec3 position;
    double dist = 0.0;
};

// Nearest point of K to x.  When x lies in the vertex wedge
// Half_i^- cap Half_i^+ the nearest point is v_i; ties resolve to the
// lowest edge index, so vertices report as t = 0 on their outgoing edge.
inline RetractResult retract(const PolygonalKnot& K, const Vec3& x) {
    RetractResult best;
    best.dist = std::numeric_limits<double>::infinity();
    for (int i = 0; i < K.size(); ++i) {
        double t;
        const Vec3 p = closest_point_on_segment(x, K.edge_start(i), K.edge_end(i), &t);
        const double d = distance(x, p);
        if (d < best.dist) {
            best.dist = d;
            best.position = p;
            best.point = {i, t};
        }
    }
    if (best.point.t >= 1.0) best.point = {K.mod(best.point.edge + 1), 0.0};
    return best;
}

// x lies in Half_i^- cap Half_i^+ (normal planes to the incident edges at
// v_i, on the far side of both edges): the Lemma critvert wedge of v_i.
inline bool in_vertex_wedge(const PolygonalKnot& K, int i, const Vec3& x) {
    const Vec3 v = K.vertex(i);
    const Vec3 a = K.edge_dir(K.mod(i - 1));
    const Vec3 b = K.edge_dir(K.mod(i));
    return dot(x - v, a) >= 0.0 && dot(x - v, b) <= 0.0;
}

inline bool point_in_tube(const PolygonalKnot& K, double r, const Vec3& x) {
    if (!(r > 0.0)) throw DomainError("point_in_tube requires r > 0");
    return retract(K, x).dist <= r;
}

// One cell of the Tube Theorem decomposition: the capsule about e_i clipped
// by the bisecting planes at its two vertices (plus the spherical
// half-wedges those planes leave attached).  Represented implicitly.
struct TubeCell {
    int edge = 0;
    double radius = 0.0;
    Vec3 core_a, core_b;   // endpoints of e_i
    Plane lo, hi;          // bisecting planes at v_i and v_{i+1}
    double lo_side = 1.0;  // sign of signed_distance for interior points
    double hi_side = -1.0;

    bool contains(const Vec3& x, double tol = 0.0) const {
        if (segment_distance(x, x, core_a, core_b) > radius + tol) return false;
        if (lo.signed_distance(x) * lo_side < -tol) return false;
        if (hi.signed_distance(x) * hi_side < -tol) return false;
        return true;
    }

    // Euclidean projection onto the cell (Dykstra over capsule and the two
    // half-spaces; the cell is convex).
    Vec3 project(const Vec3& x) const {
        auto proj_capsule = [&](const Vec3& p) {
            const Vec3 c = closest_point_on_segment(p, core_a, core_b);
            const Vec3 d = p - c;
            const double len = d.norm();
            if (len <= radius) return p;
            return c + d * (radius / len);
        };
        auto proj_half = [&](const Plane& pl, double side, const Vec3& p) {
            const double sd = pl.signed_distance(p) * side;
            if (sd >= 0.0) return p;
            return p - pl.normal * pl.signed_distance(p);
        };
        Vec3 y = x;
        Vec3 inc0{0, 0, 0}, inc1{0, 0, 0}, inc2{0, 0, 0};
        for (int it = 0; it < 200; ++it) {
            const Vec3 y_prev = y;
            Vec3 t = y + inc0;
            Vec3 p = proj_capsule(t);
            inc0 = t - p;
            y = p;
            t = y + inc1;
            p = proj_half(lo, lo_side, t);
            inc1 = t - p;
            y = p;
            t = y + inc2;
            p = proj_half(hi, hi_side, t);
            inc2 = t - p;
            y = p;
            if (distance(y, y_prev) < 1e-13) break;
        }
        return y;
    }
};

inline std::vector<TubeCell> build_cells(const PolygonalKnot& K, double r) {
    if (!(r > 0.0)) throw DomainError("build_cells requires r > 0");
    const double mr = minrad(K);
    if (r >= mr)
        throw RadiusExceedsMinRad("tube radius " + std::to_string(r) +
                                  " >= MinRad " + std::to_string(mr));
    std::vector<TubeCell> cells;
    cells.reserve(K.size());
    for (int i = 0; i < K.size(); ++i) {
        TubeCell c;
        c.edge = i;
        c.radius = r;
        c.core_a = K.edge_start(i);
        c.core_b = K.edge_end(i);
        c.lo = bisecting_plane(K, i);
        c.hi = bisecting_plane(K, i + 1);
        const Vec3 mid = 0.5 * (c.core_a + c.core_b);
        c.lo_side = c.lo.signed_distance(mid) >= 0.0 ? 1.0 : -1.0;
        c.hi_side = c.hi.signed_distance(mid) >= 0.0 ? 1.0 : -1.0;
        cells.push_back(c);
    }
    return cells;
}

struct Verdict {
    bool embedded = true;
    int cell_a = -1, cell_b = -1;
    Vec3 point_a, point_b;
    double dist = std::numeric_limits<double>::infinity();
};

namespace detail {

// Minimum distance between two convex cells by alternating projection.
inline double cell_distance(const TubeCell& a, const TubeCell& b, Vec3& pa, Vec3& pb) {
    pa = 0.5 * (a.core_a + a.core_b);
    pb = 0.5 * (b.core_a + b.core_b);
    double prev = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 1000; ++it) {
        pa = a.project(pb);
        pb = b.project(pa);
        const double d = distance(pa, pb);
        if (prev - d < 1e-10) return d;
        prev = d;
    }
    return distance(pa, pb);
}

}  // namespace detail

// Certifies pairwise disjointness of non-consecutive cells.  The capsule
// distance segment_distance(e_i, e_j) - 2r is a cheap lower bound; pairs it
// cannot separate are refined by alternating minimization between the two
// convex cells.
inline Verdict verify_embedded(const PolygonalKnot& K, double r, int /*sample_budget*/ = 0) {
    if (!(r > 0.0)) throw DomainError("verify_embedded requires r > 0");
    const int n = K.size();
    std::vector<TubeCell> cells;
    cells.reserve(n);
    for (int i = 0; i < n; ++i) {
        TubeCell c;
        c.edge = i;
        c.radius = r;
        c.core_a = K.edge_start(i);
        c.core_b = K.edge_end(i);
        c.lo = bisecting_plane(K, i);
        c.hi = bisecting_plane(K, i + 1);
        const Vec3 mid = 0.5 * (c.core_a + c.core_b);
        c.lo_side = c.lo.signed_distance(mid) >= 0.0 ? 1.0 : -1.0;
        c.hi_side = c.hi.signed_distance(mid) >= 0.0 ? 1.0 : -1.0;
        cells.push_back(c);
    }

    Verdict verdict;
    const double touch_tol = 1e-9 * arclength(K);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 2; j < n; ++j) {
            if (K.edges_adjacent(i, j)) continue;
            const double core = segment_distance(K.edge_start(i), K.edge_end(i),
                                                 K.edge_start(j), K.edge_end(j));
            if (core - 2.0 * r > touch_tol) continue;  // capsules disjoint
            Vec3 pa, pb;
            const double d = detail::cell_distance(cells[i], cells[j], pa, pb);
            if (d <= touch_tol) {
                verdict.embedded = false;
                verdict.cell_a = i;
                verdict.cell_b = j;
                verdict.point_a = pa;
                verdict.point_b = pb;
                verdict.dist = core - 2.0 * r;
                return verdict;
            }
        }
    }
    return verdict;
}

}  // namespace polyknot

#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "polyknot/errors.hpp"
#include "polyknot/vec3.hpp"

namespace polyknot {

// A point on the knot, parameterized by edge index and fraction t in [0,1).
// Vertices are canonical with t = 0 on their outgoing edge.
struct KnotPoint {
    int edge = 0;
    double t = 0.0;

    bool is_vertex() const { return t == 0.0; }
};

struct SegmentClosest {
    double s = 0.0;      // parameter on first segment
    double t = 0.0;      // parameter on second segment
    double dist = 0.0;
    Vec3 p, q;           // realizing points
};

// Minimum distance between the closed segments [a0,a1] and [b0,b1],
// with realizing points.  Degenerate segments are treated as points.
inline SegmentClosest segment_closest(const Vec3& a0, const Vec3& a1,
                                      const Vec3& b0, const Vec3& b1) {
    const Vec3 d1 = a1 - a0;
    const Vec3 d2 = b1 - b0;
    const Vec3 r = a0 - b0;
    const double A = d1.norm2();
    const double E = d2.norm2();
    const double F = dot(d2, r);

    double s, t;
    if (A <= 0.0 && E <= 0.0) {
        s = t = 0.0;
    } else if (A <= 0.0) {
        s = 0.0;
        t = std::clamp(F / E, 0.0, 1.0);
    } else {
        const double C = dot(d1, r);
        if (E <= 0.0) {
            t = 0.0;
            s = std::clamp(-C / A, 0.0, 1.0);
        } else {
            const double B = dot(d1, d2);
            const double denom = A * E - B * B;
            s = denom > 0.0 ? std::clamp((B * F - C * E) / denom, 0.0, 1.0) : 0.0;
            t = (B * s + F) / E;
            if (t < 0.0) {
                t = 0.0;
                s = std::clamp(-C / A, 0.0, 1.0);
            } else if (t > 1.0) {
                t = 1.0;
                s = std::clamp((B - C) / A, 0.0, 1.0);
            }
        }
    }
    SegmentClosest out;
    out.s = s;
    out.t = t;
    out.p = a0 + d1 * s;
    out.q = b0 + d2 * t;
    out.dist = distance(out.p, out.q);
    return out;
}

inline double segment_distance(const Vec3& a0, const Vec3& a1,
                               const Vec3& b0, const Vec3& b1) {
    return segment_closest(a0, a1, b0, b1).dist;
}

inline Vec3 closest_point_on_segment(const Vec3& p, const Vec3& a, const Vec3& b,
                                     double* t_out = nullptr) {
    const Vec3 d = b - a;
    const double L2 = d.norm2();
    double t = L2 > 0.0 ? std::clamp(dot(p - a, d) / L2, 0.0, 1.0) : 0.0;
    if (t_out) *t_out = t;
    return a + d * t;
}

class PolygonalKnot {
  public:
    PolygonalKnot() = default;

    explicit PolygonalKnot(std::vector<Vec3> vertices) : v_(std::move(vertices)) {
        if (v_.size() < 3) throw DomainError("polygon needs at least 3 vertices");
        for (const auto& p : v_)
            if (!p.finite()) throw DomainError("non-finite vertex coordinate");
        for (int i = 0; i < size(); ++i)
            if (edge_length(i) <= 0.0) throw DomainError("zero-length edge");
    }

    int size() const { return static_cast<int>(v_.size()); }
    const std::vector<Vec3>& vertices() const { return v_; }
    const Vec3& vertex(int i) const { return v_[mod(i)]; }
    Vec3& vertex_mut(int i) { return v_[mod(i)]; }

    // Edge e_i joins v_i to v_{i+1}.
    Vec3 edge_start(int i) const { return v_[mod(i)]; }
    Vec3 edge_end(int i) const { return v_[mod(i + 1)]; }
    Vec3 edge_vector(int i) const { return edge_end(i) - edge_start(i); }
    double edge_length(int i) const { return edge_vector(i).norm(); }
    Vec3 edge_dir(int i) const { return normalized(edge_vector(i)); }

    Vec3 point_at(const KnotPoint& p) const {
        return edge_start(p.edge) + edge_vector(p.edge) * p.t;
    }

    int mod(int i) const {
        const int n = size();
        i %= n;
        return i < 0 ? i + n : i;
    }

    // Edges i and j are adjacent when they share a vertex (or coincide).
    bool edges_adjacent(int i, int j) const {
        const int n = size();
        const int d = std::abs(mod(i) - mod(j));
        return d == 0 || d == 1 || d == n - 1;
    }

  private:
    std::vector<Vec3> v_;
};

inline PolygonalKnot regular_ngon(int n, double circumradius) {
    if (n < 3) throw DomainError("regular_ngon requires n >= 3");
    if (!(circumradius > 0.0)) throw DomainError("regular_ngon requires circumradius > 0");
    std::vector<Vec3> pts;
    pts.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double a = 2.0 * std::numbers::pi * i / n;
        pts.push_back({circumradius * std::cos(a), circumradius * std::sin(a), 0.0});
    }
    return PolygonalKnot(std::move(pts));
}

// Exterior angle between the directions of e_{i-1} and e_i, in [0, pi).
// Computed from atan2 of the cross/dot pair for stability near 0 and pi.
inline double turning_angle(const PolygonalKnot& K, int i) {
    const Vec3 a = K.edge_dir(i - 1);
    const Vec3 b = K.edge_dir(i);
    const double angle = std::atan2(cross(a, b).norm(), dot(a, b));
    constexpr double kAntiParallelTol = 1e-12;
    if (angle >= std::numbers::pi - kAntiParallelTol)
        throw AntiParallelEdges("anti-parallel consecutive edges at vertex " + std::to_string(K.mod(i)));
    return angle;
}

inline double min_edge(const PolygonalKnot& K) {
    double m = K.edge_length(0);
    for (int i = 1; i < K.size(); ++i) m = std::min(m, K.edge_length(i));
    return m;
}

inline double arclength(const PolygonalKnot& K) {
    double L = 0.0;
    for (int i = 0; i < K.size(); ++i) L += K.edge_length(i);
    return L;
}

inline bool is_equilateral(const PolygonalKnot& K, double tol) {
    const double mean = arclength(K) / K.size();
    for (int i = 0; i < K.size(); ++i)
        if (std::fabs(K.edge_length(i) - mean) > tol * mean) return false;
    return true;
}

struct MdResult {
    double dist = 0.0;
    int edge_a = 0, edge_b = 0;
    Vec3 pa, pb;
};

// Minimum distance between non-adjacent edges, with the realizing pair.
inline MdResult md_witness(const PolygonalKnot& K) {
    const int n = K.size();
    MdResult best;
    best.dist = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 2; j < n; ++j) {
            if (K.edges_adjacent(i, j)) continue;
            const auto c = segment_closest(K.edge_start(i), K.edge_end(i),
                                           K.edge_start(j), K.edge_end(j));
            if (c.dist < best.dist) {
                best.dist = c.dist;
                best.edge_a = i;
                best.edge_b = j;
                best.pa = c.p;
                best.pb = c.q;
            }
        }
    }
    return best;
}

inline double md(const PolygonalKnot& K) {
    const auto r = md_witness(K);
    if (r.dist <= 1e-9 * arclength(K))
        throw NotEmbedded("polygon is not embedded: MD below tolerance");
    return r.dist;
}

inline bool is_embedded(const PolygonalKnot& K, double rel_tol = 1e-9) {
    return md_witness(K).dist > rel_tol * arclength(K);
}

// Sum of turning angles over the closed forward arc from x to y, including
// the angle at x and/or y when either is a vertex.
inline double forward_curvature(const PolygonalKnot& K, const KnotPoint& x, const KnotPoint& y) {
    int first = x.is_vertex() ? x.edge : K.mod(x.edge + 1);
    int last = y.edge;
    double sum = 0.0;
    // Same-edge forward arc with t_x < t_y passes no vertex (unless x is the
    // edge's start vertex).
    if (x.edge == y.edge && x.t < y.t && !x.is_vertex()) return 0.0;
    if (x.edge == y.edge && x.t < y.t && x.is_vertex()) return turning_angle(K, x.edge);
    int k = first;
    while (true) {
        sum += turning_angle(K, k);
        if (k == K.mod(last)) break;
        k = K.mod(k + 1);
        if (k == first) break;  // full loop safeguard
    }
    return sum;
}

// Total curvature between x and y: minimum over the two connecting arcs of
// the summed turning angles.
inline double total_curvature(const PolygonalKnot& K, const KnotPoint& x, const KnotPoint& y) {
    return std::min(forward_curvature(K, x, y), forward_curvature(K, y, x));
}

// Point at arc-distance `offset` (signed, along orientation) from p.
inline KnotPoint walk(const PolygonalKnot& K, KnotPoint p, double offset) {
    int e = K.mod(p.edge);
    double pos = p.t * K.edge_length(e) + offset;
    while (pos < 0.0) {
        e = K.mod(e - 1);
        pos += K.edge_length(e);
    }
    while (pos >= K.edge_length(e)) {
        pos -= K.edge_length(e);
        e = K.mod(e + 1);
    }
    return {e, pos / K.edge_length(e)};
}

// --- knot file format: one vertex per line, '#' comments, closure implicit ---

inline PolygonalKnot read_knot(std::istream& in) {
    std::vector<Vec3> pts;
    std::string line;
    while (std::getline(in, line)) {
        const auto h = line.find_first_not_of(" \t\r\n");
        if (h == std::string::npos || line[h] == '#') continue;
        std::istringstream ls(line);
        Vec3 p;
        if (!(ls >> p.x >> p.y >> p.z))
            throw DomainError("malformed vertex line: " + line);
        pts.push_back(p);
    }
    return PolygonalKnot(std::move(pts));
}

inline PolygonalKnot read_knot_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open knot file: " + path);
    return read_knot(in);
}

inline void write_knot(std::ostream& out, const PolygonalKnot& K) {
    char buf[128];
    for (const auto& p : K.vertices()) {
        std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g\n", p.x, p.y, p.z);
        out << buf;
    }
}

inline void write_knot_file(const std::string& path, const PolygonalKnot& K) {
    std::ofstream out(path);
    if (!out) throw DomainError("cannot open output file: " + path);
    write_knot(out, K);
}

// A 6-vertex trefoil (right-handed), the minimal stick count for a nontrivial
// knot.  Coordinates found by seeded random search and frozen.
inline PolygonalKnot minimal_stick_trefoil() {
    return PolygonalKnot({{0.344, 0.751, -0.929},
                          {0.517, 0.444, -0.606},
                          {-0.242, -0.721, -0.053},
                          {0.245, 0.850, -0.262},
                          {0.518, 0.337, -0.795},
                          {0.295, 0.119, -0.243}});
}

inline PolygonalKnot scaled(const PolygonalKnot& K, double lambda) {
    std::vector<Vec3> pts;
    pts.reserve(K.size());
    for (const auto& p : K.vertices()) pts.push_back(p * lambda);
    return PolygonalKnot(std::move(pts));
}

}  // namespace polyknot

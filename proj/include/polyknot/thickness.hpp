#pragma once

#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "polyknot/polygon.hpp"

namespace polyknot {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Radius of the circular arc inscribed at v_i, tangent to both adjacent
// edges, meeting the shorter one at its midpoint.  +inf at a straight vertex.
inline double rad_vertex(const PolygonalKnot& K, int i) {
    const double angle = turning_angle(K, i);
    if (angle == 0.0) return kInf;
    const double e = std::min(K.edge_length(K.mod(i - 1)), K.edge_length(K.mod(i)));
    return e / (2.0 * std::tan(angle / 2.0));
}

struct MinRadResult {
    double value = kInf;
    int vertex = -1;
};

inline MinRadResult minrad_witness(const PolygonalKnot& K) {
    MinRadResult best;
    for (int i = 0; i < K.size(); ++i) {
        const double r = rad_vertex(K, i);
        if (r < best.value) {
            best.value = r;
            best.vertex = i;
        }
    }
    return best;
}

inline double minrad(const PolygonalKnot& K) { return minrad_witness(K).value; }

// --- critical self-distances -------------------------------------------------

struct PointPair {
    KnotPoint x, y;
    double dist = kInf;
};

struct SelfDistances {
    double dcsd = kInf;
    double scsd = kInf;
    double mdcsd = kInf;
    std::optional<PointPair> dcsd_pair, scsd_pair, mdcsd_pair;
};

namespace detail {

struct TurnFlags {
    bool turn = false;  // local min or max (ties counted as turning points)
    bool min = false;
};

// One-sided slopes of d(x, .) along the polygon around y, at arc offset h.
inline TurnFlags classify_turning(const PolygonalKnot& K, const Vec3& x,
                                  const KnotPoint& y, double h) {
    constexpr double kSlopeTol = 1e-6;
    const double d0 = distance(x, K.point_at(y));
    const double dm = distance(x, K.point_at(walk(K, y, -h)));
    const double dp = distance(x, K.point_at(walk(K, y, +h)));
    const double s_minus = (d0 - dm) / h;
    const double s_plus = (dp - d0) / h;
    TurnFlags f;
    const bool is_min = s_minus <= kSlopeTol && s_plus >= -kSlopeTol;
    const bool is_max = s_minus >= -kSlopeTol && s_plus <= kSlopeTol;
    f.min = is_min;
    f.turn = is_min || is_max;
    return f;
}

// Supporting edges of a point: an interior point lies on one edge, a vertex
// on both incident edges.
inline void supporting_edges(const PolygonalKnot& K, const KnotPoint& p, int out[2]) {
    if (p.is_vertex()) {
        out[0] = K.mod(p.edge - 1);
        out[1] = K.mod(p.edge);
    } else {
        out[0] = K.mod(p.edge);
        out[1] = -1;
    }
}

inline bool on_nonadjacent_edges(const PolygonalKnot& K, const KnotPoint& a, const KnotPoint& b) {
    int ea[2], eb[2];
    supporting_edges(K, a, ea);
    supporting_edges(K, b, eb);
    for (int i : ea)
        for (int j : eb)
            if (i >= 0 && j >= 0 && !K.edges_adjacent(i, j)) return true;
    return false;
}

// Candidate pairs: critical points of a point-to-polygon distance function
// occur only at perpendicular feet or vertices, so the candidate set below
// is complete for dcsd/scsd/mdcsd.
inline std::vector<PointPair> self_distance_candidates(const PolygonalKnot& K) {
    const int n = K.size();
    std::vector<PointPair> cands;
    cands.reserve(static_cast<size_t>(n) * n);

    auto push = [&](KnotPoint a, KnotPoint b) {
        PointPair pp;
        pp.x = a;
        pp.y = b;
        pp.dist = distance(K.point_at(a), K.point_at(b));
        cands.push_back(pp);
    };

    // (a) common-perpendicular feet between non-adjacent edge lines, plus the
    // clamped closest pair, plus overlap midpoints for parallel edges.
    for (int i = 0; i < n; ++i) {
        const Vec3 a0 = K.edge_start(i), a1 = K.edge_end(i);
        const Vec3 d1 = a1 - a0;
        for (int j = i + 2; j < n; ++j) {
            if (K.edges_adjacent(i, j)) continue;
            const Vec3 b0 = K.edge_start(j), b1 = K.edge_end(j);
            const Vec3 d2 = b1 - b0;
            const Vec3 r = a0 - b0;
            const double A = d1.norm2(), B = dot(d1, d2), E = d2.norm2();
            const double C = dot(d1, r), F = dot(d2, r);
            const double denom = A * E - B * B;
            if (denom > 1e-12 * A * E) {
                const double s = (B * F - C * E) / denom;
                const double t = (A * F - B * C) / denom;
                if (s > 0.0 && s < 1.0 && t > 0.0 && t < 1.0)
                    push({i, s}, {j, t});
            } else {
                // Parallel lines: mutual perpendicular feet across the overlap.
                const double s0 = dot(b0 - a0, d1) / A;
                const double s1 = dot(b1 - a0, d1) / A;
                const double lo = std::max(0.0, std::min(s0, s1));
                const double hi = std::min(1.0, std::max(s0, s1));
                if (lo < hi) {
                    const double sm = 0.5 * (lo + hi);
                    const Vec3 p = a0 + d1 * sm;
                    const double tm = std::clamp(dot(p - b0, d2) / E, 0.0, 1.0);
                    push({i, sm}, {j, tm});
                }
            }
            const auto c = segment_closest(a0, a1, b0, b1);
            push({i, c.s}, {j, c.t});
        }
    }

    // (b) perpendicular feet from each vertex to the lines of non-incident
    // edges, plus the points of those edges lying on the normal planes of the
    // vertex's incident edges.  The latter are the boundary cases where the
    // vertex is a marginal local minimum of the distance to a moving point,
    // which is where vertex-critical pairs attain their minima.
    for (int i = 0; i < n; ++i) {
        const Vec3 v = K.vertex(i);
        const Vec3 dirs[2] = {K.edge_dir(K.mod(i - 1)), K.edge_dir(i)};
        for (int j = 0; j < n; ++j) {
            if (j == i || j == K.mod(i - 1)) continue;  // incident edges
            const Vec3 b0 = K.edge_start(j);
            const Vec3 d2 = K.edge_vector(j);
            const double t = dot(v - b0, d2) / d2.norm2();
            if (t > 0.0 && t < 1.0) push({i, 0.0}, {j, t});
            for (const Vec3& dir : dirs) {
                const double denom = dot(d2, dir);
                if (std::fabs(denom) < 1e-12 * d2.norm()) continue;
                const double tb = dot(v - b0, dir) / denom;
                if (tb > 0.0 && tb < 1.0) push({i, 0.0}, {j, tb});
            }
        }
    }

    // (c) vertex-vertex pairs.
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) push({i, 0.0}, {j, 0.0});

    return cands;
}

}  // namespace detail

namespace detail {

// Singly-critical pairs also arise in the limit where a perpendicular foot
// slides off the end of an edge: the vertex then has an exactly-zero
// one-sided slope of d_other along that edge.  Such boundary pairs realize
// the infimum of the singly-critical set, so they must count for scsd.
inline bool vertex_min_boundary(const PolygonalKnot& K, const KnotPoint& crit,
                                const KnotPoint& other) {
    if (!crit.is_vertex()) return false;
    constexpr double kSlopeTol = 1e-9;
    const int i = crit.edge;  // vertex v_i between edges i-1 and i
    const Vec3 v = K.vertex(i);
    const Vec3 w = K.point_at(other);
    const double d = distance(v, w);
    if (d <= 0.0) return false;
    int eo[2];
    supporting_edges(K, other, eo);
    const int sides[2] = {K.mod(i - 1), i};
    for (int side : sides) {
        const double slope = dot(v - w, K.edge_dir(side)) / d;
        if (std::fabs(slope) > kSlopeTol) continue;
        for (int e : eo)
            if (e >= 0 && e != side && !K.edges_adjacent(side, e)) return true;
    }
    return false;
}

}  // namespace detail

inline SelfDistances self_distances(const PolygonalKnot& K) {
    const double h = 1e-7 * arclength(K);
    SelfDistances out;
    for (const auto& c : detail::self_distance_candidates(K)) {
        if (c.dist <= 0.0) continue;
        const Vec3 px = K.point_at(c.x);
        const Vec3 py = K.point_at(c.y);
        const auto fy = detail::classify_turning(K, px, c.y, h);  // y w.r.t. d_x
        const auto fx = detail::classify_turning(K, py, c.x, h);  // x w.r.t. d_y
        if (fx.turn && fy.turn && c.dist < out.dcsd) {
            out.dcsd = c.dist;
            out.dcsd_pair = c;
        }
        const bool singly =
            ((fy.min || fx.min) && detail::on_nonadjacent_edges(K, c.x, c.y)) ||
            detail::vertex_min_boundary(K, c.x, c.y) ||
            detail::vertex_min_boundary(K, c.y, c.x);
        if (singly && c.dist < out.scsd) {
            out.scsd = c.dist;
            out.scsd_pair = c;
        }
        if (fx.min && fy.min && c.dist < out.mdcsd) {
            out.mdcsd = c.dist;
            out.mdcsd_pair = c;
        }
    }
    return out;
}

// --- thickness radius and ropelength ----------------------------------------

struct ThicknessReport {
    double minrad = kInf;
    int minrad_vertex = -1;
    double dcsd = kInf;
    double scsd = kInf;
    double mdcsd = kInf;
    double radius = kInf;
    double ropelength = kInf;
    std::optional<PointPair> dcsd_pair, scsd_pair, mdcsd_pair;
};

inline ThicknessReport thickness_report(const PolygonalKnot& K) {
    ThicknessReport rep;
    const auto mr = minrad_witness(K);
    const auto sd = self_distances(K);
    rep.minrad = mr.value;
    rep.minrad_vertex = mr.vertex;
    rep.dcsd = sd.dcsd;
    rep.scsd = sd.scsd;
    rep.mdcsd = sd.mdcsd;
    rep.dcsd_pair = sd.dcsd_pair;
    rep.scsd_pair = sd.scsd_pair;
    rep.mdcsd_pair = sd.mdcsd_pair;
    rep.radius = std::min(mr.value, sd.dcsd / 2.0);
    rep.ropelength = arclength(K) / rep.radius;
    return rep;
}

inline double thickness_radius(const PolygonalKnot& K) {
    return std::min(minrad(K), self_distances(K).dcsd / 2.0);
}

inline double ropelength(const PolygonalKnot& K) {
    return arclength(K) / thickness_radius(K);
}

// Discretized total-curvature characterization of R(K): min over sampled
// pairs with tc(x,y) >= pi of half their distance, combined with MinRad.
// Converges to thickness_radius from above as sampling refines.
inline double tc_radius(const PolygonalKnot& K, int samples_per_edge) {
    if (samples_per_edge < 8) throw DomainError("tc_radius requires samples_per_edge >= 8");
    const int n = K.size();
    std::vector<double> angle(n), prefix(n + 1, 0.0);
    for (int i = 0; i < n; ++i) {
        angle[i] = turning_angle(K, i);
        prefix[i + 1] = prefix[i] + angle[i];
    }
    const double total = prefix[n];
    // Inclusive cyclic sum of vertex angles a..b.
    auto range_sum = [&](int a, int b) {
        a = K.mod(a);
        b = K.mod(b);
        if (a <= b) return prefix[b + 1] - prefix[a];
        return total - (prefix[a] - prefix[b + 1]);
    };

    struct Sample {
        Vec3 p;
        int edge;
        bool vertex;  // t == 0
    };
    std::vector<Sample> samples;
    samples.reserve(static_cast<size_t>(n) * samples_per_edge);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < samples_per_edge; ++k) {
            const double t = static_cast<double>(k) / samples_per_edge;
            samples.push_back({K.point_at({i, t}), i, k == 0});
        }
    }

    // Angle sum over the forward arc a -> b, endpoint vertex angles included.
    auto forward_tc = [&](const Sample& a, const Sample& b, bool same_edge_short) {
        if (same_edge_short) return a.vertex ? angle[a.edge] : 0.0;
        return range_sum(a.vertex ? a.edge : a.edge + 1, b.edge);
    };

    double best = kInf;
    const size_t m = samples.size();
    for (size_t ia = 0; ia < m; ++ia) {
        const Sample& a = samples[ia];
        for (size_t ib = ia + 1; ib < m; ++ib) {
            const Sample& b = samples[ib];
            const bool same_edge = a.edge == b.edge;  // then a precedes b on it
            const double fwd = forward_tc(a, b, same_edge);
            const double bwd = forward_tc(b, a, false);
            if (std::min(fwd, bwd) >= std::numbers::pi) {
                const double d = distance(a.p, b.p);
                if (d < best) best = d;
            }
        }
    }
    return std::min(minrad(K), best / 2.0);
}

}  // namespace polyknot

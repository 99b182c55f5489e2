#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "polyknot/errors.hpp"
#include "polyknot/polygon.hpp"

namespace polyknot {

// An oriented link diagram as per-component sequences of crossing visits.
// Each crossing is visited exactly twice, once over and once under; its sign
// comes from the orientation frame of the two strands.
struct Diagram {
    struct Visit {
        int crossing = 0;
        bool over = false;
    };

    std::vector<std::vector<Visit>> components;
    std::vector<int> sign;       // indexed by crossing id; 0 marks a removed id
    std::vector<bool> present;   // crossing id still in the diagram

    int crossing_count() const {
        int n = 0;
        for (bool p : present) n += p ? 1 : 0;
        return n;
    }

    int component_count() const { return static_cast<int>(components.size()); }

    int add_crossing(int s) {
        sign.push_back(s);
        present.push_back(true);
        return static_cast<int>(sign.size()) - 1;
    }

    void remove_crossing_visits(int c) {
        for (auto& comp : components)
            comp.erase(std::remove_if(comp.begin(), comp.end(),
                                      [&](const Visit& v) { return v.crossing == c; }),
                       comp.end());
        present[c] = false;
    }

    // Relabels crossings by first-encounter order; a stable memo key.
    std::string canonical_key() const {
        std::vector<int> label(sign.size(), -1);
        int next = 0;
        std::string key;
        key.reserve(components.size() * 8 + sign.size() * 6);
        for (const auto& comp : components) {
            for (const auto& v : comp) {
                if (label[v.crossing] < 0) label[v.crossing] = next++;
                key += std::to_string(label[v.crossing]);
                key += v.over ? 'o' : 'u';
                key += sign[v.crossing] > 0 ? '+' : '-';
            }
            key += '/';
        }
        return key;
    }
};

namespace detail {

struct VisitRef {
    int comp = -1;
    int pos = -1;
};

inline void find_visits(const Diagram& d, int c, VisitRef& first, VisitRef& second) {
    first = second = VisitRef{};
    for (int ci = 0; ci < static_cast<int>(d.components.size()); ++ci) {
        const auto& comp = d.components[ci];
        for (int i = 0; i < static_cast<int>(comp.size()); ++i) {
            if (comp[i].crossing == c) {
                if (first.comp < 0)
                    first = {ci, i};
                else
                    second = {ci, i};
            }
        }
    }
}

}  // namespace detail

// Reidemeister-1: a crossing visited twice in cyclic succession bounds a
// kink; remove it.  Returns true if anything was removed.
inline bool simplify_r1_once(Diagram& d) {
    for (auto& comp : d.components) {
        const int n = static_cast<int>(comp.size());
        for (int i = 0; i < n; ++i) {
            const int j = (i + 1) % n;
            if (n >= 2 && comp[i].crossing == comp[j].crossing) {
                const int c = comp[i].crossing;
                d.remove_crossing_visits(c);
                return true;
            }
        }
    }
    return false;
}

// Reidemeister-2: crossings c, d adjacent on two strands, one strand over at
// both and the other under at both, with opposite signs, bound a cancelling
// bigon.
inline bool simplify_r2_once(Diagram& d) {
    // Collect cyclically adjacent visit pairs keyed by crossing pair.
    struct Adj {
        int a, b;
        bool over;  // both visits share this flag (else not an R2 pattern)
    };
    std::vector<Adj> adj;
    for (const auto& comp : d.components) {
        const int n = static_cast<int>(comp.size());
        if (n < 2) continue;
        for (int i = 0; i < n; ++i) {
            const auto& u = comp[i];
            const auto& v = comp[(i + 1) % n];
            if (u.crossing == v.crossing) continue;
            if (u.over != v.over) continue;
            adj.push_back({u.crossing, v.crossing, u.over});
        }
    }
    for (size_t i = 0; i < adj.size(); ++i) {
        for (size_t j = 0; j < adj.size(); ++j) {
            if (i == j) continue;
            const bool same_pair =
                (adj[i].a == adj[j].a && adj[i].b == adj[j].b) ||
                (adj[i].a == adj[j].b && adj[i].b == adj[j].a);
            if (!same_pair) continue;
            if (adj[i].over == adj[j].over) continue;  // need over-over and under-under
            if (d.sign[adj[i].a] != -d.sign[adj[i].b]) continue;
            d.remove_crossing_visits(adj[i].a);
            d.remove_crossing_visits(adj[i].b);
            return true;
        }
    }
    return false;
}

inline void simplify(Diagram& d) {
    while (simplify_r1_once(d) || simplify_r2_once(d)) {
    }
}

// Switch the over/under roles at crossing c (L+ <-> L-).
inline void switch_crossing(Diagram& d, int c) {
    for (auto& comp : d.components)
        for (auto& v : comp)
            if (v.crossing == c) v.over = !v.over;
    d.sign[c] = -d.sign[c];
}

// Oriented smoothing at crossing c (L0): reconnect the strands respecting
// orientation; merges two components or splits one.
inline void smooth_crossing(Diagram& d, int c) {
    detail::VisitRef f, s;
    detail::find_visits(d, c, f, s);
    auto slice = [](const std::vector<Diagram::Visit>& comp, int from, int to) {
        // Visits strictly between positions from and to, walking forward cyclically.
        std::vector<Diagram::Visit> out;
        const int n = static_cast<int>(comp.size());
        for (int k = (from + 1) % n; k != to; k = (k + 1) % n) out.push_back(comp[k]);
        return out;
    };
    if (f.comp == s.comp) {
        const auto comp = d.components[f.comp];
        auto first_arc = slice(comp, f.pos, s.pos);
        auto second_arc = slice(comp, s.pos, f.pos);
        d.components.erase(d.components.begin() + f.comp);
        d.components.push_back(std::move(first_arc));
        d.components.push_back(std::move(second_arc));
    } else {
        const auto a = d.components[f.comp];
        const auto b = d.components[s.comp];
        std::vector<Diagram::Visit> merged;
        merged.reserve(a.size() + b.size() - 2);
        const int na = static_cast<int>(a.size());
        const int nb = static_cast<int>(b.size());
        for (int k = (f.pos + 1) % na; k != f.pos; k = (k + 1) % na) merged.push_back(a[k]);
        for (int k = (s.pos + 1) % nb; k != s.pos; k = (k + 1) % nb) merged.push_back(b[k]);
        const int hi = std::max(f.comp, s.comp), lo = std::min(f.comp, s.comp);
        d.components.erase(d.components.begin() + hi);
        d.components.erase(d.components.begin() + lo);
        d.components.push_back(std::move(merged));
    }
    d.present[c] = false;
}

// First crossing whose first encounter along the traversal is an
// under-visit; -1 when the diagram is descending.
inline int first_ascending_crossing(const Diagram& d) {
    std::vector<bool> seen(d.sign.size(), false);
    for (const auto& comp : d.components) {
        for (const auto& v : comp) {
            if (!seen[v.crossing]) {
                seen[v.crossing] = true;
                if (!v.over) return v.crossing;
            }
        }
    }
    return -1;
}

// --- constructions ------------------------------------------------------------

// Closure of a braid word on `strands` strands.  Letter +g is the Artin
// generator sigma_g (strand at position g passes over position g+1), -g its
// inverse.  The closure must be a knot (single cycle).
inline Diagram braid_closure_knot(int strands, const std::vector<int>& word) {
    if (strands < 1) throw DomainError("braid needs at least one strand");
    Diagram d;
    std::vector<std::vector<Diagram::Visit>> strand_visits(strands);
    std::vector<int> at(strands);  // strand currently at each position
    for (int i = 0; i < strands; ++i) at[i] = i;
    for (int letter : word) {
        const int g = std::abs(letter);
        if (g < 1 || g >= strands) throw DomainError("braid letter out of range");
        const bool positive = letter > 0;
        const int c = d.add_crossing(positive ? +1 : -1);
        const int sa = at[g - 1], sb = at[g];
        strand_visits[sa].push_back({c, positive});
        strand_visits[sb].push_back({c, !positive});
        std::swap(at[g - 1], at[g]);
    }
    // Closure: the strand ending at position p continues with the strand that
    // started at position p.
    std::vector<int> end_pos(strands, -1);
    for (int p = 0; p < strands; ++p) end_pos[at[p]] = p;
    std::vector<Diagram::Visit> comp;
    int strand = 0;
    int count = 0;
    do {
        comp.insert(comp.end(), strand_visits[strand].begin(), strand_visits[strand].end());
        strand = end_pos[strand];
        ++count;
    } while (strand != 0 && count <= strands);
    if (count != strands) throw DomainError("braid closure is a link, not a knot");
    d.components.push_back(std::move(comp));
    return d;
}

// Connected sum of two knot diagrams: splice the second strand into the first.
inline Diagram connected_sum(const Diagram& a, const Diagram& b) {
    if (a.component_count() != 1 || b.component_count() != 1)
        throw DomainError("connected_sum requires knot diagrams");
    Diagram d = a;
    const int offset = static_cast<int>(a.sign.size());
    for (size_t i = 0; i < b.sign.size(); ++i) {
        d.sign.push_back(b.sign[i]);
        d.present.push_back(b.present[i]);
    }
    for (const auto& v : b.components[0])
        d.components[0].push_back({v.crossing + offset, v.over});
    return d;
}

inline Diagram mirrored(const Diagram& a) {
    Diagram d = a;
    for (auto& s : d.sign) s = -s;
    for (auto& comp : d.components)
        for (auto& v : comp) v.over = !v.over;
    return d;
}

// --- projection of a 3D polygon to a diagram ----------------------------------

// Projects K along `direction` and builds the crossing diagram.  The
// direction must be generic; non-transversal or near-degenerate geometry
// raises DegenerateProjection and the caller retries with a new direction.
inline Diagram project_diagram(const PolygonalKnot& K, const Vec3& direction,
                               double tol = 1e-9) {
    const Vec3 dir = normalized(direction);
    const Vec3 u = orthogonal_unit(dir);
    const Vec3 w = cross(dir, u);  // (u, w, dir) right-handed

    const int n = K.size();
    const double scale = arclength(K);
    struct P2 {
        double x, y, depth;
    };
    std::vector<P2> pv(n);
    for (int i = 0; i < n; ++i) {
        const Vec3& v = K.vertex(i);
        pv[i] = {dot(v, u), dot(v, w), dot(v, dir)};
    }

    auto cross2 = [](double ax, double ay, double bx, double by) { return ax * by - ay * bx; };

    for (int i = 0; i < n; ++i) {
        const int j = K.mod(i + 1);
        const double ex = pv[j].x - pv[i].x, ey = pv[j].y - pv[i].y;
        if (std::hypot(ex, ey) <= tol * scale)
            throw DegenerateProjection("edge projects to a point");
    }
    // No projected vertex may lie on a non-incident projected edge.
    for (int vi = 0; vi < n; ++vi) {
        for (int e = 0; e < n; ++e) {
            if (e == vi || K.mod(e + 1) == vi) continue;
            const int e2 = K.mod(e + 1);
            const double ax = pv[e].x, ay = pv[e].y;
            const double bx = pv[e2].x, by = pv[e2].y;
            const double dx = bx - ax, dy = by - ay;
            const double len2 = dx * dx + dy * dy;
            double t = ((pv[vi].x - ax) * dx + (pv[vi].y - ay) * dy) / len2;
            t = std::clamp(t, 0.0, 1.0);
            const double qx = ax + t * dx - pv[vi].x, qy = ay + t * dy - pv[vi].y;
            if (std::hypot(qx, qy) <= tol * scale)
                throw DegenerateProjection("projected vertex on a non-incident edge");
        }
    }

    struct CrossingHit {
        int edge_a, edge_b;
        double s, t;    // parameters on the two edges
        int id;
        int sign;
        bool a_over;
    };
    std::vector<CrossingHit> hits;
    Diagram d;
    for (int i = 0; i < n; ++i) {
        const int i2 = K.mod(i + 1);
        for (int j = i + 2; j < n; ++j) {
            if (K.edges_adjacent(i, j)) continue;
            const int j2 = K.mod(j + 1);
            const double d1x = pv[i2].x - pv[i].x, d1y = pv[i2].y - pv[i].y;
            const double d2x = pv[j2].x - pv[j].x, d2y = pv[j2].y - pv[j].y;
            const double denom = cross2(d1x, d1y, d2x, d2y);
            const double l1 = std::hypot(d1x, d1y), l2 = std::hypot(d2x, d2y);
            const double rx = pv[j].x - pv[i].x, ry = pv[j].y - pv[i].y;
            if (std::fabs(denom) <= tol * l1 * l2) {
                // Parallel in projection: reject only if the segments are close.
                const double dist = std::fabs(cross2(rx, ry, d1x, d1y)) / l1;
                if (dist <= tol * scale)
                    throw DegenerateProjection("parallel overlapping projected edges");
                continue;
            }
            const double s = cross2(rx, ry, d2x, d2y) / denom;
            const double t = cross2(rx, ry, d1x, d1y) / denom;
            const double margin = 1e3 * tol;
            if (s <= -margin || s >= 1.0 + margin || t <= -margin || t >= 1.0 + margin)
                continue;
            if (s <= margin || s >= 1.0 - margin || t <= margin || t >= 1.0 - margin)
                throw DegenerateProjection("crossing too close to a vertex");
            const double depth_a = pv[i].depth + s * (dot(K.vertex(i2), dir) - pv[i].depth);
            const double depth_b = pv[j].depth + t * (dot(K.vertex(j2), dir) - pv[j].depth);
            if (std::fabs(depth_a - depth_b) <= tol * scale)
                throw DegenerateProjection("strands touch at a crossing");
            const bool a_over = depth_a > depth_b;
            // Crossing sign from the planar frame: positive when the over
            // direction followed by the under direction is right-handed.
            const double cr = a_over ? cross2(d1x, d1y, d2x, d2y) : cross2(d2x, d2y, d1x, d1y);
            CrossingHit h;
            h.edge_a = i;
            h.edge_b = j;
            h.s = s;
            h.t = t;
            h.sign = cr > 0.0 ? +1 : -1;
            h.a_over = a_over;
            h.id = d.add_crossing(h.sign);
            hits.push_back(h);
        }
    }

    // Order visits along the strand: per edge, crossings sorted by parameter.
    std::vector<std::vector<std::pair<double, Diagram::Visit>>> on_edge(n);
    for (const auto& h : hits) {
        on_edge[h.edge_a].push_back({h.s, {h.id, h.a_over}});
        on_edge[h.edge_b].push_back({h.t, {h.id, !h.a_over}});
    }
    std::vector<Diagram::Visit> comp;
    for (int i = 0; i < n; ++i) {
        auto& v = on_edge[i];
        std::sort(v.begin(), v.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (size_t k = 0; k + 1 < v.size(); ++k)
            if (v[k + 1].first - v[k].first <= 1e3 * tol)
                throw DegenerateProjection("crossings too close along an edge");
        for (const auto& [param, visit] : v) comp.push_back(visit);
    }
    d.components.push_back(std::move(comp));
    return d;
}

}  // namespace polyknot

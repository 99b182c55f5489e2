#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>

#include "polyknot/diagram.hpp"
#include "polyknot/errors.hpp"
#include "polyknot/laurent.hpp"
#include "polyknot/polygon.hpp"
#include "polyknot/rng.hpp"

namespace polyknot {

// HOMFLY polynomial in the skein variables (l, m):
//   l P(L+) + l^{-1} P(L-) + m P(L0) = 0,  P(unknot) = 1.
// Computed by recursively switching/smoothing the first crossing encountered
// as an under-visit until every diagram is descending (hence an unlink).
class HomflyEngine {
public:
    explicit HomflyEngine(int crossing_cap = 200, std::uint64_t node_budget = 1u << 22)
        : crossing_cap_(crossing_cap), node_budget_(node_budget) {}

    LaurentPoly2 compute(Diagram d) {
        simplify(d);
        if (d.crossing_count() > crossing_cap_)
            throw TooManyCrossings("diagram exceeds the crossing cap");
        nodes_ = 0;
        memo_.clear();
        return eval(std::move(d));
    }

private:
    // P of a crossingless diagram with c components is delta^{c-1} where
    // delta = -(l + l^{-1})/m.
    static LaurentPoly2 unlink_value(int ncomps) {
        LaurentPoly2 p = LaurentPoly2::one();
        LaurentPoly2 delta;
        delta.add_term(-1, 1, -1);
        delta.add_term(-1, -1, -1);
        for (int i = 1; i < ncomps; ++i) p = p * delta;
        return p;
    }

    LaurentPoly2 eval(Diagram d) {
        if (++nodes_ > node_budget_)
            throw TooManyCrossings("skein recursion exceeded the node budget");
        simplify(d);
        const int c = first_ascending_crossing(d);
        if (c < 0) {
            // Descending diagram of a knot component plus possible free loops:
            // after simplification a descending diagram is an unlink.
            Diagram flat = d;
            for (size_t i = 0; i < flat.sign.size(); ++i)
                if (flat.present[i]) flat.remove_crossing_visits(static_cast<int>(i));
            return unlink_value(flat.component_count());
        }
        const std::string key = d.canonical_key();
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;

        Diagram switched = d;
        switch_crossing(switched, c);
        Diagram smoothed = d;
        smooth_crossing(smoothed, c);

        const LaurentPoly2 ps = eval(std::move(switched));
        const LaurentPoly2 p0 = eval(std::move(smoothed));
        LaurentPoly2 result;
        if (d.sign[c] > 0) {
            // l P+ = -l^{-1} P- - m P0  =>  P+ = -l^{-2} P- - l^{-1} m P0
            result = ps.mono_mul(-1, -2, 0) + p0.mono_mul(-1, -1, 1);
        } else {
            // P- = -l^2 P+ - l m P0
            result = ps.mono_mul(-1, 2, 0) + p0.mono_mul(-1, 1, 1);
        }
        memo_.emplace(key, result);
        return result;
    }

    int crossing_cap_;
    std::uint64_t node_budget_;
    std::uint64_t nodes_ = 0;
    std::unordered_map<std::string, LaurentPoly2> memo_;
};

inline LaurentPoly2 homfly(const Diagram& d, int crossing_cap = 200) {
    HomflyEngine engine(crossing_cap);
    return engine.compute(d);
}

// HOMFLY of a polygonal knot via generic planar projection.  Directions are
// drawn from a counter-based stream keyed by `seed`.  Several generic
// candidate directions are collected and the two simplest diagrams (fewest
// crossings after Reidemeister reduction) are evaluated; their polynomials
// must agree.  Degenerate directions are skipped, up to `max_retries` draws.
inline LaurentPoly2 homfly_of_knot(const PolygonalKnot& K, std::uint64_t seed = 12345,
                                   int crossing_cap = 200, int max_retries = 64) {
    CounterRng rng(seed, 0xd1a6);
    std::vector<Diagram> candidates;
    constexpr int kWanted = 6;
    for (int attempt = 0; attempt < max_retries; ++attempt) {
        try {
            Diagram d = project_diagram(K, rng.unit_vector());
            simplify(d);
            candidates.push_back(std::move(d));
            if (static_cast<int>(candidates.size()) >= kWanted) break;
        } catch (const DegenerateProjection&) {
        }
    }
    if (candidates.size() < 2) throw ProjectionFailure("no generic projection direction found");
    std::sort(candidates.begin(), candidates.end(),
              [](const Diagram& a, const Diagram& b) {
                  return a.crossing_count() < b.crossing_count();
              });
    std::optional<LaurentPoly2> first;
    for (const auto& d : candidates) {
        const LaurentPoly2 p = homfly(d, crossing_cap);
        if (!first) {
            first = p;
        } else if (p == *first) {
            return p;
        } else {
            first = p;  // disagreement: restart the confirmation chain
        }
    }
    throw ProjectionFailure("projection polynomials never agreed");
}

}  // namespace polyknot

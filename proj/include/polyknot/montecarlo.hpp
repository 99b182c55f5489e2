#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "polyknot/classify.hpp"
#include "polyknot/errors.hpp"
#include "polyknot/homfly.hpp"
#include "polyknot/polygon.hpp"
#include "polyknot/rng.hpp"

namespace polyknot {

struct PerturbationTally {
    std::string host;
    double radius = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    std::map<std::string, std::uint64_t> counts;  // canonical polynomial -> count
    std::uint64_t overflow = 0;                   // crossing cap or node budget exceeded
    std::uint64_t degenerate = 0;                 // perturbed polygon not embedded

    std::uint64_t classified() const {
        std::uint64_t s = 0;
        for (const auto& [k, c] : counts) s += c;
        return s;
    }

    void merge(const PerturbationTally& o) {
        samples += o.samples;
        for (const auto& [k, c] : o.counts) counts[k] += c;
        overflow += o.overflow;
        degenerate += o.degenerate;
    }

    int distinct_polynomials() const { return static_cast<int>(counts.size()); }
};

// Displace each vertex by an independent vector uniform in the closed ball
// of radius r.
inline PolygonalKnot perturb(const PolygonalKnot& K, double r, CounterRng& rng) {
    std::vector<Vec3> verts;
    verts.reserve(K.size());
    for (int i = 0; i < K.size(); ++i) verts.push_back(K.vertex(i) + rng.in_ball(r));
    return PolygonalKnot(std::move(verts));
}

namespace detail {

inline void classify_one(const PolygonalKnot& K, double r, std::uint64_t seed,
                         std::uint64_t index, int crossing_cap, PerturbationTally& tally) {
    CounterRng rng(seed, index);
    try {
        const PolygonalKnot P = perturb(K, r, rng);
        if (md_witness(P).dist <= 1e-12) {
            ++tally.degenerate;
            return;
        }
        const LaurentPoly2 p = homfly_of_knot(P, rng.next_u64(), crossing_cap);
        ++tally.counts[p.to_string()];
    } catch (const TooManyCrossings&) {
        ++tally.overflow;
    } catch (const DomainError&) {
        // Covers degenerate geometry (zero-length edges, failed projections)
        // from any stage of the pipeline.
        ++tally.degenerate;
    } catch (const std::bad_alloc&) {
        ++tally.overflow;
    }
}

}  // namespace detail

// N independent perturbations of K at radius r, classified by HOMFLY.
// Deterministic for fixed (K, r, N, seed): sample index selects the RNG
// stream, so chunking across threads cannot change any draw.
inline PerturbationTally sample(const PolygonalKnot& K, double r, std::uint64_t N,
                                std::uint64_t seed, int threads = 1,
                                int crossing_cap = 200,
                                const std::string& host = "") {
    PerturbationTally total;
    total.host = host;
    total.radius = r;
    total.samples = N;
    total.seed = seed;
    if (threads <= 1) {
        for (std::uint64_t i = 0; i < N; ++i)
            detail::classify_one(K, r, seed, i, crossing_cap, total);
        return total;
    }
    std::vector<PerturbationTally> parts(threads);
    std::vector<std::thread> workers;
    for (int t = 0; t < threads; ++t) {
        workers.emplace_back([&, t] {
            for (std::uint64_t i = t; i < N; i += threads)
                detail::classify_one(K, r, seed, i, crossing_cap, parts[t]);
        });
    }
    for (auto& w : workers) w.join();
    for (const auto& part : parts) total.merge(part);
    return total;
}

inline std::vector<PerturbationTally> radius_scan(const PolygonalKnot& K,
                                                  const std::vector<double>& radii,
                                                  std::uint64_t N, std::uint64_t seed,
                                                  int threads = 1, int crossing_cap = 200,
                                                  const std::string& host = "") {
    std::vector<PerturbationTally> out;
    out.reserve(radii.size());
    std::uint64_t stream_base = seed;
    for (double r : radii) {
        out.push_back(sample(K, r, N, stream_base, threads, crossing_cap, host));
        stream_base += N;  // disjoint stream indices per radius
    }
    return out;
}

struct EdgeScanRow {
    int n = 0;
    double radius = 0.0;
    PerturbationTally tally;
};

// Perturbs each host at its own thickness radius.
inline std::vector<EdgeScanRow> edge_scan(const std::vector<PolygonalKnot>& hosts,
                                          const std::vector<double>& radii,
                                          std::uint64_t N, std::uint64_t seed,
                                          int threads = 1, int crossing_cap = 200) {
    std::vector<EdgeScanRow> rows;
    std::uint64_t stream_base = seed;
    for (size_t h = 0; h < hosts.size(); ++h) {
        EdgeScanRow row;
        row.n = hosts[h].size();
        row.radius = radii[h];
        row.tally = sample(hosts[h], row.radius, N, stream_base, threads, crossing_cap,
                           "n=" + std::to_string(row.n));
        rows.push_back(std::move(row));
        stream_base += N;
    }
    return rows;
}

// Observed reference curve for the trefoil summand count in ball
// perturbations of a regular n-gon.
inline int expected_summands(int n) { return n >= 4 ? (n - 4) / 8 : 0; }

inline int max_summands(const std::vector<PerturbationTally>& tallies) {
    int best = 0;
    for (const auto& t : tallies)
        for (const auto& [poly, count] : t.counts)
            best = std::max(best, trefoil_summand_count(classify_label(poly)));
    return best;
}

}  // namespace polyknot

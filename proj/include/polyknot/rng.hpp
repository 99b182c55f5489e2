#pragma once

#include <cstdint>

#include "polyknot/vec3.hpp"

namespace polyknot {

// Counter-based random stream: the state is derived from (seed, stream) by
// bit mixing, so stream k can be opened independently of streams 0..k-1 and
// parallel chunking cannot change any stream's output.
class CounterRng {
  public:
    CounterRng(std::uint64_t seed, std::uint64_t stream) {
        state_ = mix(seed ^ mix(stream + 0x9e3779b97f4a7c15ULL));
        if (state_ == 0) state_ = 0x6a09e667f3bcc909ULL;
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

    // Standard normal via Box-Muller.
    double normal() {
        if (have_cache_) {
            have_cache_ = false;
            return cache_;
        }
        double u1 = next_double(), u2 = next_double();
        while (u1 <= 0.0) u1 = next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        cache_ = r * std::sin(a);
        have_cache_ = true;
        return r * std::cos(a);
    }

    Vec3 unit_vector() {
        while (true) {
            const Vec3 g{normal(), normal(), normal()};
            const double n = g.norm();
            if (n > 1e-12) return g / n;
        }
    }

    // Uniform in the closed ball of radius r: random direction scaled by
    // r * U^(1/3); exact and rejection-free.
    Vec3 in_ball(double r) { return unit_vector() * (r * std::cbrt(next_double())); }

  private:
    static std::uint64_t mix(std::uint64_t x) {
        x ^= x >> 30;
        x *= 0xbf58476d1ce4e5b9ULL;
        x ^= x >> 27;
        x *= 0x94d049bb133111ebULL;
        x ^= x >> 31;
        return x;
    }

    std::uint64_t state_ = 0;
    double cache_ = 0.0;
    bool have_cache_ = false;
};

}  // namespace polyknot

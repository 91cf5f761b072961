#pragma once

// Shared draw helpers for the randomized tests. Deterministic: everything
// flows from the SplitMix64 stream seeded per test.

#include "qsphere/run.hpp"
#include "qsphere/vec3.hpp"

namespace testutil {

using qsphere::SplitMix64;
using qsphere::Vec3;

// uniform direction via rejection sampling in the unit ball
inline Vec3 unit_vec(SplitMix64& g) {
    for (;;) {
        Vec3 v{2.0 * g.uniform() - 1.0, 2.0 * g.uniform() - 1.0, 2.0 * g.uniform() - 1.0};
        double n = qsphere::norm(v);
        if (n >= 0.2 && n <= 1.0) return v / n;
    }
}

// momentum vector with norm in [lo, hi]
inline Vec3 momentum_vec(SplitMix64& g, double lo, double hi) {
    return (lo + (hi - lo) * g.uniform()) * unit_vec(g);
}

// eps with each |component| in [lo, hi], signs random
inline Vec3 random_eps(SplitMix64& g, double lo, double hi) {
    Vec3 e;
    for (int i = 0; i < 3; ++i) {
        double mag = lo + (hi - lo) * g.uniform();
        e[i] = (g.uniform() < 0.5) ? -mag : mag;
    }
    return e;
}

inline Vec3 cyc(const Vec3& v, int k) {
    return Vec3{v[k % 3], v[(1 + k) % 3], v[(2 + k) % 3]};
}

} // namespace testutil

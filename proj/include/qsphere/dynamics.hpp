#pragma once

// Exact constrained dynamics: second-order flow on the surface with the
// Lagrange multiplier eliminated, plus the induced angular momentum flow.

#include <cstddef>
#include <vector>

#include "qsphere/rk45.hpp"
#include "qsphere/settings.hpp"
#include "qsphere/surface.hpp"
#include "qsphere/vec3.hpp"

namespace qsphere {

// xdd = -[v.phi''.v / |grad phi|^2] grad phi
Vec3 geodesic_rhs(const ParticleState& st, const SurfaceParams& p,
                  double gradient_floor = 1e-8);

inline Vec3 angular_momentum(const ParticleState& st) { return cross(st.x, st.v); }

// dL/dt along the exact flow; component i carries the factor
// x_j x_k (eps_k x_k^2 - eps_j x_j^2) with (i,j,k) cyclic.
Vec3 exact_momentum_rhs(const ParticleState& st, const SurfaceParams& p,
                        double gradient_floor = 1e-8);

struct TrajectorySample {
    double t;
    ParticleState state;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    StepStats stats;
    double max_abs_phi = 0.0;           // after projection, over accepted steps
    double max_energy_drift = 0.0;      // relative |v|^2 drift vs the initial value
    std::size_t projections = 0;
};

// Adaptive DP5(4) with post-step projection whenever |phi| > surface_tol / 2.
Trajectory integrate_geodesic(const ParticleState& initial, const SurfaceParams& p,
                              double t_end, const IntegratorSettings& s = {});

} // namespace qsphere

#pragma once

// First-order averaged momentum flow on spheres |L| = const, its
// conserved Hamiltonian, and the bracket-route consistency companion.

#include <array>
#include <vector>

#include "qsphere/rk45.hpp"
#include "qsphere/settings.hpp"
#include "qsphere/surface.hpp"
#include "qsphere/vec3.hpp"

namespace qsphere {

// dL_i/dt = (3/4)(L_j L_k / L^2) [(e_k - e_j) L_i^2 + e_k L_j^2 - e_j L_k^2],
// (i,j,k) cyclic. Tangent to spheres |L| = const; even under L -> -L.
Vec3 averaged_rhs(const Vec3& L, const SurfaceParams& p);

// H = (3/16) L^2 sum_i eps_i ((L_i/L)^2 - 1)^2, conserved along averaged_rhs.
double hamiltonian(const Vec3& L, const SurfaceParams& p);
Vec3 hamiltonian_gradient(const Vec3& L, const SurfaceParams& p);

// Bracket route: with {L_i, L_j} = eps_ijk L_k the evolution is
// Ldot_i = {L_i, H} = (grad H x L)_i. Kept as an independent code path;
// must coincide with averaged_rhs to roundoff.
Vec3 bracket_rhs(const Vec3& L, const SurfaceParams& p);

// full 3x3 Jacobian d(averaged_rhs)_i / dL_j, analytic
std::array<std::array<double, 3>, 3> averaged_jacobian(const Vec3& L, const SurfaceParams& p);

struct ReducedSample {
    double t;
    Vec3 L;
};

struct ReducedTrajectory {
    std::vector<ReducedSample> samples;
    StepStats stats;
    double max_l2_drift = 0.0; // relative |L|^2 drift before renormalization
    double max_h_drift = 0.0;  // relative H drift vs the initial value
};

// Adaptive DP5(4) on the reduced flow; |L| is pinned back to |L0| after
// every accepted step (drift is recorded first). Throws ZeroMomentumError
// for |L0| = 0. t_end may be negative.
ReducedTrajectory integrate_averaged(const Vec3& L0, const SurfaceParams& p, double t_end,
                                     const IntegratorSettings& s = {});

} // namespace qsphere

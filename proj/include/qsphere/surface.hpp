#pragma once

// The constraint surface phi(x) = sum_i (x_i^2 + eps_i x_i^4) - 1 = 0
// and the free-particle flow restricted to it.

#include <vector>

#include "qsphere/settings.hpp"
#include "qsphere/vec3.hpp"

namespace qsphere {

struct SurfaceParams {
    Vec3 eps{0.0, 0.0, 0.0};
    double eps_ceiling = 0.5;
};

// throws ConfigError when any |eps_i| exceeds the ceiling
void check_params(const SurfaceParams& p);

double surface_value(const Vec3& x, const SurfaceParams& p);
Vec3 surface_gradient(const Vec3& x, const SurfaceParams& p);

// diagonal Hessian entries 2 + 12 eps_i x_i^2 contracted with v twice
double hessian_quadratic_form(const Vec3& x, const Vec3& v, const SurfaceParams& p);

struct ParticleState {
    Vec3 x;
    Vec3 v;
};

// Scale factor rho > 0 with phi(rho * dir_hat) = 0 along a unit ray.
// Closed form of the quadratic in rho^2; throws NumericalError when the
// ray misses the surface (possible only near the eps ceiling).
double ray_scale(const Vec3& dir_hat, const SurfaceParams& p);

// On-surface state from a requested direction and velocity: the position is
// the ray intersection, the velocity is tangentialized and rescaled to the
// requested speed.
ParticleState make_state(const Vec3& direction, const Vec3& velocity, const SurfaceParams& p,
                         const IntegratorSettings& s = {});

// Newton correction of the position along the (fixed) local gradient until
// |phi| <= newton_tol, then removal of the normal velocity component with
// the speed restored. Throws on gradient underflow or non-convergence.
ParticleState project_to_surface(const ParticleState& st, const SurfaceParams& p,
                                 const IntegratorSettings& s = {});

} // namespace qsphere

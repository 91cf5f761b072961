#pragma once

// Closed-form stationary points of the averaged flow on |L| = radius,
// their tangent-plane linearization, and the dual-route stability class.

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "qsphere/surface.hpp"
#include "qsphere/vec3.hpp"

namespace qsphere {

enum class Family { S1a, S1b, S1c, S2a, S2b, S2c, S3 };
enum class Stability { center, saddle, degenerate };

const char* to_string(Family f);
const char* to_string(Stability s);

// Q1 = e1 e2 - e2 e3 + e3 e1 and cyclic; all three positive iff the
// interior family exists, zeros are the atlas region boundaries.
std::array<double, 3> q_quantities(const Vec3& eps);

struct FixedPoint {
    Vec3 L0;
    Family family;
    Stability stability = Stability::degenerate;
    std::array<std::complex<double>, 2> eigenvalues{};
    std::array<Vec3, 2> tangent_basis{};       // orthonormal basis of the plane normal to L0
    std::array<std::array<double, 2>, 2> jac{}; // tangent-restricted Jacobian
    double energy = 0.0;
};

struct FixedPointInventory {
    Vec3 eps;
    double radius = 1.0;
    std::vector<FixedPoint> points;
    bool degenerate_parameters = false;
    std::vector<std::string> notes; // skipped families, degeneracy reports
};

struct StationarySettings {
    double fp_tol = 1e-10;         // residual gate for linearize, relative to radius^2 max|eps|
    double degeneracy_tol = 1e-9;  // relative floor for eigenvalues, products, Q quantities
};

// All stationary points on the momentum sphere: 6 axis points always,
// the three planar families when the matching eps product is positive,
// the 8 interior points when all Q are positive. Points come classified.
FixedPointInventory enumerate_fixed_points(const Vec3& eps, double radius = 1.0,
                                           const StationarySettings& st = {});

// Tangent-restricted 2x2 Jacobian of averaged_rhs at L0 and its eigenpair.
// Throws NotAFixedPointError when |averaged_rhs(L0)| exceeds the gate.
void linearize(FixedPoint& fp, const SurfaceParams& p, const StationarySettings& st = {});

// Eigenvalue class cross-checked against the closed-form inequality class;
// throws InconsistencyError when both are definite and disagree.
Stability classify_stability(const FixedPoint& fp, const SurfaceParams& p,
                             const StationarySettings& st = {});

// Topological fallback for degenerate (nilpotent) points: the sign pattern
// of H - H(L0) on a small circle around L0 on the momentum sphere.
// Returns center for a strict extremum, saddle for four alternations,
// degenerate otherwise.
Stability topological_class(const Vec3& L0, const SurfaceParams& p, double radius);

// representative with the first nonzero coordinate positive
Vec3 antipodal_representative(const Vec3& L, double tol = 0.0);

// #center - #saddle over the full sphere (degenerate points excluded)
int euler_index(const FixedPointInventory& inv);

} // namespace qsphere

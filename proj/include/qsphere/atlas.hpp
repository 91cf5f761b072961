#pragma once

// Parameter-space classification: which portrait type a given eps produces,
// 2-D sweeps over slices of eps space, and bisection refinement of the
// region boundaries (zeros of the Q quantities).

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "qsphere/vec3.hpp"

namespace qsphere {

struct TypeClass {
    std::string label;        // "I","II","III","IV","Boundary","Degenerate"
    bool near_boundary = false;
    double min_abs_q = 0.0;
};

struct AtlasSettings {
    // |Q| and |eps products| below boundary_tol * max|eps|^2 (and |eps_i|
    // below boundary_tol * max|eps|) count as zero
    double boundary_tol = 1e-12;
};

// Exact-zero overlaps resolve in the order IV, III, II, I.
TypeClass classify_epsilon(const Vec3& eps, const AtlasSettings& st = {});

struct SweepPlane {
    int fixed_axis = 2;       // eps component held constant
    double fixed_value = 0.04;
    std::array<double, 2> p1_range{-0.05, 0.05};
    std::array<double, 2> p2_range{-0.05, 0.05};
};

struct SweepSphere {
    double radius = 0.04;     // |eps| of the sampled sphere
};

struct AtlasNode {
    double p1 = 0.0, p2 = 0.0;
    Vec3 eps;
    TypeClass cls;
};

struct AtlasGrid {
    std::vector<AtlasNode> nodes; // row-major, p2 fastest
    std::size_t n1 = 0, n2 = 0;
    std::map<std::string, std::size_t> region_counts;
    std::vector<std::array<Vec3, 2>> boundary_brackets; // adjacent nodes with differing labels
};

AtlasGrid sweep_plane(const SweepPlane& plane, std::size_t n1, std::size_t n2,
                      const AtlasSettings& st = {});

// polar/azimuthal parameterization of the eps sphere: p1 = theta, p2 = phi
AtlasGrid sweep_sphere(const SweepSphere& sph, std::size_t n1, std::size_t n2,
                       const AtlasSettings& st = {});

// Bisection along the segment [a, b] whose endpoint labels differ; returns
// the midpoint of the final bracket. With smooth Q along the segment the
// result satisfies min_i |Q_i| at roundoff level.
Vec3 refine_boundary(const Vec3& a, const Vec3& b, int max_iters = 200,
                     const AtlasSettings& st = {});

} // namespace qsphere

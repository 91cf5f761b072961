#pragma once

// Independent checks that the reduced flow really is the coil average of
// the exact flow: a quadrature oracle over the unperturbed great circle,
// window averages of exact trajectories, and the deviation report.

#include <cstddef>
#include <vector>

#include "qsphere/averaged.hpp"
#include "qsphere/dynamics.hpp"
#include "qsphere/settings.hpp"
#include "qsphere/surface.hpp"
#include "qsphere/vec3.hpp"

namespace qsphere {

struct ValidationSettings {
    double frame_floor = 1e-6;   // (L1^2 + L2^2)/|L|^2 floor for the explicit frame
    std::size_t quadrature_n = 1024;
};

struct GreatCircleFrame {
    Vec3 e1, e2, e3;
};

// e1 = (0, L3, -L2)/s, e2 = (-(L2^2+L3^2), L1 L2, L1 L3)/(|L| s), e3 = L/|L|,
// s = sqrt(L2^2 + L3^2). Throws FrameSingularityError near the +-axis-1 cone.
GreatCircleFrame great_circle_frame(const Vec3& L, const ValidationSettings& vs = {});

// state on the unperturbed unit circle: x = cos(w t + theta) e1 + sin(...) e2,
// v = dx/dt, w = |L|; satisfies x cross v = L exactly
ParticleState great_circle_state(const Vec3& L, double theta, double t,
                                 const ValidationSettings& vs = {});

// Trapezoid average of exact_momentum_rhs over one circle period, each
// sample radially projected onto the perturbed surface with the velocity
// tangentialized. Near the axis-1 cone the computation runs in cyclically
// rotated coordinates and is rotated back.
Vec3 averaged_oracle_rhs(const Vec3& L, const SurfaceParams& p,
                         const ValidationSettings& vs = {});

struct CoilPoint {
    double t; // window center
    Vec3 L;   // window mean
};

// Means of L over consecutive full windows of length `window`, computed
// from the piecewise-linear interpolant of the samples.
std::vector<CoilPoint> coil_average(const std::vector<ReducedSample>& series, double window);

struct DeviationRow {
    double t;
    Vec3 L_exact; // coil-averaged exact momentum
    Vec3 L_avg;   // reduced-flow momentum
};

struct DeviationReport {
    std::vector<DeviationRow> series;
    double sup_norm = 0.0;
    double rms = 0.0;
    double eps_ratio = 0.0; // sup_norm / (max|eps| |L(0)|)
    double max_abs_phi = 0.0;
    double max_energy_drift = 0.0;
};

// Integrates the exact flow and the reduced flow from the same initial
// data and compares coil averages against the reduced trajectory.
DeviationReport compare_exact_vs_averaged(const ParticleState& initial, const SurfaceParams& p,
                                          double t_end, const IntegratorSettings& is = {},
                                          const ValidationSettings& vs = {});

} // namespace qsphere

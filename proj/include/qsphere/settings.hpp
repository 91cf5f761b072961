#pragma once

#include <cstddef>

namespace qsphere {

// Tolerances and step-control knobs shared by the integrators.
struct IntegratorSettings {
    double rtol = 1e-11;
    double atol = 1e-13;
    double init_step = 0.0;      // 0 = choose automatically
    double min_step = 1e-12;     // step-underflow guard
    double max_step = 0.0;       // 0 = unlimited

    double surface_tol = 1e-10;  // |phi| ceiling along trajectories
    double tangency_tol = 1e-10; // |v.grad| / (|v||grad|) ceiling
    double energy_tol = 1e-6;    // relative |v|^2 drift ceiling (diagnostic)
    double gradient_floor = 1e-8;
    double conservation_tol = 1e-8; // relative L^2 / H drift ceiling (averaged flow)
    int max_newton_iters = 20;
    double newton_tol = 1e-12;
};

struct TraceSettings {
    double seed_offset = 1e-5;     // initial displacement along eigenvector, relative to radius
    double capture_radius = 1e-3;  // termination distance, relative to radius
    double max_trace_time = 0.0;   // 0 = per-saddle budget from the eigenvalue
    std::size_t samples_per_edge = 512;
    bool allow_degenerate = true;  // tolerate Degenerate vertices in the inventory
};

} // namespace qsphere

#include "qsphere/dynamics.hpp"

#include <cmath>

#include "qsphere/errors.hpp"

namespace qsphere {

namespace {

// common multiplier v.phi''.v / |grad phi|^2
double lambda_factor(const ParticleState& st, const SurfaceParams& p, double gradient_floor) {
    Vec3 g = surface_gradient(st.x, p);
    double gn2 = norm2(g);
    if (gn2 < gradient_floor * gradient_floor)
        throw DegenerateGradientError("surface gradient below floor in the flow");
    return hessian_quadratic_form(st.x, st.v, p) / gn2;
}

} // namespace

Vec3 geodesic_rhs(const ParticleState& st, const SurfaceParams& p, double gradient_floor) {
    double lam = lambda_factor(st, p, gradient_floor);
    return -lam * surface_gradient(st.x, p);
}

Vec3 exact_momentum_rhs(const ParticleState& st, const SurfaceParams& p, double gradient_floor) {
    double lam = lambda_factor(st, p, gradient_floor);
    const Vec3& x = st.x;
    const Vec3& e = p.eps;
    Vec3 out;
    for (int i = 0; i < 3; ++i) {
        int j = (i + 1) % 3, k = (i + 2) % 3;
        out[i] = -4.0 * lam * x[j] * x[k] * (e[k] * x[k] * x[k] - e[j] * x[j] * x[j]);
    }
    return out;
}

Trajectory integrate_geodesic(const ParticleState& initial, const SurfaceParams& p,
                              double t_end, const IntegratorSettings& s) {
    check_params(p);
    Trajectory traj;

    StateVec<6> y{initial.x[0], initial.x[1], initial.x[2],
                  initial.v[0], initial.v[1], initial.v[2]};
    const double e0 = initial.v[0] * initial.v[0] + initial.v[1] * initial.v[1] +
                      initial.v[2] * initial.v[2];

    auto rhs = [&](double, const StateVec<6>& u, StateVec<6>& du) {
        ParticleState st{{u[0], u[1], u[2]}, {u[3], u[4], u[5]}};
        Vec3 acc = geodesic_rhs(st, p, s.gradient_floor);
        du[0] = u[3]; du[1] = u[4]; du[2] = u[5];
        du[3] = acc[0]; du[4] = acc[1]; du[5] = acc[2];
    };

    auto record = [&](double t, const StateVec<6>& u) {
        ParticleState st{{u[0], u[1], u[2]}, {u[3], u[4], u[5]}};
        traj.samples.push_back({t, st});
        traj.max_abs_phi = std::max(traj.max_abs_phi, std::fabs(surface_value(st.x, p)));
        if (e0 > 0.0) {
            double e = norm2(st.v);
            traj.max_energy_drift = std::max(traj.max_energy_drift, std::fabs(e / e0 - 1.0));
        }
    };

    record(0.0, y);

    auto on_accept = [&](double t, StateVec<6>& u, double) {
        ParticleState st{{u[0], u[1], u[2]}, {u[3], u[4], u[5]}};
        if (std::fabs(surface_value(st.x, p)) > 0.5 * s.surface_tol) {
            st = project_to_surface(st, p, s);
            ++traj.projections;
            u = {st.x[0], st.x[1], st.x[2], st.v[0], st.v[1], st.v[2]};
        }
        record(t, u);
        return StepAction::run;
    };

    traj.stats = integrate_adaptive<6>(rhs, y, 0.0, t_end, s, on_accept);
    return traj;
}

} // namespace qsphere

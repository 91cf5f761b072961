#include "qsphere/averaged.hpp"

#include <cmath>

#include "qsphere/errors.hpp"

namespace qsphere {

Vec3 averaged_rhs(const Vec3& L, const SurfaceParams& p) {
    double u = norm2(L);
    if (u == 0.0) return Vec3{0.0, 0.0, 0.0};
    const Vec3& e = p.eps;
    Vec3 out;
    for (int i = 0; i < 3; ++i) {
        int j = (i + 1) % 3, k = (i + 2) % 3;
        double bracket = (e[k] - e[j]) * L[i] * L[i] + e[k] * L[j] * L[j] - e[j] * L[k] * L[k];
        out[i] = 0.75 * (L[j] * L[k] / u) * bracket;
    }
    return out;
}

double hamiltonian(const Vec3& L, const SurfaceParams& p) {
    double u = norm2(L);
    if (u == 0.0) return 0.0;
    double s = 0.0;
    for (int i = 0; i < 3; ++i) {
        double d = L[i] * L[i] / u - 1.0;
        s += p.eps[i] * d * d;
    }
    return (3.0 / 16.0) * u * s;
}

Vec3 hamiltonian_gradient(const Vec3& L, const SurfaceParams& p) {
    double u = norm2(L);
    if (u == 0.0) return Vec3{0.0, 0.0, 0.0};
    double A = 0.0, B = 0.0;
    double s[3];
    for (int i = 0; i < 3; ++i) {
        s[i] = L[i] * L[i] / u;
        A += p.eps[i] * (s[i] - 1.0) * (s[i] - 1.0);
        B += p.eps[i] * s[i] * (s[i] - 1.0);
    }
    Vec3 g;
    for (int k = 0; k < 3; ++k)
        g[k] = (3.0 / 8.0) * L[k] * (A - 2.0 * B + 2.0 * p.eps[k] * (s[k] - 1.0));
    return g;
}

Vec3 bracket_rhs(const Vec3& L, const SurfaceParams& p) {
    return cross(hamiltonian_gradient(L, p), L);
}

std::array<std::array<double, 3>, 3> averaged_jacobian(const Vec3& L, const SurfaceParams& p) {
    double u = norm2(L);
    const Vec3& e = p.eps;
    std::array<std::array<double, 3>, 3> J{};
    if (u == 0.0) return J;
    for (int i = 0; i < 3; ++i) {
        int j = (i + 1) % 3, k = (i + 2) % 3;
        double bracket = (e[k] - e[j]) * L[i] * L[i] + e[k] * L[j] * L[j] - e[j] * L[k] * L[k];
        double db[3] = {0.0, 0.0, 0.0};
        db[i] = 2.0 * (e[k] - e[j]) * L[i];
        db[j] = 2.0 * e[k] * L[j];
        db[k] = -2.0 * e[j] * L[k];
        for (int m = 0; m < 3; ++m) {
            double dpre = 0.0;
            if (m == j) dpre += L[k];
            if (m == k) dpre += L[j];
            J[i][m] = 0.75 * (dpre * bracket / u + (L[j] * L[k] / u) * db[m] -
                              2.0 * L[m] * L[j] * L[k] * bracket / (u * u));
        }
    }
    return J;
}

ReducedTrajectory integrate_averaged(const Vec3& L0, const SurfaceParams& p, double t_end,
                                     const IntegratorSettings& s) {
    check_params(p);
    double r2 = norm2(L0);
    if (r2 == 0.0) throw ZeroMomentumError("zero initial angular momentum");
    const double r = std::sqrt(r2);
    const double h0 = hamiltonian(L0, p);
    const double h_scale = std::fabs(h0) > 0.0 ? std::fabs(h0) : (3.0 / 16.0) * r2;

    ReducedTrajectory traj;
    StateVec<3> y{L0[0], L0[1], L0[2]};

    auto rhs = [&](double, const StateVec<3>& u, StateVec<3>& du) {
        Vec3 f = averaged_rhs(Vec3{u[0], u[1], u[2]}, p);
        du = {f[0], f[1], f[2]};
    };

    traj.samples.push_back({0.0, L0});

    auto on_accept = [&](double t, StateVec<3>& u, double) {
        Vec3 L{u[0], u[1], u[2]};
        double drift = std::fabs(norm2(L) / r2 - 1.0);
        traj.max_l2_drift = std::max(traj.max_l2_drift, drift);
        if (drift > 0.0) {
            L *= r / norm(L);
            u = {L[0], L[1], L[2]};
        }
        traj.max_h_drift = std::max(traj.max_h_drift,
                                    std::fabs(hamiltonian(L, p) - h0) / h_scale);
        traj.samples.push_back({t, L});
        return StepAction::run;
    };

    traj.stats = integrate_adaptive<3>(rhs, y, 0.0, t_end, s, on_accept);
    return traj;
}

} // namespace qsphere

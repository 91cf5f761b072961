#include "qsphere/surface.hpp"

#include <cmath>
#include <cstdio>

#include "qsphere/errors.hpp"

namespace qsphere {

void check_params(const SurfaceParams& p) {
    for (int i = 0; i < 3; ++i) {
        if (!(std::fabs(p.eps[i]) <= p.eps_ceiling)) {
            char buf[128];
            std::snprintf(buf, sizeof buf,
                          "eps[%d] = %g outside the perturbative ceiling %g",
                          i, p.eps[i], p.eps_ceiling);
            throw ConfigError(buf);
        }
    }
}

double surface_value(const Vec3& x, const SurfaceParams& p) {
    double s = -1.0;
    for (int i = 0; i < 3; ++i) {
        double q = x[i] * x[i];
        s += q + p.eps[i] * q * q;
    }
    return s;
}

Vec3 surface_gradient(const Vec3& x, const SurfaceParams& p) {
    Vec3 g;
    for (int i = 0; i < 3; ++i)
        g[i] = 2.0 * x[i] + 4.0 * p.eps[i] * x[i] * x[i] * x[i];
    return g;
}

double hessian_quadratic_form(const Vec3& x, const Vec3& v, const SurfaceParams& p) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
        s += (2.0 + 12.0 * p.eps[i] * x[i] * x[i]) * v[i] * v[i];
    return s;
}

double ray_scale(const Vec3& dir_hat, const SurfaceParams& p) {
    double k = 0.0;
    for (int i = 0; i < 3; ++i) {
        double q = dir_hat[i] * dir_hat[i];
        k += p.eps[i] * q * q;
    }
    // phi(rho d) = rho^2 + k rho^4 - 1; the stable root of the quadratic in rho^2
    double disc = 1.0 + 4.0 * k;
    if (disc <= 0.0)
        throw NumericalError("ray misses the surface: 1 + 4 sum eps_i d_i^4 <= 0");
    double rho2 = 2.0 / (1.0 + std::sqrt(disc));
    return std::sqrt(rho2);
}

ParticleState make_state(const Vec3& direction, const Vec3& velocity, const SurfaceParams& p,
                         const IntegratorSettings& s) {
    check_params(p);
    double dn = norm(direction);
    if (dn == 0.0) throw ConfigError("direction must be nonzero");
    Vec3 d = direction / dn;

    ParticleState st;
    st.x = ray_scale(d, p) * d;

    Vec3 g = surface_gradient(st.x, p);
    double gn = norm(g);
    if (gn < s.gradient_floor)
        throw DegenerateGradientError("surface gradient below floor at the constructed point");
    Vec3 n = g / gn;
    double speed = norm(velocity);
    Vec3 vt = velocity - dot(velocity, n) * n;
    double vtn = norm(vt);
    if (speed > 0.0 && vtn == 0.0)
        throw ConfigError("requested velocity is normal to the surface, no tangent part");
    st.v = (speed > 0.0) ? vt * (speed / vtn) : Vec3{0.0, 0.0, 0.0};
    return st;
}

ParticleState project_to_surface(const ParticleState& st, const SurfaceParams& p,
                                 const IntegratorSettings& s) {
    Vec3 g = surface_gradient(st.x, p);
    double gn2 = norm2(g);
    if (std::sqrt(gn2) < s.gradient_floor)
        throw DegenerateGradientError("surface gradient below floor during projection");
    Vec3 n = g / std::sqrt(gn2);

    // 1-D Newton for phi(x - a n) = 0 in the fixed direction n
    double a = 0.0;
    Vec3 x = st.x;
    double phi = surface_value(x, p);
    int it = 0;
    while (std::fabs(phi) > s.newton_tol) {
        if (++it > s.max_newton_iters)
            throw NoConvergenceError("surface projection exceeded max Newton iterations");
        double slope = -dot(surface_gradient(x, p), n);
        if (std::fabs(slope) < s.gradient_floor)
            throw DegenerateGradientError("projection slope below floor");
        a -= phi / slope;
        x = st.x - a * n;
        phi = surface_value(x, p);
    }

    Vec3 gp = surface_gradient(x, p);
    double gpn = norm(gp);
    if (gpn < s.gradient_floor)
        throw DegenerateGradientError("surface gradient below floor after projection");
    Vec3 np = gp / gpn;
    double speed = norm(st.v);
    Vec3 vt = st.v - dot(st.v, np) * np;
    double vtn = norm(vt);
    ParticleState out;
    out.x = x;
    out.v = (speed > 0.0 && vtn > 0.0) ? vt * (speed / vtn) : vt;
    return out;
}

} // namespace qsphere

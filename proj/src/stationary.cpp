#include "qsphere/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "qsphere/averaged.hpp"
#include "qsphere/errors.hpp"

namespace qsphere {

const char* to_string(Family f) {
    switch (f) {
        case Family::S1a: return "S1a";
        case Family::S1b: return "S1b";
        case Family::S1c: return "S1c";
        case Family::S2a: return "S2a";
        case Family::S2b: return "S2b";
        case Family::S2c: return "S2c";
        case Family::S3: return "S3";
    }
    return "?";
}

const char* to_string(Stability s) {
    switch (s) {
        case Stability::center: return "center";
        case Stability::saddle: return "saddle";
        case Stability::degenerate: return "degenerate";
    }
    return "?";
}

std::array<double, 3> q_quantities(const Vec3& eps) {
    double p12 = eps[0] * eps[1], p23 = eps[1] * eps[2], p31 = eps[2] * eps[0];
    return {p12 - p23 + p31, p12 + p23 - p31, -p12 + p23 + p31};
}

namespace {

// orthonormal tangent basis at L0 on the sphere, deterministic
std::array<Vec3, 2> tangent_basis_at(const Vec3& L0) {
    Vec3 n = normalized(L0);
    int least = 0;
    for (int i = 1; i < 3; ++i)
        if (std::fabs(n[i]) < std::fabs(n[least])) least = i;
    Vec3 axis{0.0, 0.0, 0.0};
    axis[least] = 1.0;
    Vec3 u = normalized(cross(n, axis));
    Vec3 w = cross(n, u);
    return {u, w};
}

// inequality-route class per family; degenerate when the classifying
// quantity sits within the relative tolerance of zero
Stability inequality_class(Family fam, const Vec3& eps, const StationarySettings& st) {
    double scale = std::max({std::fabs(eps[0]), std::fabs(eps[1]), std::fabs(eps[2])});
    double tol = st.degeneracy_tol * scale * scale;
    auto from_product = [&](double prod) {
        if (std::fabs(prod) <= tol) return Stability::degenerate;
        return prod > 0.0 ? Stability::center : Stability::saddle;
    };
    auto q = q_quantities(eps);
    auto from_q = [&](double qv) {
        if (std::fabs(qv) <= tol) return Stability::degenerate;
        return qv < 0.0 ? Stability::center : Stability::saddle;
    };
    switch (fam) {
        // axis i is a center iff the product of the other two eps is positive
        case Family::S1a: return from_product(eps[0] * eps[1]); // L3 axis
        case Family::S1b: return from_product(eps[2] * eps[0]); // L2 axis
        case Family::S1c: return from_product(eps[1] * eps[2]); // L1 axis
        case Family::S2a: return from_q(q[0]);
        case Family::S2b: return from_q(q[1]);
        case Family::S2c: return from_q(q[2]);
        case Family::S3: return Stability::center;
    }
    return Stability::degenerate;
}

} // namespace

void linearize(FixedPoint& fp, const SurfaceParams& p, const StationarySettings& st) {
    double r = norm(fp.L0);
    double scale = std::max({std::fabs(p.eps[0]), std::fabs(p.eps[1]), std::fabs(p.eps[2])});
    double res = norm(averaged_rhs(fp.L0, p));
    if (res > st.fp_tol * std::max(r * r * scale, 1e-300))
        throw NotAFixedPointError("residual of averaged_rhs too large at the requested point");

    auto J3 = averaged_jacobian(fp.L0, p);
    fp.tangent_basis = tangent_basis_at(fp.L0);
    const auto& [u, w] = fp.tangent_basis;

    auto apply = [&](const Vec3& v) {
        Vec3 out;
        for (int i = 0; i < 3; ++i)
            out[i] = J3[i][0] * v[0] + J3[i][1] * v[1] + J3[i][2] * v[2];
        return out;
    };
    Vec3 Ju = apply(u), Jw = apply(w);
    fp.jac = {{{dot(u, Ju), dot(u, Jw)}, {dot(w, Ju), dot(w, Jw)}}};

    double tr = fp.jac[0][0] + fp.jac[1][1];
    double det = fp.jac[0][0] * fp.jac[1][1] - fp.jac[0][1] * fp.jac[1][0];
    double disc = tr * tr - 4.0 * det;
    if (disc >= 0.0) {
        double s = std::sqrt(disc);
        fp.eigenvalues = {std::complex<double>(0.5 * (tr + s), 0.0),
                          std::complex<double>(0.5 * (tr - s), 0.0)};
    } else {
        double s = std::sqrt(-disc);
        fp.eigenvalues = {std::complex<double>(0.5 * tr, 0.5 * s),
                          std::complex<double>(0.5 * tr, -0.5 * s)};
    }
    fp.energy = hamiltonian(fp.L0, p);
}

Stability classify_stability(const FixedPoint& fp, const SurfaceParams& p,
                             const StationarySettings& st) {
    double r = norm(fp.L0);
    double scale = std::max({std::fabs(p.eps[0]), std::fabs(p.eps[1]), std::fabs(p.eps[2])});
    // natural eigenvalue magnitude is r * eps; tolerance relative to it
    double ev_tol = st.degeneracy_tol * std::max(r * scale, 1e-300);

    const auto& ev = fp.eigenvalues[0];
    Stability eig_class;
    if (std::abs(ev) <= ev_tol)
        eig_class = Stability::degenerate;
    else if (std::fabs(ev.real()) <= ev_tol && std::fabs(ev.imag()) > ev_tol)
        eig_class = Stability::center;
    else if (std::fabs(ev.imag()) <= ev_tol && std::fabs(ev.real()) > ev_tol)
        eig_class = Stability::saddle;
    else
        eig_class = Stability::degenerate;

    Stability ineq_class = inequality_class(fp.family, p.eps, st);
    if (eig_class != Stability::degenerate && ineq_class != Stability::degenerate &&
        eig_class != ineq_class) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "stability routes disagree at %s (%.6g, %.6g, %.6g): eigen %s vs inequality %s",
                      to_string(fp.family), fp.L0[0], fp.L0[1], fp.L0[2],
                      to_string(eig_class), to_string(ineq_class));
        throw InconsistencyError(buf);
    }
    return eig_class != Stability::degenerate ? eig_class : ineq_class;
}

FixedPointInventory enumerate_fixed_points(const Vec3& eps, double radius,
                                           const StationarySettings& st) {
    if (!(radius > 0.0)) throw ConfigError("radius must be positive");
    SurfaceParams p{eps};
    check_params(p);

    FixedPointInventory inv;
    inv.eps = eps;
    inv.radius = radius;

    double scale = std::max({std::fabs(eps[0]), std::fabs(eps[1]), std::fabs(eps[2])});
    double tol2 = st.degeneracy_tol * scale * scale;
    auto q = q_quantities(eps);

    for (int i = 0; i < 3; ++i)
        if (std::fabs(eps[i]) <= st.degeneracy_tol * scale) inv.degenerate_parameters = true;
    for (int i = 0; i < 3; ++i)
        if (std::fabs(q[i]) <= tol2) inv.degenerate_parameters = true;

    auto push = [&](const Vec3& L0, Family fam) {
        FixedPoint fp;
        fp.L0 = L0;
        fp.family = fam;
        linearize(fp, p, st);
        fp.stability = classify_stability(fp, p, st);
        inv.points.push_back(fp);
    };

    // axis points, family letter fixed by the nonzero component: a = L3 axis
    for (double s : {+1.0, -1.0}) push(Vec3{0.0, 0.0, s * radius}, Family::S1a);
    for (double s : {+1.0, -1.0}) push(Vec3{0.0, s * radius, 0.0}, Family::S1b);
    for (double s : {+1.0, -1.0}) push(Vec3{s * radius, 0.0, 0.0}, Family::S1c);

    // planar families: zero component i, eps_k L_j^2 = eps_j L_k^2
    struct PlanarCase { Family fam; int i, j, k; };
    const PlanarCase planar[3] = {{Family::S2a, 0, 1, 2},
                                  {Family::S2b, 1, 2, 0},
                                  {Family::S2c, 2, 0, 1}};
    for (const auto& pc : planar) {
        double prod = eps[pc.j] * eps[pc.k];
        if (std::fabs(prod) <= tol2) {
            char buf[96];
            std::snprintf(buf, sizeof buf, "%s skipped: eps product within degeneracy tolerance",
                          to_string(pc.fam));
            inv.notes.push_back(buf);
            continue;
        }
        if (prod < 0.0) continue;
        double denom = eps[pc.j] + eps[pc.k];
        double lj = radius * std::sqrt(eps[pc.j] / denom);
        double lk = radius * std::sqrt(eps[pc.k] / denom);
        for (double sj : {+1.0, -1.0})
            for (double sk : {+1.0, -1.0}) {
                Vec3 L0{0.0, 0.0, 0.0};
                L0[pc.j] = sj * lj;
                L0[pc.k] = sk * lk;
                push(L0, pc.fam);
            }
    }

    // interior family: L_i^2 proportional to Q_i
    double qmin = std::min({q[0], q[1], q[2]});
    if (qmin > 0.0) {
        if (qmin <= tol2) {
            inv.notes.push_back("S3 skipped: some Q within degeneracy tolerance");
        } else {
            double qsum = q[0] + q[1] + q[2];
            Vec3 base{radius * std::sqrt(q[0] / qsum), radius * std::sqrt(q[1] / qsum),
                      radius * std::sqrt(q[2] / qsum)};
            for (double s1 : {+1.0, -1.0})
                for (double s2 : {+1.0, -1.0})
                    for (double s3 : {+1.0, -1.0})
                        push(Vec3{s1 * base[0], s2 * base[1], s3 * base[2]}, Family::S3);
        }
    } else if (std::fabs(qmin) <= tol2) {
        inv.notes.push_back("S3 skipped: some Q within degeneracy tolerance");
    }

    return inv;
}

Stability topological_class(const Vec3& L0, const SurfaceParams& p, double radius) {
    auto basis = tangent_basis_at(L0);
    double h0 = hamiltonian(L0, p);
    const int n = 64;
    const double rho = 1e-2 * radius;

    double dh[n];
    double dh_max = 0.0;
    for (int m = 0; m < n; ++m) {
        double a = 2.0 * M_PI * m / n;
        Vec3 L = L0 + rho * std::cos(a) * basis[0] + rho * std::sin(a) * basis[1];
        L *= radius / norm(L);
        dh[m] = hamiltonian(L, p) - h0;
        dh_max = std::max(dh_max, std::fabs(dh[m]));
    }
    if (dh_max == 0.0) return Stability::degenerate;

    double zero_band = 1e-3 * dh_max;
    int sign_changes = 0;
    int prev = 0;
    int first = 0;
    for (int m = 0; m < n; ++m) {
        // directions where H is flat to this order carry no sign information
        if (std::fabs(dh[m]) <= zero_band) continue;
        int sgn = dh[m] > 0.0 ? 1 : -1;
        if (prev == 0) { prev = sgn; first = sgn; continue; }
        if (sgn != prev) { ++sign_changes; prev = sgn; }
    }
    if (prev == 0) return Stability::degenerate;
    if (prev != first) ++sign_changes;

    if (sign_changes == 0) return Stability::center;
    if (sign_changes == 4) return Stability::saddle;
    return Stability::degenerate;
}

Vec3 antipodal_representative(const Vec3& L, double tol) {
    for (int i = 0; i < 3; ++i) {
        if (std::fabs(L[i]) > tol) {
            return L[i] > 0.0 ? L : -L;
        }
    }
    return L;
}

int euler_index(const FixedPointInventory& inv) {
    int c = 0, s = 0;
    for (const auto& fp : inv.points) {
        if (fp.stability == Stability::center) ++c;
        else if (fp.stability == Stability::saddle) ++s;
    }
    return c - s;
}

} // namespace qsphere

#include "qsphere/validation.hpp"

#include <cmath>

#include "qsphere/errors.hpp"

namespace qsphere {

namespace {

// cyclic left rotation by k: out[i] = v[(i+k) % 3]; a proper rotation, and
// the flow is equivariant under applying it to x, L and eps together
Vec3 cyc(const Vec3& v, int k) {
    return Vec3{v[k % 3], v[(1 + k) % 3], v[(2 + k) % 3]};
}

} // namespace

GreatCircleFrame great_circle_frame(const Vec3& L, const ValidationSettings& vs) {
    double l2 = norm2(L);
    if (l2 == 0.0) throw ZeroMomentumError("great-circle frame needs nonzero L");
    double s2 = L[1] * L[1] + L[2] * L[2];
    if (s2 <= vs.frame_floor * l2)
        throw FrameSingularityError("L too close to the axis-1 direction for the explicit frame");
    double s = std::sqrt(s2);
    double l = std::sqrt(l2);
    GreatCircleFrame f;
    f.e1 = Vec3{0.0, L[2], -L[1]} / s;
    f.e2 = Vec3{-s2, L[0] * L[1], L[0] * L[2]} / (l * s);
    f.e3 = L / l;
    return f;
}

ParticleState great_circle_state(const Vec3& L, double theta, double t,
                                 const ValidationSettings& vs) {
    GreatCircleFrame f = great_circle_frame(L, vs);
    double w = norm(L);
    double a = w * t + theta;
    ParticleState st;
    st.x = std::cos(a) * f.e1 + std::sin(a) * f.e2;
    st.v = w * (-std::sin(a) * f.e1 + std::cos(a) * f.e2);
    return st;
}

Vec3 averaged_oracle_rhs(const Vec3& L, const SurfaceParams& p, const ValidationSettings& vs) {
    double l2 = norm2(L);
    if (l2 == 0.0) throw ZeroMomentumError("oracle needs nonzero L");

    // rotate coordinates so the circle normal is far from the frame's
    // singular axis; some rotation always reaches s^2 >= 2/3 |L|^2
    int best = 0;
    double best_s2 = -1.0;
    for (int k = 0; k < 3; ++k) {
        Vec3 Lr = cyc(L, k);
        double s2 = Lr[1] * Lr[1] + Lr[2] * Lr[2];
        if (s2 > best_s2) { best_s2 = s2; best = k; }
    }
    Vec3 Lr = cyc(L, best);
    SurfaceParams pr{cyc(p.eps, best), p.eps_ceiling};

    GreatCircleFrame f = great_circle_frame(Lr, vs);
    const double w = std::sqrt(l2);
    const std::size_t n = vs.quadrature_n;

    Vec3 sum{0.0, 0.0, 0.0};
    for (std::size_t m = 0; m < n; ++m) {
        double a = 2.0 * M_PI * static_cast<double>(m) / static_cast<double>(n);
        Vec3 xhat = std::cos(a) * f.e1 + std::sin(a) * f.e2;
        Vec3 vhat = w * (-std::sin(a) * f.e1 + std::cos(a) * f.e2);

        double rho = ray_scale(xhat, pr);
        Vec3 x = rho * xhat;
        Vec3 g = surface_gradient(x, pr);
        Vec3 nrm = g / norm(g);
        Vec3 v = vhat - dot(vhat, nrm) * nrm;
        v *= w / norm(v);

        sum += exact_momentum_rhs({x, v}, pr);
    }
    return cyc(sum / static_cast<double>(n), (3 - best) % 3);
}

std::vector<CoilPoint> coil_average(const std::vector<ReducedSample>& series, double window) {
    if (window <= 0.0) throw ConfigError("coil window must be positive");
    if (series.size() < 2)
        throw TrajectoryTooShortError("need at least two samples for coil averaging");
    double t0 = series.front().t;
    double t1 = series.back().t;
    std::size_t windows = static_cast<std::size_t>(std::floor((t1 - t0) / window));
    if (windows == 0)
        throw TrajectoryTooShortError("trajectory shorter than one coil window");

    std::vector<CoilPoint> out;
    out.reserve(windows);
    std::size_t idx = 0;
    for (std::size_t m = 0; m < windows; ++m) {
        double a = t0 + window * static_cast<double>(m);
        double b = a + window;
        Vec3 acc{0.0, 0.0, 0.0};
        while (idx + 1 < series.size() && series[idx + 1].t <= a) ++idx;
        std::size_t i = idx;
        // piecewise-linear integral of L over [a, b]
        while (i + 1 < series.size() && series[i].t < b) {
            double sa = std::max(series[i].t, a);
            double sb = std::min(series[i + 1].t, b);
            if (sb > sa) {
                double seg = series[i + 1].t - series[i].t;
                auto value_at = [&](double t) {
                    double wgt = (seg > 0.0) ? (t - series[i].t) / seg : 0.0;
                    return series[i].L + wgt * (series[i + 1].L - series[i].L);
                };
                acc += 0.5 * (sb - sa) * (value_at(sa) + value_at(sb));
            }
            ++i;
        }
        out.push_back({a + 0.5 * window, acc / window});
    }
    return out;
}

DeviationReport compare_exact_vs_averaged(const ParticleState& initial, const SurfaceParams& p,
                                          double t_end, const IntegratorSettings& is,
                                          const ValidationSettings&) {
    Vec3 L0 = angular_momentum(initial);
    double l0 = norm(L0);
    if (l0 == 0.0) throw ZeroMomentumError("initial state carries no angular momentum");
    double window = 2.0 * M_PI / l0;
    if (t_end < window)
        throw TrajectoryTooShortError("t_end shorter than one coil window");

    Trajectory exact = integrate_geodesic(initial, p, t_end, is);
    std::vector<ReducedSample> lser;
    lser.reserve(exact.samples.size());
    for (const auto& s : exact.samples)
        lser.push_back({s.t, angular_momentum(s.state)});
    std::vector<CoilPoint> coils = coil_average(lser, window);

    ReducedTrajectory reduced = integrate_averaged(L0, p, t_end, is);

    DeviationReport rep;
    rep.max_abs_phi = exact.max_abs_phi;
    rep.max_energy_drift = exact.max_energy_drift;
    rep.series.reserve(coils.size());

    std::size_t j = 0;
    double acc2 = 0.0;
    for (const auto& c : coils) {
        while (j + 1 < reduced.samples.size() && reduced.samples[j + 1].t < c.t) ++j;
        Vec3 Lavg;
        if (j + 1 < reduced.samples.size()) {
            const auto& s0 = reduced.samples[j];
            const auto& s1 = reduced.samples[j + 1];
            double seg = s1.t - s0.t;
            double wgt = (seg > 0.0) ? (c.t - s0.t) / seg : 0.0;
            Lavg = s0.L + wgt * (s1.L - s0.L);
        } else {
            Lavg = reduced.samples.back().L;
        }
        rep.series.push_back({c.t, c.L, Lavg});
        double d = norm(c.L - Lavg);
        rep.sup_norm = std::max(rep.sup_norm, d);
        acc2 += d * d;
    }
    rep.rms = std::sqrt(acc2 / static_cast<double>(coils.size()));
    double scale = std::max({std::fabs(p.eps[0]), std::fabs(p.eps[1]), std::fabs(p.eps[2])});
    rep.eps_ratio = (scale > 0.0 && l0 > 0.0) ? rep.sup_norm / (scale * l0) : 0.0;
    return rep;
}

} // namespace qsphere

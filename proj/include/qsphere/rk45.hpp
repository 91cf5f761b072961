#pragma once

// Embedded Dormand-Prince 5(4) pair with PI-free standard step control.
// The state is a fixed-size array; the driver reports every accepted step
// to a callback which may adjust the state (constraint projection,
// norm renormalization) and may stop the integration early.

#include <array>
#include <cmath>
#include <cstddef>

#include "qsphere/errors.hpp"
#include "qsphere/settings.hpp"

namespace qsphere {

template <std::size_t N>
using StateVec = std::array<double, N>;

struct StepStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t rhs_evals = 0;
};

enum class StepAction { run, stop };

namespace dopri {

inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                        a53 = 64448.0 / 6561, a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b - bhat, for the embedded 4th order error estimate
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

} // namespace dopri

// One DP5(4) step from (t, y) with step h. Fills ynew and the embedded
// error estimate; k1 must hold f(t, y) on entry (FSAL: k7 is f(t+h, ynew)).
template <std::size_t N, class RHS>
void dopri5_step(RHS&& f, double t, const StateVec<N>& y, double h,
                 const StateVec<N>& k1, StateVec<N>& ynew, StateVec<N>& k7,
                 StateVec<N>& err) {
    using namespace dopri;
    StateVec<N> k2, k3, k4, k5, k6, tmp;

    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * a21 * k1[i];
    f(t + c2 * h, tmp, k2);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    f(t + c3 * h, tmp, k3);
    for (std::size_t i = 0; i < N; ++i)
        tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    f(t + c4 * h, tmp, k4);
    for (std::size_t i = 0; i < N; ++i)
        tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    f(t + c5 * h, tmp, k5);
    for (std::size_t i = 0; i < N; ++i)
        tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    f(t + h, tmp, k6);
    for (std::size_t i = 0; i < N; ++i)
        ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    f(t + h, ynew, k7);
    for (std::size_t i = 0; i < N; ++i)
        err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
}

// Hairer-style starting step guess.
template <std::size_t N, class RHS>
double initial_step(RHS&& f, double t0, const StateVec<N>& y0, const StateVec<N>& f0,
                    double t1, double rtol, double atol) {
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        double sk = atol + rtol * std::fabs(y0[i]);
        d0 += (y0[i] / sk) * (y0[i] / sk);
        d1 += (f0[i] / sk) * (f0[i] / sk);
    }
    d0 = std::sqrt(d0 / N);
    d1 = std::sqrt(d1 / N);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, std::fabs(t1 - t0));

    StateVec<N> y1, f1;
    for (std::size_t i = 0; i < N; ++i) y1[i] = y0[i] + h0 * f0[i];
    f(t0 + h0, y1, f1);
    double d2 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        double sk = atol + rtol * std::fabs(y0[i]);
        double df = (f1[i] - f0[i]) / sk;
        d2 += df * df;
    }
    d2 = std::sqrt(d2 / N) / h0;

    double dm = std::max(d1, d2);
    double h1 = (dm <= 1e-15) ? std::max(1e-6, h0 * 1e-3)
                              : std::pow(0.01 / dm, 1.0 / 5.0);
    return std::min({100.0 * h0, h1, std::fabs(t1 - t0)});
}

// Integrate y' = f(t, y) from t0 to t1 (t1 may be < t0). OnAccept is called
// after every accepted step as on_accept(t, y, h_used) and may modify y in
// place; returning StepAction::stop ends the run (final state = current y).
template <std::size_t N, class RHS, class OnAccept>
StepStats integrate_adaptive(RHS&& f, StateVec<N>& y, double t0, double t1,
                             const IntegratorSettings& s, OnAccept&& on_accept) {
    StepStats stats;
    if (t1 == t0) return stats;
    const double dir = (t1 > t0) ? 1.0 : -1.0;

    StateVec<N> k1, k7, ynew, err;
    f(t0, y, k1);
    stats.rhs_evals = 1;

    double h = s.init_step;
    if (h <= 0.0) {
        h = initial_step<N>(f, t0, y, k1, t1, s.rtol, s.atol);
        stats.rhs_evals += 2;
    }
    if (s.max_step > 0.0) h = std::min(h, s.max_step);

    double t = t0;
    while (dir * (t1 - t) > 0.0) {
        double h_left = std::fabs(t1 - t);
        bool last = (h >= h_left);
        double h_try = last ? h_left : h;

        dopri5_step<N>(f, t, y, dir * h_try, k1, ynew, k7, err);
        stats.rhs_evals += 6;

        double en = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            double sk = s.atol + s.rtol * std::max(std::fabs(y[i]), std::fabs(ynew[i]));
            double q = err[i] / sk;
            en += q * q;
        }
        en = std::sqrt(en / N);

        if (en <= 1.0) {
            t = last ? t1 : t + dir * h_try;
            y = ynew;
            k1 = k7;
            ++stats.accepted;
            double fac = 0.9 * std::pow(std::max(en, 1e-10), -0.2);
            h = h_try * std::min(5.0, std::max(0.2, fac));
            if (s.max_step > 0.0) h = std::min(h, s.max_step);
            if (on_accept(t, y, dir * h_try) == StepAction::stop) break;
            // a projection inside on_accept invalidates the FSAL slope
            f(t, y, k1);
            ++stats.rhs_evals;
        } else {
            ++stats.rejected;
            double fac = 0.9 * std::pow(en, -0.2);
            h = h_try * std::min(1.0, std::max(0.1, fac));
        }
        if (h < s.min_step)
            throw StepUnderflowError("adaptive step fell below min_step");
    }
    return stats;
}

} // namespace qsphere

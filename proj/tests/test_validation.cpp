#include <doctest.h>

#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "qsphere/averaged.hpp"
#include "qsphere/dynamics.hpp"
#include "qsphere/errors.hpp"
#include "qsphere/surface.hpp"
#include "qsphere/validation.hpp"

using namespace qsphere;

namespace {

const SurfaceParams kRef{Vec3{0.02, 0.03, 0.04}};

double max_eps(const SurfaceParams& p) {
    return std::max({std::fabs(p.eps[0]), std::fabs(p.eps[1]), std::fabs(p.eps[2])});
}

} // namespace

TEST_CASE("frame at the third axis comes out in closed form") {
    GreatCircleFrame f = great_circle_frame(Vec3{0.0, 0.0, 1.0});
    CHECK(f.e1 == Vec3{0.0, 1.0, 0.0});
    CHECK(f.e2 == Vec3{-1.0, 0.0, 0.0});
    CHECK(f.e3 == Vec3{0.0, 0.0, 1.0});
}

TEST_CASE("frames are orthonormal and right-handed for generic momenta") {
    SplitMix64 g(61);
    for (int trial = 0; trial < 200; ++trial) {
        Vec3 L = testutil::momentum_vec(g, 0.5, 2.0);
        if (L[1] * L[1] + L[2] * L[2] < 1e-4 * norm2(L)) continue;
        GreatCircleFrame f = great_circle_frame(L);
        CHECK(std::fabs(norm(f.e1) - 1.0) <= 1e-14);
        CHECK(std::fabs(norm(f.e2) - 1.0) <= 1e-14);
        CHECK(std::fabs(norm(f.e3) - 1.0) <= 1e-14);
        CHECK(std::fabs(dot(f.e1, f.e2)) <= 1e-14);
        CHECK(std::fabs(dot(f.e1, f.e3)) <= 1e-14);
        CHECK(std::fabs(dot(f.e2, f.e3)) <= 1e-14);
        CHECK(max_abs_diff(cross(f.e1, f.e2), f.e3) <= 1e-14);

        double theta = 6.28 * g.uniform();
        double t = 10.0 * g.uniform();
        ParticleState st = great_circle_state(L, theta, t);
        double w = norm(L);
        CHECK(std::fabs(norm(st.x) - 1.0) <= 1e-13);
        CHECK(std::fabs(dot(st.x, st.v)) <= 1e-13 * std::max(1.0, w));
        CHECK(max_abs_diff(cross(st.x, st.v), L) <= 1e-13 * std::max(1.0, w));
    }
}

TEST_CASE("the explicit frame refuses momenta on the first axis") {
    CHECK_THROWS_AS(great_circle_frame(Vec3{1.0, 1e-9, 0.0}), FrameSingularityError);
    CHECK_THROWS_AS(great_circle_frame(Vec3{0.0, 0.0, 0.0}), ZeroMomentumError);
    CHECK_THROWS_AS(averaged_oracle_rhs(Vec3{0.0, 0.0, 0.0}, kRef), ZeroMomentumError);
}

TEST_CASE("the quadrature oracle vanishes on the round sphere") {
    SurfaceParams flat{Vec3{0.0, 0.0, 0.0}};
    Vec3 o = averaged_oracle_rhs(Vec3{0.4, -0.7, 0.5}, flat);
    CHECK(norm(o) <= 1e-14);
}

TEST_CASE("the oracle vanishes at axis coils by symmetry") {
    CHECK(norm(averaged_oracle_rhs(Vec3{0.0, 0.0, 1.0}, kRef)) <= 1e-12);
    CHECK(norm(averaged_oracle_rhs(Vec3{0.0, 1.0, 0.0}, kRef)) <= 1e-12);
    // the internal rotation makes the frame-singular axis usable too
    CHECK(norm(averaged_oracle_rhs(Vec3{1.0, 0.0, 0.0}, kRef)) <= 1e-12);
}

TEST_CASE("the oracle matches the reduced field to first order") {
    const Vec3 dirs[] = {Vec3{0.3, 0.8, 0.52}, Vec3{-0.6, 0.5, 0.62}, Vec3{0.45, -0.7, 0.55}};
    for (const Vec3& L : dirs) {
        Vec3 avg = averaged_rhs(L, kRef);
        Vec3 orc = averaged_oracle_rhs(L, kRef);
        double scale0 = max_eps(kRef) * norm2(L);
        REQUIRE(norm(avg) > 0.05 * scale0); // away from reduced stationary points
        CHECK(norm(orc - avg) <= 5.0 * max_eps(kRef) * norm(avg));
    }
}

TEST_CASE("first-order agreement holds across random parameters") {
    SplitMix64 g(62);
    int used = 0;
    for (int trial = 0; trial < 60; ++trial) {
        SurfaceParams p{testutil::random_eps(g, 1e-3, 0.04)};
        Vec3 L = testutil::momentum_vec(g, 0.5, 1.5);
        Vec3 avg = averaged_rhs(L, p);
        double scale0 = max_eps(p) * norm2(L);
        if (norm(avg) < 0.1 * scale0) continue; // too close to a stationary point
        Vec3 orc = averaged_oracle_rhs(L, p);
        CHECK(norm(orc - avg) <= 5.0 * max_eps(p) * norm(avg));
        ++used;
    }
    CHECK(used >= 25);
}

TEST_CASE("doubling the quadrature leaves the oracle unchanged") {
    ValidationSettings coarse, fine;
    coarse.quadrature_n = 1024;
    fine.quadrature_n = 2048;
    Vec3 L{0.3, 0.8, 0.52};
    Vec3 a = averaged_oracle_rhs(L, kRef, coarse);
    Vec3 b = averaged_oracle_rhs(L, kRef, fine);
    CHECK(max_abs_diff(a, b) <= 1e-10);
}

TEST_CASE("the oracle is equivariant under cyclic relabeling") {
    SplitMix64 g(63);
    for (int trial = 0; trial < 10; ++trial) {
        Vec3 eps = testutil::random_eps(g, 1e-3, 0.04);
        Vec3 L = testutil::momentum_vec(g, 0.5, 1.5);
        Vec3 base = averaged_oracle_rhs(L, SurfaceParams{eps});
        for (int k = 1; k < 3; ++k) {
            Vec3 rot = averaged_oracle_rhs(testutil::cyc(L, k), SurfaceParams{testutil::cyc(eps, k)});
            CHECK(max_abs_diff(rot, testutil::cyc(base, k)) <= 1e-10);
        }
    }
}

TEST_CASE("coil averages of a synthetic spiral recover the drift") {
    const double dt = 2.0 * M_PI / 256.0;
    std::vector<ReducedSample> series;
    for (int k = 0; k <= 3 * 256; ++k) {
        double t = dt * static_cast<double>(k);
        series.push_back({t, Vec3{2.0 + 0.3 * std::sin(t), -1.0 + 0.3 * std::cos(t), 0.5}});
    }
    auto coils = coil_average(series, 2.0 * M_PI);
    REQUIRE(coils.size() == 3);
    for (std::size_t m = 0; m < coils.size(); ++m) {
        CHECK(coils[m].t == doctest::Approx(M_PI * (2.0 * m + 1.0)).epsilon(1e-12));
        CHECK(std::fabs(coils[m].L[0] - 2.0) <= 1e-10);
        CHECK(std::fabs(coils[m].L[1] + 1.0) <= 1e-10);
        CHECK(std::fabs(coils[m].L[2] - 0.5) <= 1e-13);
    }
}

TEST_CASE("coil averages of a round-sphere orbit sit on the conserved momentum") {
    SurfaceParams flat{Vec3{0.0, 0.0, 0.0}};
    ParticleState st = make_state(Vec3{1.0, 0.0, 0.0}, Vec3{0.0, 0.8, 0.0}, flat);
    Vec3 L0 = angular_momentum(st);
    Trajectory tr = integrate_geodesic(st, flat, 40.0);
    std::vector<ReducedSample> series;
    for (const auto& s : tr.samples) series.push_back({s.t, angular_momentum(s.state)});
    auto coils = coil_average(series, 2.0 * M_PI / norm(L0));
    REQUIRE(coils.size() >= 5);
    for (const auto& c : coils) CHECK(max_abs_diff(c.L, L0) <= 1e-8);
}

TEST_CASE("short series are rejected rather than silently averaged") {
    std::vector<ReducedSample> two = {{0.0, Vec3{1, 0, 0}}, {0.5, Vec3{1, 0, 0}}};
    CHECK_THROWS_AS(coil_average(two, 1.0), TrajectoryTooShortError);
    std::vector<ReducedSample> one = {{0.0, Vec3{1, 0, 0}}};
    CHECK_THROWS_AS(coil_average(one, 1.0), TrajectoryTooShortError);
    CHECK_THROWS_AS(coil_average(two, 0.0), ConfigError);
    CHECK_THROWS_AS(coil_average(two, -1.0), ConfigError);

    SurfaceParams flat{Vec3{0.0, 0.0, 0.0}};
    ParticleState st = make_state(Vec3{1.0, 0.0, 0.0}, Vec3{0.0, 0.8, 0.0}, flat);
    CHECK_THROWS_AS(compare_exact_vs_averaged(st, flat, 1.0), TrajectoryTooShortError);
    ParticleState rest{Vec3{1.0, 0.0, 0.0}, Vec3{0.0, 0.0, 0.0}};
    CHECK_THROWS_AS(compare_exact_vs_averaged(rest, flat, 10.0), ZeroMomentumError);
}

TEST_CASE("exact and reduced flows agree perfectly on the round sphere") {
    SurfaceParams flat{Vec3{0.0, 0.0, 0.0}};
    ParticleState st = make_state(Vec3{1.0, 0.0, 0.0}, Vec3{0.0, 0.8, 0.0}, flat);
    DeviationReport rep = compare_exact_vs_averaged(st, flat, 40.0);
    CHECK(rep.sup_norm <= 1e-8);
    CHECK(rep.rms <= rep.sup_norm + 1e-15);
    CHECK(rep.eps_ratio == 0.0);
    CHECK(rep.max_abs_phi <= 1e-8);
    CHECK(rep.max_energy_drift <= 1e-6);
    CHECK_FALSE(rep.series.empty());
}

TEST_CASE("a generic perturbed orbit tracks its reduced counterpart") {
    ParticleState st = make_state(Vec3{0.3, 0.5, 0.81}, Vec3{-0.7, 0.4, 0.1}, kRef);
    DeviationReport rep = compare_exact_vs_averaged(st, kRef, 100.0);
    CHECK(rep.eps_ratio <= 5.0);
    CHECK(rep.eps_ratio > 1e-4); // the coils genuinely wobble around the mean
    CHECK(rep.max_abs_phi <= 1e-8);
    CHECK(rep.max_energy_drift <= 1e-6);
    REQUIRE(rep.series.size() >= 10);
    CHECK(rep.series.front().t > 0.0);
    CHECK(rep.series.back().t < 100.0);
}

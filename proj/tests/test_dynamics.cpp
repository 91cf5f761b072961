#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "qsphere/dynamics.hpp"
#include "qsphere/errors.hpp"

using namespace qsphere;

TEST_CASE("round sphere gives centripetal acceleration") {
    SurfaceParams p;
    ParticleState st{Vec3{1.0, 0.0, 0.0}, Vec3{0.0, 1.0, 0.0}};
    CHECK(max_abs_diff(geodesic_rhs(st, p), Vec3{-1.0, 0.0, 0.0}) < 1e-15);
    CHECK(norm(exact_momentum_rhs(st, p)) == 0.0);

    // |v| = 2 quadruples the centripetal pull
    st.v = Vec3{0.0, 0.0, 2.0};
    CHECK(max_abs_diff(geodesic_rhs(st, p), Vec3{-4.0, 0.0, 0.0}) < 1e-15);
}

TEST_CASE("angular momentum cross products") {
    CHECK(angular_momentum({Vec3{1.0, 0.0, 0.0}, Vec3{0.0, 1.0, 0.0}}) == Vec3{0.0, 0.0, 1.0});
    CHECK(angular_momentum({Vec3{0.0, 0.0, 1.0}, Vec3{1.0, 0.0, 0.0}}) == Vec3{0.0, 1.0, 0.0});
    CHECK(norm(angular_momentum({Vec3{0.3, -0.2, 0.9}, Vec3{0.6, -0.4, 1.8}})) < 1e-16);
}

TEST_CASE("momentum flow equals x cross acceleration") {
    SurfaceParams p{Vec3{0.02, 0.03, 0.04}};
    SplitMix64 g(21);
    for (int trial = 0; trial < 1000; ++trial) {
        ParticleState st = random_surface_state(g, p);
        Vec3 direct = exact_momentum_rhs(st, p);
        Vec3 viaforce = cross(st.x, geodesic_rhs(st, p));
        CHECK(max_abs_diff(direct, viaforce) < 1e-12);
    }
}

TEST_CASE("x2 = 0 freezes the first and third momentum components") {
    SurfaceParams p{Vec3{0.02, 0.03, 0.04}};
    ParticleState st = make_state(Vec3{0.6, 0.0, 0.8}, Vec3{0.0, 1.0, 0.0}, p);
    REQUIRE(st.x[1] == 0.0);
    Vec3 ld = exact_momentum_rhs(st, p);
    CHECK(ld[0] == 0.0);
    CHECK(ld[2] == 0.0);
}

TEST_CASE("unperturbed orbit closes and conserves everything") {
    SurfaceParams p;
    ParticleState st0{Vec3{1.0, 0.0, 0.0}, Vec3{0.0, 1.0, 0.0}};

    Trajectory orbit = integrate_geodesic(st0, p, 2.0 * M_PI);
    const ParticleState& end = orbit.samples.back().state;
    CHECK(orbit.samples.back().t == 2.0 * M_PI);
    CHECK(norm(end.x - st0.x) < 1e-8);
    CHECK(norm(end.v - st0.v) < 1e-8);

    Trajectory long_run = integrate_geodesic(st0, p, 100.0);
    double worst = 0.0;
    for (const auto& s : long_run.samples)
        worst = std::max(worst, norm(angular_momentum(s.state) - Vec3{0.0, 0.0, 1.0}));
    CHECK(worst < 1e-8);
    CHECK(long_run.max_abs_phi < 1e-8);
    CHECK(long_run.max_energy_drift < 1e-6);
}

TEST_CASE("perturbed run keeps the constraint and the energy") {
    SurfaceParams p{Vec3{0.02, 0.03, 0.04}};
    ParticleState st0 = make_state(Vec3{0.3, 0.5, 0.81}, Vec3{-0.7, 0.4, 0.1}, p);
    Trajectory traj = integrate_geodesic(st0, p, 100.0, {});
    CHECK(traj.samples.front().t == 0.0);
    CHECK(traj.samples.back().t == 100.0);
    CHECK(traj.max_abs_phi <= 1e-8);
    CHECK(traj.max_energy_drift <= 1e-6);
    CHECK(traj.stats.accepted + 1 == traj.samples.size());
}

TEST_CASE("step halving gains at least a factor eight on the closed orbit") {
    SurfaceParams p;
    ParticleState st0{Vec3{1.0, 0.0, 0.0}, Vec3{0.0, 1.0, 0.0}};

    auto end_error = [&](double h) {
        IntegratorSettings s;
        s.rtol = 1.0; // step size pinned by max_step, not by the controller
        s.atol = 1.0;
        s.init_step = h;
        s.max_step = h;
        Trajectory t = integrate_geodesic(st0, p, 2.0 * M_PI, s);
        const ParticleState& end = t.samples.back().state;
        return norm(end.x - st0.x) + norm(end.v - st0.v);
    };

    double coarse = end_error(0.2);
    double fine = end_error(0.1);
    REQUIRE(fine > 1e-12); // stay above roundoff so the ratio means something
    CHECK(coarse / fine >= 8.0);
}

TEST_CASE("steps below min_step abort the run") {
    SurfaceParams p;
    ParticleState st0{Vec3{1.0, 0.0, 0.0}, Vec3{0.0, 1.0, 0.0}};
    IntegratorSettings s;
    s.rtol = 1e-12;
    s.atol = 1e-14;
    s.init_step = 0.4;
    s.min_step = 0.3;
    CHECK_THROWS_AS(integrate_geodesic(st0, p, 10.0, s), StepUnderflowError);
}

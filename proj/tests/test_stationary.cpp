#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "helpers.hpp"
#include "qsphere/averaged.hpp"
#include "qsphere/errors.hpp"
#include "qsphere/stationary.hpp"

using namespace qsphere;

namespace {

const Vec3 kEpsI{0.02, 0.03, 0.04};

std::map<Family, int> family_census(const FixedPointInventory& inv) {
    std::map<Family, int> c;
    for (const auto& fp : inv.points) ++c[fp.family];
    return c;
}

const FixedPoint& find_point(const FixedPointInventory& inv, const Vec3& L0) {
    for (const auto& fp : inv.points)
        if (max_abs_diff(fp.L0, L0) < 1e-9) return fp;
    REQUIRE(false);
    return inv.points.front();
}

} // namespace

TEST_CASE("quadratic parameter combinations") {
    auto q = q_quantities(kEpsI);
    CHECK(std::fabs(q[0] - 0.0002) < 1e-17);
    CHECK(std::fabs(q[1] - 0.0010) < 1e-17);
    CHECK(std::fabs(q[2] - 0.0014) < 1e-17);
}

TEST_CASE("all-positive parameters carry the full 26-point inventory") {
    FixedPointInventory inv = enumerate_fixed_points(kEpsI);
    CHECK(inv.points.size() == 26);
    CHECK_FALSE(inv.degenerate_parameters);
    CHECK(inv.notes.empty());

    auto census = family_census(inv);
    CHECK(census[Family::S1a] == 2);
    CHECK(census[Family::S1b] == 2);
    CHECK(census[Family::S1c] == 2);
    CHECK(census[Family::S2a] == 4);
    CHECK(census[Family::S2b] == 4);
    CHECK(census[Family::S2c] == 4);
    CHECK(census[Family::S3] == 8);

    int centers = 0, saddles = 0;
    for (const auto& fp : inv.points) {
        if (fp.stability == Stability::center) ++centers;
        if (fp.stability == Stability::saddle) ++saddles;
        // axis and interior families are centers, the planar family saddles
        bool planar = fp.family == Family::S2a || fp.family == Family::S2b ||
                      fp.family == Family::S2c;
        CHECK(fp.stability == (planar ? Stability::saddle : Stability::center));
    }
    CHECK(centers == 14);
    CHECK(saddles == 12);
    CHECK(euler_index(inv) == 2);
}

TEST_CASE("interior and planar coordinates match the closed forms") {
    FixedPointInventory inv = enumerate_fixed_points(kEpsI);

    // interior: L_i^2 = Q_i / sum Q = (1/13, 5/13, 7/13)
    Vec3 s3{std::sqrt(1.0 / 13.0), std::sqrt(5.0 / 13.0), std::sqrt(7.0 / 13.0)};
    const FixedPoint& interior = find_point(inv, s3);
    CHECK(max_abs_diff(interior.L0, s3) < 1e-12);
    CHECK(interior.family == Family::S3);

    // planar, L1 = 0 plane: L2^2 = e2/(e2+e3), L3^2 = e3/(e2+e3)
    Vec3 s2a{0.0, std::sqrt(3.0 / 7.0), std::sqrt(4.0 / 7.0)};
    const FixedPoint& planar = find_point(inv, s2a);
    CHECK(planar.family == Family::S2a);

    // saddle eigenvalues: lambda^2 = (9/8) L2^2 L3^2 Q1 at radius 1
    double lam2 = (9.0 / 8.0) * (3.0 / 7.0) * (4.0 / 7.0) * 0.0002;
    CHECK(planar.eigenvalues[0].real() == doctest::Approx(std::sqrt(lam2)).epsilon(1e-6));
    CHECK(planar.eigenvalues[1].real() == doctest::Approx(-std::sqrt(lam2)).epsilon(1e-6));
    CHECK(std::fabs(planar.eigenvalues[0].imag()) < 1e-14);
    // the tangent Jacobian of a Hamiltonian field is traceless
    CHECK(std::fabs(planar.jac[0][0] + planar.jac[1][1]) < 1e-14);

    // centers carry purely imaginary pairs
    const FixedPoint& axis = find_point(inv, Vec3{0.0, 0.0, 1.0});
    CHECK(axis.family == Family::S1a);
    CHECK(std::fabs(axis.eigenvalues[0].real()) < 1e-14);
    CHECK(axis.eigenvalues[0].imag() > 1e-4);
}

TEST_CASE("mixed-sign parameters keep only one planar family") {
    FixedPointInventory inv = enumerate_fixed_points(Vec3{-0.02, 0.03, 0.04});
    CHECK(inv.points.size() == 10);
    auto census = family_census(inv);
    CHECK(census[Family::S2a] == 4);
    CHECK(census[Family::S2b] == 0);
    CHECK(census[Family::S2c] == 0);
    CHECK(census[Family::S3] == 0);

    CHECK(find_point(inv, Vec3{1.0, 0.0, 0.0}).stability == Stability::center);
    CHECK(find_point(inv, Vec3{-1.0, 0.0, 0.0}).stability == Stability::center);
    CHECK(find_point(inv, Vec3{0.0, 1.0, 0.0}).stability == Stability::saddle);
    CHECK(find_point(inv, Vec3{0.0, 0.0, 1.0}).stability == Stability::saddle);
    // Q1 < 0 turns the surviving planar family into centers
    CHECK(find_point(inv, Vec3{0.0, std::sqrt(3.0 / 7.0), std::sqrt(4.0 / 7.0)}).stability ==
          Stability::center);

    int centers = 0, saddles = 0;
    for (const auto& fp : inv.points) {
        centers += fp.stability == Stability::center;
        saddles += fp.stability == Stability::saddle;
    }
    CHECK(centers == 6);
    CHECK(saddles == 4);
    CHECK(euler_index(inv) == 2);
}

TEST_CASE("a vanishing parameter leaves nilpotent axis points") {
    FixedPointInventory inv = enumerate_fixed_points(Vec3{-0.01, 0.0, 0.01});
    CHECK(inv.points.size() == 6);
    CHECK(inv.degenerate_parameters);
    CHECK(inv.notes.size() == 2); // both adjacent planar families sit on the tolerance

    CHECK(find_point(inv, Vec3{0.0, 1.0, 0.0}).stability == Stability::saddle);
    CHECK(find_point(inv, Vec3{1.0, 0.0, 0.0}).stability == Stability::degenerate);
    CHECK(find_point(inv, Vec3{0.0, 0.0, 1.0}).stability == Stability::degenerate);

    // the sign census of H on a small circle still decides those
    SurfaceParams p{inv.eps};
    CHECK(topological_class(Vec3{1.0, 0.0, 0.0}, p, 1.0) == Stability::center);
    CHECK(topological_class(Vec3{0.0, 0.0, 1.0}, p, 1.0) == Stability::center);
    CHECK(topological_class(Vec3{0.0, 1.0, 0.0}, p, 1.0) == Stability::saddle);
}

TEST_CASE("flat parameters classify as degenerate everywhere") {
    SurfaceParams flat{Vec3{0.0, 0.0, 0.0}};
    CHECK(topological_class(Vec3{0.0, 0.0, 1.0}, flat, 1.0) == Stability::degenerate);
}

TEST_CASE("every point is stationary to the residual gate and comes paired") {
    FixedPointInventory inv = enumerate_fixed_points(kEpsI);
    SurfaceParams p{kEpsI};
    for (const auto& fp : inv.points) {
        CHECK(norm(averaged_rhs(fp.L0, p)) <= 1e-10 * 0.04);
        CHECK(fp.energy == doctest::Approx(hamiltonian(fp.L0, p)));
        bool has_mirror = false;
        for (const auto& other : inv.points)
            if (max_abs_diff(other.L0, -fp.L0) < 1e-12) has_mirror = true;
        CHECK(has_mirror);
    }
}

TEST_CASE("the momentum radius scales coordinates and rates linearly") {
    FixedPointInventory unit = enumerate_fixed_points(kEpsI, 1.0);
    FixedPointInventory doubled = enumerate_fixed_points(kEpsI, 2.0);
    REQUIRE(unit.points.size() == doubled.points.size());
    for (std::size_t i = 0; i < unit.points.size(); ++i) {
        CHECK(max_abs_diff(doubled.points[i].L0, 2.0 * unit.points[i].L0) < 1e-12);
        CHECK(std::abs(doubled.points[i].eigenvalues[0]) ==
              doctest::Approx(2.0 * std::abs(unit.points[i].eigenvalues[0])).epsilon(1e-10));
        CHECK(doubled.points[i].energy ==
              doctest::Approx(4.0 * unit.points[i].energy).epsilon(1e-12));
        CHECK(doubled.points[i].stability == unit.points[i].stability);
    }
}

TEST_CASE("linearize rejects non-stationary momenta") {
    FixedPoint fp;
    fp.L0 = normalized(Vec3{1.0, 1.0, 1.0});
    fp.family = Family::S3;
    CHECK_THROWS_AS(linearize(fp, SurfaceParams{kEpsI}), NotAFixedPointError);
}

TEST_CASE("antipodal representatives are canonical") {
    SplitMix64 g(41);
    for (int trial = 0; trial < 100; ++trial) {
        Vec3 L = testutil::momentum_vec(g, 0.2, 1.5);
        Vec3 a = antipodal_representative(L);
        Vec3 b = antipodal_representative(-L);
        CHECK(max_abs_diff(a, b) == 0.0);
        int lead = 0;
        while (lead < 3 && a[lead] == 0.0) ++lead;
        REQUIRE(lead < 3);
        CHECK(a[lead] > 0.0);
    }
    Vec3 tiny{-1e-20, 1.0, 0.0};
    CHECK(antipodal_representative(tiny, 1e-12) == tiny);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "testutil.hpp"

using namespace focusplan;
using testutil::camera_at;
using testutil::urand;

TEST_CASE("dof limits at the reference lens") {
    const CameraIntrinsics intr;  // H = 10000, F = 50

    const DofLimits mid = dof_limits(5000.0, intr);
    CHECK(mid.near_mm == doctest::Approx(3344.4816053512).epsilon(1e-10));
    REQUIRE(mid.far_mm.has_value());
    CHECK(*mid.far_mm == doctest::Approx(9900.9900990099).epsilon(1e-10));

    const DofLimits close = dof_limits(750.0, intr);
    CHECK(close.near_mm == doctest::Approx(700.9345794392523).epsilon(1e-10));
    CHECK(*close.far_mm == doctest::Approx(806.4516129032259).epsilon(1e-10));

    const DofLimits hyper = dof_limits(intr.hyperfocal_mm + intr.focal_mm, intr);
    CHECK(!hyper.far_mm.has_value());
    CHECK(dof_limits(20000.0, intr).far_mm == std::nullopt);

    CHECK_THROWS_AS(dof_limits(intr.focal_mm, intr), std::invalid_argument);
    CHECK_THROWS_AS(dof_limits(10.0, intr), std::invalid_argument);
}

TEST_CASE("focus interval inverts the dof limits") {
    const CameraIntrinsics intr;

    const FocusInterval at750 = focus_interval_for_depth(750.0, intr);
    CHECK(at750.lo == doctest::Approx(701.1627906976744).epsilon(1e-10));
    REQUIRE(at750.hi.has_value());
    CHECK(*at750.hi == doctest::Approx(806.7567567567568).epsilon(1e-10));

    const FocusInterval at5000 = focus_interval_for_depth(5000.0, intr);
    CHECK(dof_limits(*at5000.hi, intr).near_mm == doctest::Approx(5000.0).epsilon(1e-6));
    CHECK(*dof_limits(at5000.lo, intr).far_mm == doctest::Approx(5000.0).epsilon(1e-6));

    CHECK(!focus_interval_for_depth(intr.hyperfocal_mm, intr).hi.has_value());
    CHECK(!focus_interval_for_depth(15000.0, intr).hi.has_value());
    CHECK_THROWS_AS(focus_interval_for_depth(0.0, intr), std::invalid_argument);
}

TEST_CASE("dof algebra round-trips over random depths") {
    const CameraIntrinsics intr;
    std::mt19937_64 gen(2024);
    for (int i = 0; i < 2000; ++i) {
        const double d = urand(gen, 60.0, 9900.0);
        const FocusInterval iv = focus_interval_for_depth(d, intr);
        REQUIRE(iv.hi.has_value());
        CHECK(dof_limits(*iv.hi, intr).near_mm == doctest::Approx(d).epsilon(1e-6));
        CHECK(*dof_limits(iv.lo, intr).far_mm == doctest::Approx(d).epsilon(1e-6));

        // Containment goes both ways at interior focus distances.
        const double s = urand(gen, iv.lo, *iv.hi);
        CHECK(dof_limits(s, intr).contains(d));
    }
}

TEST_CASE("frustum membership") {
    const CameraView cam = camera_at(Vec3::Zero(), Vec3::UnitX(), Vec3::UnitZ());
    const double s = 750.0;
    const DofLimits lim = dof_limits(s, cam.intrinsics);

    CHECK(in_frustum(Vec3(s, 0, 0), cam, s));                       // focus plane
    CHECK(in_frustum(Vec3(lim.near_mm, 0, 0), cam, s));             // closed at the near limit
    CHECK(!in_frustum(Vec3(0.5 * lim.near_mm, 0, 0), cam, s));      // closer than near limit
    CHECK(!in_frustum(Vec3(*lim.far_mm + 1.0, 0, 0), cam, s));      // past the far limit
    CHECK(!in_frustum(Vec3(s, 200.0, 0), cam, s));                  // lateral clip
    CHECK(!in_frustum(Vec3(-s, 0, 0), cam, s));                     // behind the camera
}

TEST_CASE("pointwise cost matches hand evaluation") {
    const CameraView cam = camera_at(Vec3::Zero(), Vec3::UnitX(), Vec3::UnitZ());
    const CostParams params;
    const Vec3 p(750.0, 0, 0);
    const Vec3 n = Vec3::UnitX();  // faces the camera head-on

    CHECK(pointwise_cost(p, n, cam, 750.0, params, true) == doctest::Approx(0.1875).epsilon(1e-12));
    CHECK(pointwise_cost(p, n, cam, 5000.0, params, true) ==
          doctest::Approx(0.1875 + 1.0 / 3.0).epsilon(1e-12));
    CHECK(pointwise_cost(p, n, cam, 750.0, params, false) == 1.0);
    CHECK(pointwise_cost(Vec3(9000, 0, 0), -Vec3::UnitX(), cam, 750.0, params, false) == 1.0);

    CHECK_THROWS_AS(pointwise_cost(p, -n, cam, 750.0, params, true), std::logic_error);
}

TEST_CASE("pointwise cost stays in range and only the focus term moves with s") {
    const Vec3 dir = Vec3(1, 0.2, -0.1).normalized();
    const Vec3 up = (Vec3::UnitZ() - Vec3::UnitZ().dot(dir) * dir).normalized();
    const CameraView adjusted = camera_at(Vec3(100, -50, 30), dir, up);
    const CostParams params;
    std::mt19937_64 gen(7);
    for (int i = 0; i < 500; ++i) {
        const double depth = urand(gen, 100.0, 4000.0);
        const Vec3 lateral = urand(gen, -80.0, 80.0) * adjusted.right() + urand(gen, -80.0, 80.0) * adjusted.up;
        const Vec3 p = adjusted.position + depth * adjusted.direction + lateral;
        Vec3 n = (adjusted.direction + Vec3(urand(gen, -0.8, 0.8), urand(gen, -0.8, 0.8), urand(gen, -0.8, 0.8))).normalized();
        if (adjusted.direction.dot(n) <= 1e-3) n = adjusted.direction;

        const double s1 = urand(gen, 60.0, 9000.0);
        const double s2 = urand(gen, 60.0, 9000.0);
        const double c1 = pointwise_cost(p, n, adjusted, s1, params, true);
        const double c2 = pointwise_cost(p, n, adjusted, s2, params, true);
        CHECK(c1 >= 0.0);
        CHECK(c1 <= 1.0);
        const double diff = c1 - c2;
        const bool step = std::abs(diff) < 1e-12 || std::abs(std::abs(diff) - params.w3) < 1e-12;
        CHECK(step);
    }
}

TEST_CASE("pointwise cost is non-increasing in the facing term") {
    const CameraView cam = camera_at(Vec3::Zero(), Vec3::UnitX(), Vec3::UnitZ());
    const CostParams params;
    const Vec3 p(900.0, 20.0, -10.0);
    double prev = 2.0;
    for (double facing : {0.05, 0.2, 0.5, 0.8, 1.0}) {
        // Normal with a fixed angle to the axis.
        const Vec3 n = (facing * Vec3::UnitX() + std::sqrt(1.0 - facing * facing) * Vec3::UnitZ()).normalized();
        const double c = pointwise_cost(p, n, cam, 900.0, params, true);
        CHECK(c <= prev + 1e-12);
        prev = c;
    }
}

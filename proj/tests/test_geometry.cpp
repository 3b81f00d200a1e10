#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "apeot/geometry.hpp"

using namespace apeot;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("orientationFromVelocity covers all quadrants") {
    CHECK(orientationFromVelocity({1.0, 0.0}) == doctest::Approx(0.0));
    CHECK(orientationFromVelocity({0.0, 2.0}) == doctest::Approx(kPi / 2));
    // full-quadrant reference: std::atan2
    CHECK(orientationFromVelocity({-1.0, -1.0}) == doctest::Approx(std::atan2(-1.0, -1.0)));
    CHECK(orientationFromVelocity({-1.0, -1.0}) == doctest::Approx(-3.0 * kPi / 4));
    CHECK_THROWS_AS(orientationFromVelocity({0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("orientationFromVelocity is scale invariant") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> scale(1e-6, 1e3);
    for (int i = 0; i < 200; ++i) {
        Vec2 v{u(rng), u(rng)};
        if (v.norm() < 1e-9) continue;
        const double s = scale(rng);
        CHECK(orientationFromVelocity(s * v) == doctest::Approx(orientationFromVelocity(v)));
    }
}

TEST_CASE("rotationMatrix basics") {
    CHECK(rotationMatrix(0.0).isApprox(Mat2::Identity(), 1e-15));

    Mat2 quarter;
    quarter << 0.0, -1.0, 1.0, 0.0;
    CHECK(rotationMatrix(kPi / 2).isApprox(quarter, 1e-12));

    const Mat2 r = rotationMatrix(kPi / 6);
    CHECK(r(0, 0) == doctest::Approx(0.8660).epsilon(1e-4));
    CHECK(r(0, 1) == doctest::Approx(-0.5).epsilon(1e-4));
    CHECK(r(1, 0) == doctest::Approx(0.5).epsilon(1e-4));
    CHECK(r(1, 1) == doctest::Approx(0.8660).epsilon(1e-4));

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> angle(-10.0, 10.0);
    for (int i = 0; i < 100; ++i) {
        const Mat2 a = rotationMatrix(angle(rng));
        CHECK(a.determinant() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK((a.transpose() * a).isApprox(Mat2::Identity(), 1e-12));
    }
}

TEST_CASE("orientedExtent rotates the shape, preserving eigenvalues") {
    const ExtentModel model = [] {
        ExtentModel m;
        m.E = Vec2{4.0, 1.0}.asDiagonal();
        return m;
    }();

    CHECK(orientedExtent(model, 0.0).isApprox(model.E, 1e-15));
    CHECK(orientedExtent(model, kPi / 2).isApprox(Mat2(Vec2{1.0, 4.0}.asDiagonal()), 1e-12));

    Mat2 expected;  // direct product A E A^T at 45 degrees
    expected << 2.5, 1.5, 1.5, 2.5;
    CHECK(orientedExtent(model, kPi / 4).isApprox(expected, 1e-12));

    // rotation similarity: identical eigenvalues for any angle
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> angle(-10.0, 10.0);
    for (int i = 0; i < 100; ++i) {
        const Mat2 x = orientedExtent(model, angle(rng));
        CHECK(x.isApprox(x.transpose(), 1e-12));
        Eigen::SelfAdjointEigenSolver<Mat2> eig(x);
        CHECK(eig.eigenvalues()(0) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(eig.eigenvalues()(1) == doctest::Approx(4.0).epsilon(1e-12));
        CHECK(x.trace() == doctest::Approx(5.0).epsilon(1e-12));
    }
}

TEST_CASE("ExtentModel::fromSemiAxes applies the documented scaling") {
    const ExtentModel m = ExtentModel::fromSemiAxes(0.3, 0.2);
    CHECK(m.E(0, 0) == doctest::Approx(0.3 * 0.3 / 4.0).epsilon(1e-15));
    CHECK(m.E(1, 1) == doctest::Approx(0.2 * 0.2 / 4.0).epsilon(1e-15));
    CHECK(m.E(0, 1) == 0.0);
    // sqrt of eigenvalues proportional to semi-axes with factor axisToSigma
    CHECK(std::sqrt(m.E(0, 0)) == doctest::Approx(m.axisToSigma * 0.3));
    CHECK(std::sqrt(m.E(1, 1)) == doctest::Approx(m.axisToSigma * 0.2));
}

TEST_CASE("losDelayDistance") {
    CHECK(losDelayDistance({0.0, 0.0}, {0, {3.0, 4.0}, false}) == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(losDelayDistance({6.0, 6.0}, {0, {6.0, 6.0}, false}) == 0.0);
    CHECK(losDelayDistance({1.0, 2.0}, {0, {4.0, 6.0}, false}) == doctest::Approx(5.0).epsilon(1e-12));

    // symmetric under swapping agent and anchor
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int i = 0; i < 100; ++i) {
        const Vec2 p{u(rng), u(rng)};
        const Vec2 a{u(rng), u(rng)};
        CHECK(losDelayDistance(p, {0, a, false}) ==
              doctest::Approx(losDelayDistance(a, {0, p, false})).epsilon(1e-15));
    }
}

TEST_CASE("activeScatterDistance") {
    const Anchor a34{0, {3.0, 4.0}, false};
    CHECK(activeScatterDistance({0, 0}, {0, 0}, {0, 0}, a34) == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(activeScatterDistance({0, 0}, {0.25, 0.1}, {-0.25, -0.1}, a34) ==
          doctest::Approx(5.0).epsilon(1e-12));
    const double expected = (Vec2{1.30, 1.10} - Vec2{6.0, 6.0}).norm();
    CHECK(activeScatterDistance({1, 1}, {0.25, 0.1}, {0.05, 0}, {0, {6.0, 6.0}, false}) ==
          doctest::Approx(expected).epsilon(1e-15));
    CHECK(expected == doctest::Approx(std::hypot(4.7, 4.9)).epsilon(1e-12));
    CHECK(expected == doctest::Approx(6.7897).epsilon(1e-4));
}

TEST_CASE("passiveScatterDistance") {
    const Anchor tx{0, {0.0, 0.0}, true};
    const Anchor rx{1, {6.0, 0.0}, false};

    // scatter point at the tx anchor: degenerate ellipse vertex
    CHECK(passiveScatterDistance({0, 0}, {0, 0}, {0, 0}, tx, rx) ==
          doctest::Approx(6.0).epsilon(1e-12));
    // collinear midpoint
    CHECK(passiveScatterDistance({3, 0}, {0, 0}, {0, 0}, tx, rx) ==
          doctest::Approx(6.0).epsilon(1e-12));
    // two 3-4-5 triangles
    CHECK(passiveScatterDistance({3, 4}, {0, 0}, {0, 0}, tx, rx) ==
          doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("passiveScatterDistance respects the bistatic lower bound") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(-20.0, 20.0);
    for (int i = 0; i < 500; ++i) {
        const Anchor tx{0, {u(rng), u(rng)}, true};
        const Anchor rx{1, {u(rng), u(rng)}, false};
        const Vec2 p{u(rng), u(rng)};
        const Vec2 b{u(rng) / 10, u(rng) / 10};
        const Vec2 q{u(rng) / 10, u(rng) / 10};
        const double baseline = (tx.position - rx.position).norm();
        CHECK(passiveScatterDistance(p, b, q, tx, rx) >= baseline - 1e-12);
    }
}

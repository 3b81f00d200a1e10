#pragma once

#include <random>

#include "apeot/types.hpp"

namespace apeot::testutil {

// composite Simpson rule, n even
inline double simpson(double a, double b, int n, auto&& fn) {
    const double h = (b - a) / n;
    double acc = fn(a) + fn(b);
    for (int i = 1; i < n; ++i) acc += fn(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

// draw from N(0, cov) via eigendecomposition
inline Vec2 sampleGaussian2d(const Mat2& cov, std::mt19937_64& rng) {
    Eigen::SelfAdjointEigenSolver<Mat2> eig;
    eig.computeDirect(cov);
    const Vec2 ev = eig.eigenvalues().cwiseMax(0.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const Vec2 z{std::sqrt(ev(0)) * gauss(rng), std::sqrt(ev(1)) * gauss(rng)};
    return eig.eigenvectors() * z;
}

}  // namespace apeot::testutil

#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

namespace apeot {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

/// Kinematic state of the mobile agent: position, velocity, and the
/// offset from the agent to the body center (body center = p + b).
struct AgentState {
    Vec2 p{0.0, 0.0};  // position [m]
    Vec2 v{0.0, 0.0};  // velocity [m/s]
    Vec2 b{0.0, 0.0};  // body-center bias [m]

    Vec2 bodyCenter() const { return p + b; }
};

/// Symmetric PSD base shape of the elliptical scattering body.
///
/// The square roots of the eigenvalues of E are axisToSigma times the
/// semi-axes, so with the default 0.5 the shape matrix equals the
/// covariance of a uniform density over the solid ellipse.
struct ExtentModel {
    Mat2 E = Mat2::Zero();
    double semiAxisLong = 0.0;   // [m]
    double semiAxisShort = 0.0;  // [m]
    double axisToSigma = 0.5;

    static ExtentModel fromSemiAxes(double aLong, double aShort, double axisToSigma = 0.5) {
        if (aLong < 0.0 || aShort < 0.0 || axisToSigma <= 0.0)
            throw std::invalid_argument("ExtentModel: semi-axes and scale must be nonnegative");
        ExtentModel m;
        m.semiAxisLong = aLong;
        m.semiAxisShort = aShort;
        m.axisToSigma = axisToSigma;
        m.E = Mat2::Zero();
        m.E(0, 0) = (axisToSigma * aLong) * (axisToSigma * aLong);
        m.E(1, 1) = (axisToSigma * aShort) * (axisToSigma * aShort);
        return m;
    }
};

/// Fixed radio node. Every anchor receives; one may also transmit for
/// the passive (bistatic) channel.
struct Anchor {
    int id = -1;
    Vec2 position{0.0, 0.0};
    bool canTransmitPassive = false;
};

/// One extracted (distance, normalized amplitude) pair.
/// txAnchor == kTxAgent marks an active measurement.
struct Measurement {
    static constexpr int kTxAgent = -1;

    double d = 0.0;  // distance [m], in [0, dMax]
    double u = 0.0;  // normalized amplitude (linear), >= gamma
    int rxAnchor = -1;
    int txAnchor = kTxAgent;

    bool isActive() const { return txAnchor == kTxAgent; }
};

/// All measurements of one time step. active[j] collects the active
/// channel of rx anchor j; passive[j] the (rx = j, tx = passive tx)
/// channel. Lists may be empty (e.g. the excluded tx self-pair).
struct MeasurementSet {
    int timeIndex = 0;
    std::vector<std::vector<Measurement>> active;
    std::vector<std::vector<Measurement>> passive;

    std::size_t totalCount() const {
        std::size_t n = 0;
        for (const auto& ch : active) n += ch.size();
        for (const auto& ch : passive) n += ch.size();
        return n;
    }
};

}  // namespace apeot

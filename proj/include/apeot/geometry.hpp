#pragma once

#include "apeot/types.hpp"

namespace apeot {

/// Heading angle from a velocity vector, full-quadrant, in (-pi, pi].
/// Throws std::invalid_argument for zero velocity; callers that track a
/// previous heading should hold it instead of calling with v = 0.
double orientationFromVelocity(const Vec2& v);

/// 2-D rotation matrix [[cos, -sin], [sin, cos]].
Mat2 rotationMatrix(double theta);

/// Base shape rotated into the scene frame: A(theta) * E * A(theta)^T.
Mat2 orientedExtent(const ExtentModel& model, double theta);
Mat2 orientedExtent(const Mat2& baseShape, double theta);

/// ||p - anchor||, the LOS path length.
double losDelayDistance(const Vec2& p, const Anchor& anchor);

/// ||(p + b + q) - anchor||. The agent-to-scatter leg is not part of
/// the active scatter path.
double activeScatterDistance(const Vec2& p, const Vec2& b, const Vec2& q, const Anchor& anchor);

/// Bistatic path ||s - tx|| + ||s - rx|| of the scatter point s = p + b + q.
double passiveScatterDistance(const Vec2& p, const Vec2& b, const Vec2& q, const Anchor& txAnchor,
                              const Anchor& rxAnchor);

}  // namespace apeot

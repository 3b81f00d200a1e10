#include "apeot/geometry.hpp"

#include <cmath>

namespace apeot {

double orientationFromVelocity(const Vec2& v) {
    if (v.x() == 0.0 && v.y() == 0.0)
        throw std::invalid_argument("orientationFromVelocity: zero velocity, orientation undefined");
    return std::atan2(v.y(), v.x());
}

Mat2 rotationMatrix(double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    Mat2 a;
    a << c, -s, s, c;
    return a;
}

Mat2 orientedExtent(const Mat2& baseShape, double theta) {
    const Mat2 a = rotationMatrix(theta);
    return a * baseShape * a.transpose();
}

Mat2 orientedExtent(const ExtentModel& model, double theta) {
    return orientedExtent(model.E, theta);
}

double losDelayDistance(const Vec2& p, const Anchor& anchor) {
    return (p - anchor.position).norm();
}

double activeScatterDistance(const Vec2& p, const Vec2& b, const Vec2& q, const Anchor& anchor) {
    return (p + b + q - anchor.position).norm();
}

double passiveScatterDistance(const Vec2& p, const Vec2& b, const Vec2& q, const Anchor& txAnchor,
                              const Anchor& rxAnchor) {
    const Vec2 s = p + b + q;
    return (s - txAnchor.position).norm() + (s - rxAnchor.position).norm();
}

}  // namespace apeot

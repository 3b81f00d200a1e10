#include "apeot/pcrlb.hpp"

#include <cmath>

namespace apeot {

PcrlbParams PcrlbParams::fromScenario(const ScenarioConfig& scenario) {
    PcrlbParams params;
    params.anchors = scenario.anchors;
    params.noise = scenario.noiseModel();
    const double refLin = std::pow(10.0, scenario.refAmplitudeDb / 20.0);
    params.amplitudeOfDistance = [refLin](double d) { return refLin / d; };
    params.motion.dt = scenario.dt;
    return params;
}

Mat4 losInformation(const AgentState& state, const std::vector<Anchor>& anchors,
                    const NoiseModel& noise,
                    const std::function<double(double)>& amplitudeOfDistance) {
    Mat4 info = Mat4::Zero();
    for (const Anchor& anchor : anchors) {
        const Vec2 r = state.p - anchor.position;
        const double d = r.norm();
        if (d < 1e-12) throw std::runtime_error("losInformation: agent coincides with an anchor");
        const double sigma = distanceStd(amplitudeOfDistance(d), noise);
        const Vec2 h = r / d;
        info.topLeftCorner<2, 2>() += (h * h.transpose()) / (sigma * sigma);
    }
    return info;
}

BoundTrace pcrlbRecursion(const GroundTruth& truth, const PcrlbParams& params) {
    const Mat4 f = params.motion.kinematicTransition();
    const Mat4 q = params.motion.processNoise();

    Mat4 j = Mat4::Zero();
    j(0, 0) = j(1, 1) = 1.0 / (params.prior.posStd * params.prior.posStd);
    j(2, 2) = j(3, 3) = 1.0 / (params.prior.velStd * params.prior.velStd);

    BoundTrace trace;
    trace.positionBound.reserve(truth.states.size());
    trace.information.reserve(truth.states.size());
    for (std::size_t n = 0; n < truth.states.size(); ++n) {
        Eigen::FullPivLU<Mat4> lu(j);
        if (!lu.isInvertible())
            throw std::runtime_error("pcrlbRecursion: singular information matrix at step " +
                                     std::to_string(n + 1));
        const Mat4 predicted = (q + f * lu.inverse() * f.transpose()).inverse();
        j = predicted + losInformation(truth.states[n], params.anchors, params.noise,
                                       params.amplitudeOfDistance);
        j = 0.5 * (j + j.transpose());

        Eigen::FullPivLU<Mat4> luPost(j);
        if (!luPost.isInvertible())
            throw std::runtime_error("pcrlbRecursion: singular information matrix at step " +
                                     std::to_string(n + 1));
        const Mat4 cov = luPost.inverse();
        trace.positionBound.push_back(std::sqrt(cov(0, 0) + cov(1, 1)));
        trace.information.push_back(j);
    }
    return trace;
}

}  // namespace apeot

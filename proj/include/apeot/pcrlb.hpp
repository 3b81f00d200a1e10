#pragma once

#include <functional>

#include "apeot/scenario.hpp"
#include "apeot/tracker.hpp"

namespace apeot {

/// Per-step lower bound on the position error norm, with the posterior
/// information matrices behind it.
struct BoundTrace {
    std::vector<double> positionBound;
    std::vector<Mat4> information;
};

struct PcrlbParams {
    std::vector<Anchor> anchors;
    NoiseModel noise;
    std::function<double(double)> amplitudeOfDistance;  // LOS amplitude at range d
    MotionModel motion;
    InitialPrior prior;

    static PcrlbParams fromScenario(const ScenarioConfig& scenario);
};

/// Fisher information of the LOS ranges in the kinematic substate
/// (position block only; ranges carry no velocity information).
Mat4 losInformation(const AgentState& state, const std::vector<Anchor>& anchors,
                    const NoiseModel& noise,
                    const std::function<double(double)>& amplitudeOfDistance);

/// Information-matrix recursion along the true trajectory assuming the
/// LOS to every anchor is always available. Output is
/// sqrt(trace of the position block of J_n^{-1}) per step.
BoundTrace pcrlbRecursion(const GroundTruth& truth, const PcrlbParams& params);

}  // namespace apeot

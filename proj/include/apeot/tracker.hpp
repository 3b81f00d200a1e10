#pragma once

#include <cstdint>
#include <functional>
#include <random>

#include "apeot/likelihood.hpp"
#include "apeot/scenario.hpp"
#include "apeot/types.hpp"

namespace apeot {

/// Weighted state hypotheses. Log weights are kept unnormalized;
/// normalizedWeights() applies the log-sum-exp normalization.
/// orientations carry each particle's last valid heading so that
/// near-zero-speed particles keep a defined extent rotation.
struct ParticleEnsemble {
    std::vector<AgentState> states;
    std::vector<double> logWeights;
    std::vector<double> orientations;

    std::size_t size() const { return states.size(); }
    std::vector<double> normalizedWeights() const;
    double ess() const;
};

/// Constant-velocity, stochastic-acceleration kinematics plus a
/// random-walk body bias.
struct MotionModel {
    double dt = 0.1;      // [s]
    double accelStd = 3.0;   // [m/s^2]
    double biasStd = 0.1;    // [m] per step

    Mat4 kinematicTransition() const;
    Eigen::Matrix<double, 4, 2> noiseGain() const;
    Mat4 processNoise() const;  // B sigma_a^2 B^T
};

struct InitialPrior {
    AgentState mean;
    double posStd = 0.3;
    double velStd = 0.3;
    double biasStd = 0.3;
};

/// Post-resampling regularization noise, per component.
struct JitterStd {
    double pos = 0.01;   // [m]
    double vel = 0.01;   // [m/s]
    double bias = 0.005; // [m]
};

struct TrackerConfig {
    MotionModel motion;
    ExtentModel extent;
    LikelihoodParams likelihood;
    InitialPrior prior;
    double essThresholdFraction = 0.5;
    JitterStd jitter;
    int particleCount = 5000;
    double minHeadingSpeed = 1e-3;  // below this, reuse the previous heading

    static TrackerConfig fromScenario(const ScenarioConfig& scenario);
};

/// Raised when every particle reaches zero posterior mass.
class EnsembleCollapseError : public std::runtime_error {
public:
    explicit EnsembleCollapseError(int step)
        : std::runtime_error("ensemble collapse at step " + std::to_string(step)), step_(step) {}
    int step() const { return step_; }

private:
    int step_;
};

ParticleEnsemble initEnsemble(const InitialPrior& prior, int count, std::mt19937_64& rng);

void predict(ParticleEnsemble& ens, const MotionModel& motion, std::mt19937_64& rng);

/// Generic weight update; the likelihood functor sees each particle's
/// state and oriented extent.
void updateWithLogLikelihood(ParticleEnsemble& ens,
                             const std::function<double(const AgentState&, const Mat2&)>& logLik,
                             const TrackerConfig& config);

/// Association-marginalized measurement update for one step.
void update(ParticleEnsemble& ens, const MeasurementSet& meas, const TrackerConfig& config,
            Mode mode);

/// Systematic resampling when ESS < threshold * count, followed by
/// regularization jitter. Returns whether resampling happened.
bool resampleIfNeeded(ParticleEnsemble& ens, double essThresholdFraction, const JitterStd& jitter,
                      std::mt19937_64& rng);

AgentState mmseEstimate(const ParticleEnsemble& ens);

/// Weighted covariance of the particle positions.
Mat2 weightedPositionCovariance(const ParticleEnsemble& ens);

struct TrackerOutput {
    std::vector<AgentState> estimates;
    std::vector<double> ess;
    std::vector<double> positionSpread;  // sqrt(trace of position covariance)
};

/// Sequential predict/update/resample/estimate over a measurement record.
TrackerOutput runFilter(const std::vector<MeasurementSet>& record, const TrackerConfig& config,
                        Mode mode, std::uint64_t seed);

}  // namespace apeot

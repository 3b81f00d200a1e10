#pragma once

#include <cstdint>
#include <random>

#include "apeot/likelihood.hpp"
#include "apeot/types.hpp"

namespace apeot {

/// Every constant of the simulated scene. Defaults reproduce the
/// reference scenario: four anchors on a 6 m square, one of them the
/// passive transmitter, and a 19 s track with two turns.
struct ScenarioConfig {
    std::vector<Anchor> anchors = {{0, {0.0, 0.0}, false},
                                   {1, {6.0, 0.0}, false},
                                   {2, {0.0, 6.0}, false},
                                   {3, {6.0, 6.0}, true}};
    int passiveTxAnchorId = 3;
    int numSteps = 190;
    double dt = 0.1;                 // [s]
    double semiAxisLong = 0.3;       // [m]
    double semiAxisShort = 0.2;      // [m]
    Vec2 bias{0.25, 0.1};            // [m]
    int olosStart = 80;              // first fully blocked step (1-based, inclusive)
    int olosEnd = 129;               // last fully blocked step
    double refAmplitudeDb = 40.0;    // LOS amplitude at 1 m
    double betaActive = 0.2;         // scatter dampening, active channel
    double betaPassive = 0.8;        // scatter dampening, passive channel
    double passiveGapDb = 10.0;      // calibration target below concurrent LOS
    double gamma = 2.0;              // detection threshold (linear)
    double muMeas = 5.0;             // mean object-related measurements per channel
    double muClutter = 10.0;         // mean clutter per channel
    double dMax = 30.0;              // [m]
    double rolloff = 0.6;
    double bandwidthHz = 5e8;
    std::vector<Vec2> waypoints = {{1.0, 1.0}, {1.0, 5.0}, {5.0, 5.0}, {5.0, 2.0}};
    double speed = 0.5;              // [m/s]
    double extentScale = 0.5;        // semi-axis to sqrt-eigenvalue factor
    bool includeTxSelfPassive = false;
    bool enableDistanceNoise = true;

    ExtentModel extentModel() const {
        return ExtentModel::fromSemiAxes(semiAxisLong, semiAxisShort, extentScale);
    }
    NoiseModel noiseModel() const { return {rmsBandwidth(rolloff, bandwidthHz), 299792458.0}; }
    bool isBlocked(int step) const { return step >= olosStart && step <= olosEnd; }
    const Anchor& anchorById(int id) const;

    /// Throws std::runtime_error naming the offending field.
    void validate() const;
};

/// True agent states and body orientations, one per step.
struct GroundTruth {
    std::vector<AgentState> states;
    std::vector<double> orientations;
};

/// Piecewise-constant-velocity track through the configured waypoints,
/// sampled at steps n = 1..numSteps (position at t = n*dt).
GroundTruth buildTrajectory(const ScenarioConfig& config);

/// Uniform draw from the solid ellipse described by the oriented extent.
/// axisToSigma relates semi-axes to sqrt-eigenvalues of the extent.
Vec2 sampleScatterOnEllipse(const Mat2& extent, double axisToSigma, std::mt19937_64& rng);

/// Sub-threshold and out-of-range rejections, for audit.
struct GenerationStats {
    std::uint64_t objectCandidates = 0;
    std::uint64_t objectRejected = 0;

    double rejectionRate() const {
        return objectCandidates == 0 ? 0.0
                                     : static_cast<double>(objectRejected) / objectCandidates;
    }
};

/// Owns the RNG stream of one realization and the calibrated passive
/// transmit power. Instances are independent; one instance is not
/// thread-safe.
class MeasurementGenerator {
public:
    MeasurementGenerator(const ScenarioConfig& config, std::uint64_t seed);

    /// Active channel of one anchor: LOS candidate (unless blocked),
    /// Poisson scatter candidates, Poisson clutter.
    std::vector<Measurement> generateActive(const AgentState& state, double theta, int anchorId,
                                            bool blocked);

    /// Passive channel of one (rx, tx) pair: Poisson scatter candidates
    /// plus clutter. txAnchorId must be the configured transmitter.
    std::vector<Measurement> generatePassive(const AgentState& state, double theta, int txAnchorId,
                                             int rxAnchorId);

    /// Poisson clutter, uniform in distance, truncated-Rayleigh amplitude.
    std::vector<Measurement> generateClutter(int rxAnchorId, int txAnchorId);

    /// All channels of step n (1-based).
    MeasurementSet generateStep(const GroundTruth& truth, int n);

    /// The full measurement record of one realization.
    std::vector<MeasurementSet> generateRecord(const GroundTruth& truth);

    const GenerationStats& stats() const { return stats_; }
    double passiveTxPowerDb() const { return passiveTxPowerDb_; }

    double losAmplitude(double distance) const;
    double activeScatterAmplitude(double distance) const;
    double passiveScatterAmplitude(double dTx, double dRx) const;

private:
    bool accept(double d, double u);
    void emitObject(std::vector<Measurement>& out, double trueDistance, double u, int rxId, int txId);

    ScenarioConfig config_;
    ExtentModel extent_;
    NoiseModel noise_;
    double passiveTxPowerDb_ = 0.0;
    std::mt19937_64 rng_;
    GenerationStats stats_;
};

}  // namespace apeot

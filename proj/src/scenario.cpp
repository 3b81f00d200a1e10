#include "apeot/scenario.hpp"

#include <cmath>
#include <numbers>

#include "apeot/geometry.hpp"

namespace apeot {

namespace {

double toDb(double linear) { return 20.0 * std::log10(linear); }
double fromDb(double db) { return std::pow(10.0, db / 20.0); }

struct Leg {
    Vec2 start;
    Vec2 dir;       // unit
    double fromArc; // arc length at leg start
    double length;
};

std::vector<Leg> buildLegs(const std::vector<Vec2>& waypoints) {
    std::vector<Leg> legs;
    double arc = 0.0;
    for (std::size_t i = 0; i + 1 < waypoints.size(); ++i) {
        const Vec2 delta = waypoints[i + 1] - waypoints[i];
        const double len = delta.norm();
        if (len <= 0.0) throw std::runtime_error("waypoints: consecutive duplicates");
        legs.push_back({waypoints[i], delta / len, arc, len});
        arc += len;
    }
    return legs;
}

}  // namespace

const Anchor& ScenarioConfig::anchorById(int id) const {
    for (const Anchor& a : anchors)
        if (a.id == id) return a;
    throw std::runtime_error("anchor id not found: " + std::to_string(id));
}

void ScenarioConfig::validate() const {
    if (numSteps <= 0) throw std::runtime_error("num_steps: must be positive");
    if (dt <= 0.0) throw std::runtime_error("dt: must be positive");
    if (gamma <= 0.0) throw std::runtime_error("gamma: must be positive");
    if (muMeas < 0.0) throw std::runtime_error("mu_meas: must be nonnegative");
    if (muClutter < 0.0) throw std::runtime_error("mu_clutter: must be nonnegative");
    if (speed <= 0.0) throw std::runtime_error("speed: must be positive");
    if (dMax <= 0.0) throw std::runtime_error("d_max: must be positive");
    if (semiAxisLong <= 0.0 || semiAxisShort <= 0.0)
        throw std::runtime_error("semi_axes: must be positive");
    if (rolloff < 0.0 || rolloff > 1.0) throw std::runtime_error("rolloff: must be in [0, 1]");
    if (bandwidthHz <= 0.0) throw std::runtime_error("bandwidth_hz: must be positive");
    if (anchors.size() < 2) throw std::runtime_error("anchors: need at least two");
    // channel lists are indexed by anchor id everywhere downstream
    for (std::size_t i = 0; i < anchors.size(); ++i)
        if (anchors[i].id != static_cast<int>(i))
            throw std::runtime_error("anchors: ids must equal their list position");
    (void)anchorById(passiveTxAnchorId);  // throws if unknown
    if (olosStart < 1 || olosEnd > numSteps || olosStart > olosEnd)
        throw std::runtime_error("olos_window: must lie inside [1, num_steps]");
    if (waypoints.size() < 2) throw std::runtime_error("waypoints: need at least two");

    const GroundTruth truth = buildTrajectory(*this);  // throws on path underrun
    const Anchor& tx = anchorById(passiveTxAnchorId);
    double maxBistatic = 0.0;
    for (const AgentState& s : truth.states) {
        const Vec2 c = s.bodyCenter();
        for (const Anchor& rx : anchors) {
            const double r = (c - tx.position).norm() + (c - rx.position).norm();
            maxBistatic = std::max(maxBistatic, r);
        }
    }
    if (dMax <= maxBistatic)
        throw std::runtime_error("d_max: must exceed the largest bistatic range along the trajectory");
}

GroundTruth buildTrajectory(const ScenarioConfig& config) {
    if (config.waypoints.size() < 2)
        throw std::runtime_error("buildTrajectory: need at least two waypoints");
    const std::vector<Leg> legs = buildLegs(config.waypoints);
    const double total = legs.back().fromArc + legs.back().length;
    const double budget = config.numSteps * config.dt * config.speed;
    if (total + 1e-9 < budget) throw std::runtime_error("trajectory underruns step count");

    GroundTruth truth;
    truth.states.reserve(config.numSteps);
    truth.orientations.reserve(config.numSteps);
    std::size_t leg = 0;
    for (int n = 1; n <= config.numSteps; ++n) {
        const double s = config.speed * n * config.dt;
        while (leg + 1 < legs.size() && s >= legs[leg].fromArc + legs[leg].length) ++leg;
        const Leg& l = legs[leg];
        AgentState state;
        state.p = l.start + l.dir * (s - l.fromArc);
        state.v = l.dir * config.speed;
        state.b = config.bias;
        truth.states.push_back(state);
        truth.orientations.push_back(orientationFromVelocity(state.v));
    }
    return truth;
}

Vec2 sampleScatterOnEllipse(const Mat2& extent, double axisToSigma, std::mt19937_64& rng) {
    Eigen::SelfAdjointEigenSolver<Mat2> eig;
    eig.computeDirect(extent);
    const Vec2 ev = eig.eigenvalues().cwiseMax(0.0);
    const double a0 = std::sqrt(ev(0)) / axisToSigma;
    const double a1 = std::sqrt(ev(1)) / axisToSigma;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double r = std::sqrt(unit(rng));
    const double phi = 2.0 * std::numbers::pi * unit(rng);
    const Vec2 onDisk{r * std::cos(phi), r * std::sin(phi)};
    return eig.eigenvectors() * Vec2{a0 * onDisk.x(), a1 * onDisk.y()};
}

MeasurementGenerator::MeasurementGenerator(const ScenarioConfig& config, std::uint64_t seed)
    : config_(config),
      extent_(config.extentModel()),
      noise_(config.noiseModel()),
      rng_(seed) {
    // Pin the passive transmit power so that body scatters received over
    // the bistatic channel sit passiveGapDb below the concurrent LOS
    // amplitude at the trajectory midpoint.
    const GroundTruth truth = buildTrajectory(config_);
    const AgentState& mid = truth.states[truth.states.size() / 2];
    const Anchor& tx = config_.anchorById(config_.passiveTxAnchorId);

    double losDbSum = 0.0;
    for (const Anchor& a : config_.anchors)
        losDbSum += config_.refAmplitudeDb - toDb((mid.p - a.position).norm());
    const double losDbMean = losDbSum / config_.anchors.size();

    const Vec2 c = mid.bodyCenter();
    const double dTx = (c - tx.position).norm();
    double pathDbSum = 0.0;
    int pairs = 0;
    for (const Anchor& rx : config_.anchors) {
        if (rx.id == tx.id && !config_.includeTxSelfPassive) continue;
        pathDbSum += toDb(dTx * (c - rx.position).norm());
        ++pairs;
    }
    const double pathDbMean = pairs > 0 ? pathDbSum / pairs : 0.0;
    passiveTxPowerDb_ = losDbMean - config_.passiveGapDb + pathDbMean - toDb(config_.betaPassive);
}

double MeasurementGenerator::losAmplitude(double distance) const {
    return fromDb(config_.refAmplitudeDb) / std::max(distance, 1e-9);
}

double MeasurementGenerator::activeScatterAmplitude(double distance) const {
    return fromDb(config_.refAmplitudeDb) * config_.betaActive / std::max(distance, 1e-9);
}

double MeasurementGenerator::passiveScatterAmplitude(double dTx, double dRx) const {
    return fromDb(passiveTxPowerDb_) * config_.betaPassive / std::max(dTx * dRx, 1e-12);
}

bool MeasurementGenerator::accept(double d, double u) {
    return u >= config_.gamma && d >= 0.0 && d <= config_.dMax;
}

void MeasurementGenerator::emitObject(std::vector<Measurement>& out, double trueDistance, double u,
                                      int rxId, int txId) {
    ++stats_.objectCandidates;
    double d = trueDistance;
    if (config_.enableDistanceNoise) {
        std::normal_distribution<double> gauss(0.0, distanceStd(u, noise_));
        d += gauss(rng_);
    }
    if (!accept(d, u)) {
        ++stats_.objectRejected;
        return;
    }
    out.push_back({d, u, rxId, txId});
}

std::vector<Measurement> MeasurementGenerator::generateActive(const AgentState& state, double theta,
                                                              int anchorId, bool blocked) {
    const Anchor& anchor = config_.anchorById(anchorId);
    std::vector<Measurement> out;

    if (!blocked) {
        const double d = losDelayDistance(state.p, anchor);
        emitObject(out, d, losAmplitude(d), anchorId, Measurement::kTxAgent);
    }

    const Mat2 x = orientedExtent(extent_, theta);
    std::poisson_distribution<int> count(config_.muMeas);
    const int scatters = config_.muMeas > 0.0 ? count(rng_) : 0;
    for (int i = 0; i < scatters; ++i) {
        const Vec2 q = sampleScatterOnEllipse(x, config_.extentScale, rng_);
        const double d = activeScatterDistance(state.p, state.b, q, anchor);
        emitObject(out, d, activeScatterAmplitude(d), anchorId, Measurement::kTxAgent);
    }

    const auto clutter = generateClutter(anchorId, Measurement::kTxAgent);
    out.insert(out.end(), clutter.begin(), clutter.end());
    return out;
}

std::vector<Measurement> MeasurementGenerator::generatePassive(const AgentState& state, double theta,
                                                               int txAnchorId, int rxAnchorId) {
    if (txAnchorId != config_.passiveTxAnchorId)
        throw std::invalid_argument("generatePassive: tx anchor is not the configured transmitter");
    const Anchor& tx = config_.anchorById(txAnchorId);
    const Anchor& rx = config_.anchorById(rxAnchorId);
    std::vector<Measurement> out;

    const Mat2 x = orientedExtent(extent_, theta);
    std::poisson_distribution<int> count(config_.muMeas);
    const int scatters = config_.muMeas > 0.0 ? count(rng_) : 0;
    for (int i = 0; i < scatters; ++i) {
        const Vec2 q = sampleScatterOnEllipse(x, config_.extentScale, rng_);
        const Vec2 s = state.p + state.b + q;
        const double dTx = (s - tx.position).norm();
        const double dRx = (s - rx.position).norm();
        emitObject(out, dTx + dRx, passiveScatterAmplitude(dTx, dRx), rxAnchorId, txAnchorId);
    }

    const auto clutter = generateClutter(rxAnchorId, txAnchorId);
    out.insert(out.end(), clutter.begin(), clutter.end());
    return out;
}

std::vector<Measurement> MeasurementGenerator::generateClutter(int rxAnchorId, int txAnchorId) {
    std::vector<Measurement> out;
    if (config_.muClutter <= 0.0) return out;
    std::poisson_distribution<int> count(config_.muClutter);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int n = count(rng_);
    out.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double d = unit(rng_) * config_.dMax;
        // unit-scale Rayleigh conditioned on exceeding the threshold
        const double tail = std::max(unit(rng_), 1e-300);
        const double u = std::sqrt(config_.gamma * config_.gamma - 2.0 * std::log(tail));
        out.push_back({d, u, rxAnchorId, txAnchorId});
    }
    return out;
}

MeasurementSet MeasurementGenerator::generateStep(const GroundTruth& truth, int n) {
    if (n < 1 || n > static_cast<int>(truth.states.size()))
        throw std::out_of_range("generateStep: step index out of range");
    const AgentState& state = truth.states[n - 1];
    const double theta = truth.orientations[n - 1];
    const bool blocked = config_.isBlocked(n);

    MeasurementSet set;
    set.timeIndex = n;
    set.active.reserve(config_.anchors.size());
    set.passive.reserve(config_.anchors.size());
    for (const Anchor& a : config_.anchors)
        set.active.push_back(generateActive(state, theta, a.id, blocked));
    for (const Anchor& rx : config_.anchors) {
        if (rx.id == config_.passiveTxAnchorId && !config_.includeTxSelfPassive) {
            set.passive.emplace_back();  // channel exists, transmitter does not listen to itself
            continue;
        }
        set.passive.push_back(generatePassive(state, theta, config_.passiveTxAnchorId, rx.id));
    }
    return set;
}

std::vector<MeasurementSet> MeasurementGenerator::generateRecord(const GroundTruth& truth) {
    std::vector<MeasurementSet> record;
    record.reserve(truth.states.size());
    for (int n = 1; n <= static_cast<int>(truth.states.size()); ++n)
        record.push_back(generateStep(truth, n));
    return record;
}

}  // namespace apeot

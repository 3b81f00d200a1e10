#include "apeot/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "apeot/geometry.hpp"

namespace apeot {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double logSumExp(const std::vector<double>& logw) {
    const double m = *std::max_element(logw.begin(), logw.end());
    if (!std::isfinite(m)) return m;
    double acc = 0.0;
    for (double lw : logw) acc += std::exp(lw - m);
    return m + std::log(acc);
}

}  // namespace

std::vector<double> ParticleEnsemble::normalizedWeights() const {
    const double lse = logSumExp(logWeights);
    std::vector<double> w(logWeights.size());
    if (!std::isfinite(lse)) {
        std::fill(w.begin(), w.end(), 1.0 / w.size());
        return w;
    }
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::exp(logWeights[i] - lse);
    return w;
}

double ParticleEnsemble::ess() const {
    const auto w = normalizedWeights();
    double sumsq = 0.0;
    for (double wi : w) sumsq += wi * wi;
    return 1.0 / sumsq;
}

Mat4 MotionModel::kinematicTransition() const {
    Mat4 a = Mat4::Identity();
    a(0, 2) = dt;
    a(1, 3) = dt;
    return a;
}

Eigen::Matrix<double, 4, 2> MotionModel::noiseGain() const {
    Eigen::Matrix<double, 4, 2> b = Eigen::Matrix<double, 4, 2>::Zero();
    b(0, 0) = 0.5 * dt * dt;
    b(1, 1) = 0.5 * dt * dt;
    b(2, 0) = dt;
    b(3, 1) = dt;
    return b;
}

Mat4 MotionModel::processNoise() const {
    const auto b = noiseGain();
    return b * (accelStd * accelStd) * b.transpose();
}

TrackerConfig TrackerConfig::fromScenario(const ScenarioConfig& scenario) {
    TrackerConfig cfg;
    cfg.motion.dt = scenario.dt;
    cfg.extent = scenario.extentModel();
    cfg.likelihood.anchors = scenario.anchors;
    cfg.likelihood.passiveTxAnchor = scenario.passiveTxAnchorId;
    cfg.likelihood.noise = scenario.noiseModel();
    // The tracker's association model never assumes fewer than one
    // expected object measurement (the LOS itself counts) nor a strictly
    // clutter-free detector, so degenerate scene rates are floored at 1.
    constexpr double kMinRate = 1.0;
    cfg.likelihood.assoc = {std::max(scenario.muMeas, kMinRate),
                            std::max(scenario.muClutter, kMinRate), 1.0 / scenario.dMax};

    const Vec2 dir = (scenario.waypoints.at(1) - scenario.waypoints.at(0)).normalized();
    cfg.prior.mean.p = scenario.waypoints.at(0);
    cfg.prior.mean.v = dir * scenario.speed;
    cfg.prior.mean.b = Vec2::Zero();
    return cfg;
}

ParticleEnsemble initEnsemble(const InitialPrior& prior, int count, std::mt19937_64& rng) {
    if (count < 1) throw std::invalid_argument("initEnsemble: need at least one particle");
    ParticleEnsemble ens;
    ens.states.resize(count);
    ens.logWeights.assign(count, 0.0);
    ens.orientations.resize(count);

    const double fallbackTheta =
        prior.mean.v.norm() > 0.0 ? orientationFromVelocity(prior.mean.v) : 0.0;
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int i = 0; i < count; ++i) {
        AgentState& s = ens.states[i];
        s.p = prior.mean.p + prior.posStd * Vec2{gauss(rng), gauss(rng)};
        s.v = prior.mean.v + prior.velStd * Vec2{gauss(rng), gauss(rng)};
        s.b = prior.mean.b + prior.biasStd * Vec2{gauss(rng), gauss(rng)};
        ens.orientations[i] = s.v.norm() > 1e-3 ? orientationFromVelocity(s.v) : fallbackTheta;
    }
    return ens;
}

void predict(ParticleEnsemble& ens, const MotionModel& motion, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double dt = motion.dt;
    for (AgentState& s : ens.states) {
        const Vec2 w = motion.accelStd * Vec2{gauss(rng), gauss(rng)};
        s.p += s.v * dt + 0.5 * dt * dt * w;
        s.v += dt * w;
        s.b += motion.biasStd * Vec2{gauss(rng), gauss(rng)};
    }
}

void updateWithLogLikelihood(ParticleEnsemble& ens,
                             const std::function<double(const AgentState&, const Mat2&)>& logLik,
                             const TrackerConfig& config) {
    bool anyFinite = false;
    for (std::size_t i = 0; i < ens.size(); ++i) {
        const AgentState& s = ens.states[i];
        if (s.v.norm() >= config.minHeadingSpeed) ens.orientations[i] = orientationFromVelocity(s.v);
        const Mat2 x = orientedExtent(config.extent, ens.orientations[i]);
        ens.logWeights[i] += logLik(s, x);
        anyFinite = anyFinite || std::isfinite(ens.logWeights[i]);
    }
    if (!anyFinite) throw EnsembleCollapseError(0);
    // re-center to keep log weights bounded over long runs
    const double m = *std::max_element(ens.logWeights.begin(), ens.logWeights.end());
    for (double& lw : ens.logWeights) lw -= m;
}

void update(ParticleEnsemble& ens, const MeasurementSet& meas, const TrackerConfig& config,
            Mode mode) {
    updateWithLogLikelihood(
        ens,
        [&](const AgentState& s, const Mat2& x) {
            return stepLogLikelihood(s, x, meas, config.likelihood, mode);
        },
        config);
}

bool resampleIfNeeded(ParticleEnsemble& ens, double essThresholdFraction, const JitterStd& jitter,
                      std::mt19937_64& rng) {
    const std::size_t count = ens.size();
    const auto w = ens.normalizedWeights();
    double sumsq = 0.0;
    for (double wi : w) sumsq += wi * wi;
    const double ess = 1.0 / sumsq;
    if (ess >= essThresholdFraction * count) return false;

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double step = 1.0 / count;
    double pointer = unit(rng) * step;
    std::vector<AgentState> states(count);
    std::vector<double> orientations(count);
    double cumulative = w[0];
    std::size_t src = 0;
    for (std::size_t i = 0; i < count; ++i) {
        while (cumulative < pointer && src + 1 < count) cumulative += w[++src];
        states[i] = ens.states[src];
        orientations[i] = ens.orientations[src];
        pointer += step;
    }
    ens.states = std::move(states);
    ens.orientations = std::move(orientations);
    ens.logWeights.assign(count, 0.0);

    if (jitter.pos > 0.0 || jitter.vel > 0.0 || jitter.bias > 0.0) {
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (AgentState& s : ens.states) {
            s.p += jitter.pos * Vec2{gauss(rng), gauss(rng)};
            s.v += jitter.vel * Vec2{gauss(rng), gauss(rng)};
            s.b += jitter.bias * Vec2{gauss(rng), gauss(rng)};
        }
    }
    return true;
}

AgentState mmseEstimate(const ParticleEnsemble& ens) {
    const auto w = ens.normalizedWeights();
    AgentState mean;
    for (std::size_t i = 0; i < ens.size(); ++i) {
        mean.p += w[i] * ens.states[i].p;
        mean.v += w[i] * ens.states[i].v;
        mean.b += w[i] * ens.states[i].b;
    }
    return mean;
}

Mat2 weightedPositionCovariance(const ParticleEnsemble& ens) {
    const auto w = ens.normalizedWeights();
    Vec2 mean = Vec2::Zero();
    for (std::size_t i = 0; i < ens.size(); ++i) mean += w[i] * ens.states[i].p;
    Mat2 cov = Mat2::Zero();
    for (std::size_t i = 0; i < ens.size(); ++i) {
        const Vec2 r = ens.states[i].p - mean;
        cov += w[i] * r * r.transpose();
    }
    return cov;
}

TrackerOutput runFilter(const std::vector<MeasurementSet>& record, const TrackerConfig& config,
                        Mode mode, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    ParticleEnsemble ens = initEnsemble(config.prior, config.particleCount, rng);

    TrackerOutput out;
    out.estimates.reserve(record.size());
    out.ess.reserve(record.size());
    out.positionSpread.reserve(record.size());

    for (std::size_t n = 0; n < record.size(); ++n) {
        predict(ens, config.motion, rng);
        try {
            update(ens, record[n], config, mode);
        } catch (const EnsembleCollapseError&) {
            throw EnsembleCollapseError(static_cast<int>(n) + 1);
        }
        out.estimates.push_back(mmseEstimate(ens));
        out.ess.push_back(ens.ess());
        out.positionSpread.push_back(std::sqrt(weightedPositionCovariance(ens).trace()));
        resampleIfNeeded(ens, config.essThresholdFraction, config.jitter, rng);
    }
    return out;
}

}  // namespace apeot

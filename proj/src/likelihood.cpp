#include "apeot/likelihood.hpp"

#include <cmath>
#include <numbers>

namespace apeot {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double gaussPdf(double x, double mean, double var) {
    const double r = x - mean;
    return std::exp(-0.5 * r * r / var) / std::sqrt(kTwoPi * var);
}

/// Raised-cosine energy spectrum |S(f)|^2 of a root-raised-cosine pulse,
/// unit passband, two-sided flat width B at rolloff 0.
double rcSpectrum(double f, double rolloff, double bw) {
    const double fa = std::abs(f);
    const double flat = (1.0 - rolloff) * bw / 2.0;
    const double edge = (1.0 + rolloff) * bw / 2.0;
    if (fa <= flat) return 1.0;
    if (fa >= edge || rolloff <= 0.0) return 0.0;
    return 0.5 * (1.0 + std::cos(std::numbers::pi / (rolloff * bw) * (fa - flat)));
}

double simpson(double a, double b, int n, auto&& fn) {
    // n must be even
    const double h = (b - a) / n;
    double acc = fn(a) + fn(b);
    for (int i = 1; i < n; ++i) acc += fn(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

}  // namespace

double rmsBandwidth(double rolloff, double bandwidthHz) {
    if (rolloff < 0.0 || rolloff > 1.0)
        throw std::invalid_argument("rmsBandwidth: rolloff must be in [0, 1]");
    if (bandwidthHz <= 0.0) throw std::invalid_argument("rmsBandwidth: bandwidth must be positive");
    const double edge = (1.0 + rolloff) * bandwidthHz / 2.0;
    const int n = 1 << 14;
    // spectrum is even, integrate one side
    const double energy =
        simpson(0.0, edge, n, [&](double f) { return rcSpectrum(f, rolloff, bandwidthHz); });
    const double second =
        simpson(0.0, edge, n, [&](double f) { return f * f * rcSpectrum(f, rolloff, bandwidthHz); });
    return std::sqrt(second / energy);
}

double distanceStd(double u, const NoiseModel& noise) {
    if (u <= 0.0) throw std::invalid_argument("distanceStd: amplitude must be positive");
    return noise.speedOfLight / (2.0 * std::numbers::sqrt2 * std::numbers::pi * noise.betaBw * u);
}

SigmaPoints makeSigmaPoints(const Mat2& extent, const UtConfig& ut) {
    const double lambda = ut.lambda();
    const double scale = 2.0 + lambda;  // L + lambda
    SigmaPoints sp;
    sp.offset[0] = Vec2::Zero();
    sp.wMean[0] = lambda / scale;
    sp.wCov[0] = lambda / scale + (1.0 - ut.alpha * ut.alpha + ut.beta);
    for (int i = 1; i < 5; ++i) {
        sp.wMean[i] = 0.5 / scale;
        sp.wCov[i] = 0.5 / scale;
    }
    // closed-form 2x2 symmetric eigendecomposition; robust to PSD-singular X
    Eigen::SelfAdjointEigenSolver<Mat2> eig;
    eig.computeDirect(extent);
    const Vec2 ev = eig.eigenvalues().cwiseMax(0.0);
    const Mat2 vecs = eig.eigenvectors();
    const Vec2 c0 = vecs.col(0) * std::sqrt(scale * ev(0));
    const Vec2 c1 = vecs.col(1) * std::sqrt(scale * ev(1));
    sp.offset[1] = c0;
    sp.offset[2] = c1;
    sp.offset[3] = -c0;
    sp.offset[4] = -c1;
    return sp;
}

namespace {

double utVariance(const SigmaPoints& sp, auto&& rangeFn) {
    std::array<double, 5> t;
    double mean = 0.0;
    for (int i = 0; i < 5; ++i) {
        t[i] = rangeFn(sp.offset[i]);
        mean += sp.wMean[i] * t[i];
    }
    double var = 0.0;
    for (int i = 0; i < 5; ++i) {
        const double r = t[i] - mean;
        var += sp.wCov[i] * r * r;
    }
    return var < 0.0 ? 0.0 : var;
}

}  // namespace

double utScatterVarianceActive(const Vec2& bodyCenter, const SigmaPoints& sp, const Anchor& anchor) {
    return utVariance(sp, [&](const Vec2& q) { return (bodyCenter + q - anchor.position).norm(); });
}

double utScatterVariancePassive(const Vec2& bodyCenter, const SigmaPoints& sp, const Anchor& txAnchor,
                                const Anchor& rxAnchor) {
    return utVariance(sp, [&](const Vec2& q) {
        const Vec2 s = bodyCenter + q;
        return (s - txAnchor.position).norm() + (s - rxAnchor.position).norm();
    });
}

double utScatterVarianceActive(const Vec2& bodyCenter, const Mat2& extent, const Anchor& anchor,
                               const UtConfig& ut) {
    return utScatterVarianceActive(bodyCenter, makeSigmaPoints(extent, ut), anchor);
}

double utScatterVariancePassive(const Vec2& bodyCenter, const Mat2& extent, const Anchor& txAnchor,
                                const Anchor& rxAnchor, const UtConfig& ut) {
    return utScatterVariancePassive(bodyCenter, makeSigmaPoints(extent, ut), txAnchor, rxAnchor);
}

double losLhf(const Measurement& z, const AgentState& state, const Anchor& anchor,
              const NoiseModel& noise) {
    const double sigma = distanceStd(z.u, noise);
    return gaussPdf(z.d, (state.p - anchor.position).norm(), sigma * sigma);
}

double activeScatterLhf(const Measurement& z, const AgentState& state, const Mat2& extent,
                        const Anchor& anchor, const NoiseModel& noise, const UtConfig& ut) {
    const double sigma = distanceStd(z.u, noise);
    const double spread = utScatterVarianceActive(state.bodyCenter(), extent, anchor, ut);
    return gaussPdf(z.d, (state.bodyCenter() - anchor.position).norm(), sigma * sigma + spread);
}

double passiveScatterLhf(const Measurement& z, const AgentState& state, const Mat2& extent,
                         const Anchor& txAnchor, const Anchor& rxAnchor, const NoiseModel& noise,
                         const UtConfig& ut) {
    const double sigma = distanceStd(z.u, noise);
    const double spread = utScatterVariancePassive(state.bodyCenter(), extent, txAnchor, rxAnchor, ut);
    const Vec2 c = state.bodyCenter();
    const double mean = (c - txAnchor.position).norm() + (c - rxAnchor.position).norm();
    return gaussPdf(z.d, mean, sigma * sigma + spread);
}

double activeModel(const Measurement& z, const AgentState& state, const Mat2& extent,
                   const Anchor& anchor, const NoiseModel& noise, const UtConfig& ut) {
    return losLhf(z, state, anchor, noise) + activeScatterLhf(z, state, extent, anchor, noise, ut);
}

double pseudoLikelihood(const Measurement& z, const AgentState& state, const Mat2& extent,
                        const LikelihoodParams& params, bool objectRelated) {
    if (!objectRelated) return 1.0;
    const Anchor& rx = params.anchors.at(static_cast<std::size_t>(z.rxAnchor));
    double f;
    if (z.isActive()) {
        f = activeModel(z, state, extent, rx, params.noise, params.ut);
    } else {
        const Anchor& tx = params.anchors.at(static_cast<std::size_t>(z.txAnchor));
        f = passiveScatterLhf(z, state, extent, tx, rx, params.noise, params.ut);
    }
    return params.assoc.muMeas * f / (params.assoc.muClutter * params.assoc.clutterDensity);
}

double stepLogLikelihood(const AgentState& state, const Mat2& extent, const MeasurementSet& meas,
                         const LikelihoodParams& params, Mode mode) {
    const double invClutter = 1.0 / (params.assoc.muClutter * params.assoc.clutterDensity);
    const SigmaPoints sp = makeSigmaPoints(extent, params.ut);
    const Vec2 center = state.bodyCenter();
    double logw = 0.0;

    for (std::size_t j = 0; j < meas.active.size(); ++j) {
        const auto& channel = meas.active[j];
        const Anchor& anchor = params.anchors.at(j);
        const double losRange = (state.p - anchor.position).norm();

        if (mode == Mode::APda) {
            // at-most-one association: (1 - Pd) + sum_l Pd f_LOS(z_l) / (mu_c f_c)
            double sum = 1.0 - params.detectionProb;
            for (const Measurement& z : channel) {
                const double sigma = distanceStd(z.u, params.noise);
                sum += params.detectionProb * gaussPdf(z.d, losRange, sigma * sigma) * invClutter;
            }
            logw += std::log(sum);
            continue;
        }

        const double scatterRange = (center - anchor.position).norm();
        const double spread = channel.empty() ? 0.0 : utScatterVarianceActive(center, sp, anchor);
        for (const Measurement& z : channel) {
            const double s2 = [&] {
                const double s = distanceStd(z.u, params.noise);
                return s * s;
            }();
            const double f = gaussPdf(z.d, losRange, s2) + gaussPdf(z.d, scatterRange, s2 + spread);
            logw += std::log1p(params.assoc.muMeas * f * invClutter);
        }
    }

    if (mode != Mode::ApEopda) return logw;

    const Anchor& tx = params.anchors.at(static_cast<std::size_t>(params.passiveTxAnchor));
    for (std::size_t j = 0; j < meas.passive.size(); ++j) {
        const auto& channel = meas.passive[j];
        if (channel.empty()) continue;
        const Anchor& rx = params.anchors.at(j);
        const double bistaticRange = (center - tx.position).norm() + (center - rx.position).norm();
        const double spread = utScatterVariancePassive(center, sp, tx, rx);
        for (const Measurement& z : channel) {
            const double sigma = distanceStd(z.u, params.noise);
            const double f = gaussPdf(z.d, bistaticRange, sigma * sigma + spread);
            logw += std::log1p(params.assoc.muMeas * f * invClutter);
        }
    }
    return logw;
}

double stepLikelihood(const AgentState& state, const Mat2& extent, const MeasurementSet& meas,
                      const LikelihoodParams& params, Mode mode) {
    return std::exp(stepLogLikelihood(state, extent, meas, params, mode));
}

}  // namespace apeot

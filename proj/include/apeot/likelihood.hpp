#pragma once

#include <array>

#include "apeot/types.hpp"

namespace apeot {

/// Delay-estimation noise floor: sigma_d^2 = c^2 / (8 pi^2 betaBw^2 u^2).
struct NoiseModel {
    double betaBw = 0.0;             // RMS bandwidth [Hz]
    double speedOfLight = 299792458.0;  // [m/s]
};

/// Scaled unscented transform parameters (state dimension fixed at 2).
struct UtConfig {
    double alpha = 1.0;
    double beta = 0.0;
    double kappa = 1.0;

    double lambda() const {
        constexpr double L = 2.0;
        return alpha * alpha * (L + kappa) - L;
    }
};

/// Poisson rates and clutter density entering the association factors.
struct AssociationParams {
    double muMeas = 5.0;         // mean object-related measurements per channel
    double muClutter = 10.0;     // mean clutter per channel
    double clutterDensity = 0.0; // f_c, uniform over distance [1/m]
};

enum class Mode { APda, AEopda, ApEopda };

/// Everything a per-step likelihood evaluation needs besides the state.
struct LikelihoodParams {
    std::vector<Anchor> anchors;
    int passiveTxAnchor = -1;
    NoiseModel noise;
    UtConfig ut;
    AssociationParams assoc;
    double detectionProb = 0.95;  // LOS detection probability, A-PDA only
};

/// RMS bandwidth of a root-raised-cosine pulse, computed by quadrature
/// of the raised-cosine energy spectrum. `bandwidthHz` is the two-sided
/// width of the flat spectrum at rolloff 0.
double rmsBandwidth(double rolloff, double bandwidthHz);

/// sigma_d(u) = c / (2 sqrt(2) pi betaBw u). Throws for u <= 0.
double distanceStd(double u, const NoiseModel& noise);

/// Sigma points of N(0, X) with their mean/covariance weights.
struct SigmaPoints {
    std::array<Vec2, 5> offset;
    std::array<double, 5> wMean;
    std::array<double, 5> wCov;
};

SigmaPoints makeSigmaPoints(const Mat2& extent, const UtConfig& ut);

/// Variance of the sigma points pushed through the active (one-leg) or
/// passive (two-leg) range function about the body center.
double utScatterVarianceActive(const Vec2& bodyCenter, const Mat2& extent, const Anchor& anchor,
                               const UtConfig& ut);
double utScatterVariancePassive(const Vec2& bodyCenter, const Mat2& extent, const Anchor& txAnchor,
                                const Anchor& rxAnchor, const UtConfig& ut);
double utScatterVarianceActive(const Vec2& bodyCenter, const SigmaPoints& sp, const Anchor& anchor);
double utScatterVariancePassive(const Vec2& bodyCenter, const SigmaPoints& sp, const Anchor& txAnchor,
                                const Anchor& rxAnchor);

/// LOS LHF: Gaussian in z.d about ||p - anchor|| with Fisher variance.
double losLhf(const Measurement& z, const AgentState& state, const Anchor& anchor,
              const NoiseModel& noise);

/// Active scattering LHF: Gaussian about the body-center range with the
/// UT spread variance added to the noise floor.
double activeScatterLhf(const Measurement& z, const AgentState& state, const Mat2& extent,
                        const Anchor& anchor, const NoiseModel& noise, const UtConfig& ut);

/// Passive scattering LHF: Gaussian about the bistatic body-center range.
double passiveScatterLhf(const Measurement& z, const AgentState& state, const Mat2& extent,
                         const Anchor& txAnchor, const Anchor& rxAnchor, const NoiseModel& noise,
                         const UtConfig& ut);

/// Active measurement model: LOS LHF plus active scattering LHF.
double activeModel(const Measurement& z, const AgentState& state, const Mat2& extent,
                   const Anchor& anchor, const NoiseModel& noise, const UtConfig& ut);

/// Association factor g(z | x, X, a): the likelihood ratio for an
/// object-related measurement (a = 1), or exactly 1 (a = 0).
double pseudoLikelihood(const Measurement& z, const AgentState& state, const Mat2& extent,
                        const LikelihoodParams& params, bool objectRelated);

/// Log of the per-step association-marginalized weight factor for one
/// state hypothesis. The extent is the oriented shape at the hypothesis
/// orientation.
double stepLogLikelihood(const AgentState& state, const Mat2& extent, const MeasurementSet& meas,
                         const LikelihoodParams& params, Mode mode);

/// Linear-domain convenience wrapper; overflows for large measurement sets.
double stepLikelihood(const AgentState& state, const Mat2& extent, const MeasurementSet& meas,
                      const LikelihoodParams& params, Mode mode);

}  // namespace apeot

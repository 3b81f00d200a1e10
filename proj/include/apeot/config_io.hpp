#pragma once

#include <string>

#include "apeot/tracker.hpp"

namespace apeot {

/// Filter-side knobs that are not scene constants.
struct TrackerParams {
    double accelStd = 3.0;
    double biasStd = 0.1;
    double detectionProb = 0.95;
    double essThreshold = 0.5;
    JitterStd jitter;
    double initPosStd = 0.3;
    double initVelStd = 0.3;
    double initBiasStd = 0.3;
    double minHeadingSpeed = 1e-3;
    UtConfig ut;
};

/// One experiment: scene, estimator variants, Monte Carlo size, seeding.
struct RunSpec {
    ScenarioConfig scenario;
    TrackerParams tracker;
    std::vector<Mode> modes = {Mode::APda, Mode::AEopda, Mode::ApEopda};
    int realizations = 500;
    int particles = 5000;
    std::uint64_t baseSeed = 1;
    std::string outputDir = "results";
    int threads = 0;  // 0 = all hardware threads

    void validate() const;

    /// Assembled tracker configuration for runFilter.
    TrackerConfig trackerConfig() const;
};

const char* modeName(Mode mode);
Mode parseMode(const std::string& name);

/// Flat `key = value` config text. Unknown keys, malformed values and
/// invariant violations raise std::runtime_error naming key and line.
RunSpec parseConfig(const std::string& text);
RunSpec loadConfig(const std::string& path);
std::string serializeConfig(const RunSpec& spec);
void saveConfig(const RunSpec& spec, const std::string& path);

}  // namespace apeot

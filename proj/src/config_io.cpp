#include "apeot/config_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace apeot {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> splitList(const std::string& s) {
    std::vector<std::string> items;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) items.push_back(item);
    }
    return items;
}

struct LineError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

double parseNumber(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &used);
    } catch (const std::exception&) {
        throw LineError("key '" + key + "': expected a number, got '" + value + "'");
    }
    if (used != value.size())
        throw LineError("key '" + key + "': trailing characters in '" + value + "'");
    return v;
}

long parseInt(const std::string& key, const std::string& value) {
    const double v = parseNumber(key, value);
    const long i = static_cast<long>(v);
    if (static_cast<double>(i) != v) throw LineError("key '" + key + "': expected an integer");
    return i;
}

bool parseBool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw LineError("key '" + key + "': expected true/false");
}

std::vector<double> parseNumberList(const std::string& key, const std::string& value) {
    std::vector<double> out;
    for (const auto& item : splitList(value)) out.push_back(parseNumber(key, item));
    return out;
}

std::vector<Vec2> parseVec2List(const std::string& key, const std::string& value) {
    const auto nums = parseNumberList(key, value);
    if (nums.size() % 2 != 0)
        throw LineError("key '" + key + "': expected an even number of coordinates");
    std::vector<Vec2> out;
    for (std::size_t i = 0; i < nums.size(); i += 2) out.push_back({nums[i], nums[i + 1]});
    return out;
}

}  // namespace

const char* modeName(Mode mode) {
    switch (mode) {
        case Mode::APda: return "a-pda";
        case Mode::AEopda: return "a-eopda";
        case Mode::ApEopda: return "ap-eopda";
    }
    throw std::logic_error("modeName: unknown mode");
}

Mode parseMode(const std::string& name) {
    if (name == "a-pda") return Mode::APda;
    if (name == "a-eopda") return Mode::AEopda;
    if (name == "ap-eopda") return Mode::ApEopda;
    throw std::runtime_error("unknown mode '" + name + "' (expected a-pda, a-eopda or ap-eopda)");
}

void RunSpec::validate() const {
    scenario.validate();
    if (realizations < 1) throw std::runtime_error("realizations: must be at least 1");
    if (particles < 1) throw std::runtime_error("particles: must be at least 1");
    if (modes.empty()) throw std::runtime_error("modes: must not be empty");
    if (tracker.essThreshold <= 0.0 || tracker.essThreshold > 1.0)
        throw std::runtime_error("ess_threshold: must be in (0, 1]");
    if (tracker.detectionProb <= 0.0 || tracker.detectionProb > 1.0)
        throw std::runtime_error("detection_prob: must be in (0, 1]");
    if (tracker.accelStd < 0.0) throw std::runtime_error("accel_std: must be nonnegative");
    if (tracker.biasStd < 0.0) throw std::runtime_error("bias_std: must be nonnegative");
    if (tracker.initPosStd < 0.0 || tracker.initVelStd < 0.0 || tracker.initBiasStd < 0.0)
        throw std::runtime_error("init std devs: must be nonnegative");
    if (tracker.ut.alpha <= 0.0) throw std::runtime_error("ut_alpha: must be positive");
    if (threads < 0) throw std::runtime_error("threads: must be nonnegative");
}

TrackerConfig RunSpec::trackerConfig() const {
    TrackerConfig cfg = TrackerConfig::fromScenario(scenario);
    cfg.motion.accelStd = tracker.accelStd;
    cfg.motion.biasStd = tracker.biasStd;
    cfg.likelihood.detectionProb = tracker.detectionProb;
    cfg.likelihood.ut = tracker.ut;
    cfg.prior.posStd = tracker.initPosStd;
    cfg.prior.velStd = tracker.initVelStd;
    cfg.prior.biasStd = tracker.initBiasStd;
    cfg.essThresholdFraction = tracker.essThreshold;
    cfg.jitter = tracker.jitter;
    cfg.particleCount = particles;
    cfg.minHeadingSpeed = tracker.minHeadingSpeed;
    return cfg;
}

RunSpec parseConfig(const std::string& text) {
    RunSpec spec;
    std::istringstream in(text);
    std::string line;
    int lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("line " + std::to_string(lineNo) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        ScenarioConfig& sc = spec.scenario;
        TrackerParams& tp = spec.tracker;
        try {
            if (key == "anchors") {
                const auto pos = parseVec2List(key, value);
                sc.anchors.clear();
                for (std::size_t i = 0; i < pos.size(); ++i)
                    sc.anchors.push_back({static_cast<int>(i), pos[i], false});
            } else if (key == "passive_tx_anchor") {
                sc.passiveTxAnchorId = static_cast<int>(parseInt(key, value));
            } else if (key == "num_steps") {
                sc.numSteps = static_cast<int>(parseInt(key, value));
            } else if (key == "dt") {
                sc.dt = parseNumber(key, value);
            } else if (key == "semi_axes") {
                const auto v = parseNumberList(key, value);
                if (v.size() != 2) throw LineError("key 'semi_axes': expected two numbers");
                sc.semiAxisLong = v[0];
                sc.semiAxisShort = v[1];
            } else if (key == "bias") {
                const auto v = parseVec2List(key, value);
                if (v.size() != 1) throw LineError("key 'bias': expected one coordinate pair");
                sc.bias = v[0];
            } else if (key == "olos_window") {
                const auto v = parseNumberList(key, value);
                if (v.size() != 2) throw LineError("key 'olos_window': expected two integers");
                sc.olosStart = static_cast<int>(v[0]);
                sc.olosEnd = static_cast<int>(v[1]);
            } else if (key == "ref_amplitude_db") {
                sc.refAmplitudeDb = parseNumber(key, value);
            } else if (key == "beta_active") {
                sc.betaActive = parseNumber(key, value);
            } else if (key == "beta_passive") {
                sc.betaPassive = parseNumber(key, value);
            } else if (key == "passive_gap_db") {
                sc.passiveGapDb = parseNumber(key, value);
            } else if (key == "gamma") {
                sc.gamma = parseNumber(key, value);
            } else if (key == "mu_meas") {
                sc.muMeas = parseNumber(key, value);
            } else if (key == "mu_clutter") {
                sc.muClutter = parseNumber(key, value);
            } else if (key == "d_max") {
                sc.dMax = parseNumber(key, value);
            } else if (key == "rolloff") {
                sc.rolloff = parseNumber(key, value);
            } else if (key == "bandwidth_hz") {
                sc.bandwidthHz = parseNumber(key, value);
            } else if (key == "waypoints") {
                sc.waypoints = parseVec2List(key, value);
            } else if (key == "speed") {
                sc.speed = parseNumber(key, value);
            } else if (key == "extent_scale") {
                sc.extentScale = parseNumber(key, value);
            } else if (key == "include_tx_self_passive") {
                sc.includeTxSelfPassive = parseBool(key, value);
            } else if (key == "enable_distance_noise") {
                sc.enableDistanceNoise = parseBool(key, value);
            } else if (key == "accel_std") {
                tp.accelStd = parseNumber(key, value);
            } else if (key == "bias_std") {
                tp.biasStd = parseNumber(key, value);
            } else if (key == "detection_prob") {
                tp.detectionProb = parseNumber(key, value);
            } else if (key == "ess_threshold") {
                tp.essThreshold = parseNumber(key, value);
            } else if (key == "jitter") {
                const auto v = parseNumberList(key, value);
                if (v.size() != 3) throw LineError("key 'jitter': expected pos, vel, bias stds");
                tp.jitter = {v[0], v[1], v[2]};
            } else if (key == "init_pos_std") {
                tp.initPosStd = parseNumber(key, value);
            } else if (key == "init_vel_std") {
                tp.initVelStd = parseNumber(key, value);
            } else if (key == "init_bias_std") {
                tp.initBiasStd = parseNumber(key, value);
            } else if (key == "min_heading_speed") {
                tp.minHeadingSpeed = parseNumber(key, value);
            } else if (key == "ut_alpha") {
                tp.ut.alpha = parseNumber(key, value);
            } else if (key == "ut_beta") {
                tp.ut.beta = parseNumber(key, value);
            } else if (key == "ut_kappa") {
                tp.ut.kappa = parseNumber(key, value);
            } else if (key == "modes") {
                spec.modes.clear();
                for (const auto& name : splitList(value)) spec.modes.push_back(parseMode(name));
            } else if (key == "realizations") {
                spec.realizations = static_cast<int>(parseInt(key, value));
            } else if (key == "particles") {
                spec.particles = static_cast<int>(parseInt(key, value));
            } else if (key == "base_seed") {
                spec.baseSeed = static_cast<std::uint64_t>(parseInt(key, value));
            } else if (key == "output_dir") {
                spec.outputDir = value;
            } else if (key == "threads") {
                spec.threads = static_cast<int>(parseInt(key, value));
            } else {
                throw LineError("unknown key '" + key + "'");
            }
        } catch (const LineError& e) {
            throw std::runtime_error("line " + std::to_string(lineNo) + ": " + e.what());
        }
    }
    spec.validate();
    return spec;
}

RunSpec loadConfig(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parseConfig(buffer.str());
}

std::string serializeConfig(const RunSpec& spec) {
    const ScenarioConfig& sc = spec.scenario;
    const TrackerParams& tp = spec.tracker;
    std::ostringstream out;
    out << "anchors = ";
    for (std::size_t i = 0; i < sc.anchors.size(); ++i)
        out << (i ? ", " : "") << fmt(sc.anchors[i].position.x()) << ","
            << fmt(sc.anchors[i].position.y());
    out << "\n";
    out << "passive_tx_anchor = " << sc.passiveTxAnchorId << "\n";
    out << "num_steps = " << sc.numSteps << "\n";
    out << "dt = " << fmt(sc.dt) << "\n";
    out << "semi_axes = " << fmt(sc.semiAxisLong) << ", " << fmt(sc.semiAxisShort) << "\n";
    out << "bias = " << fmt(sc.bias.x()) << ", " << fmt(sc.bias.y()) << "\n";
    out << "olos_window = " << sc.olosStart << ", " << sc.olosEnd << "\n";
    out << "ref_amplitude_db = " << fmt(sc.refAmplitudeDb) << "\n";
    out << "beta_active = " << fmt(sc.betaActive) << "\n";
    out << "beta_passive = " << fmt(sc.betaPassive) << "\n";
    out << "passive_gap_db = " << fmt(sc.passiveGapDb) << "\n";
    out << "gamma = " << fmt(sc.gamma) << "\n";
    out << "mu_meas = " << fmt(sc.muMeas) << "\n";
    out << "mu_clutter = " << fmt(sc.muClutter) << "\n";
    out << "d_max = " << fmt(sc.dMax) << "\n";
    out << "rolloff = " << fmt(sc.rolloff) << "\n";
    out << "bandwidth_hz = " << fmt(sc.bandwidthHz) << "\n";
    out << "waypoints = ";
    for (std::size_t i = 0; i < sc.waypoints.size(); ++i)
        out << (i ? ", " : "") << fmt(sc.waypoints[i].x()) << "," << fmt(sc.waypoints[i].y());
    out << "\n";
    out << "speed = " << fmt(sc.speed) << "\n";
    out << "extent_scale = " << fmt(sc.extentScale) << "\n";
    out << "include_tx_self_passive = " << (sc.includeTxSelfPassive ? "true" : "false") << "\n";
    out << "enable_distance_noise = " << (sc.enableDistanceNoise ? "true" : "false") << "\n";
    out << "accel_std = " << fmt(tp.accelStd) << "\n";
    out << "bias_std = " << fmt(tp.biasStd) << "\n";
    out << "detection_prob = " << fmt(tp.detectionProb) << "\n";
    out << "ess_threshold = " << fmt(tp.essThreshold) << "\n";
    out << "jitter = " << fmt(tp.jitter.pos) << ", " << fmt(tp.jitter.vel) << ", "
        << fmt(tp.jitter.bias) << "\n";
    out << "init_pos_std = " << fmt(tp.initPosStd) << "\n";
    out << "init_vel_std = " << fmt(tp.initVelStd) << "\n";
    out << "init_bias_std = " << fmt(tp.initBiasStd) << "\n";
    out << "min_heading_speed = " << fmt(tp.minHeadingSpeed) << "\n";
    out << "ut_alpha = " << fmt(tp.ut.alpha) << "\n";
    out << "ut_beta = " << fmt(tp.ut.beta) << "\n";
    out << "ut_kappa = " << fmt(tp.ut.kappa) << "\n";
    out << "modes = ";
    for (std::size_t i = 0; i < spec.modes.size(); ++i)
        out << (i ? ", " : "") << modeName(spec.modes[i]);
    out << "\n";
    out << "realizations = " << spec.realizations << "\n";
    out << "particles = " << spec.particles << "\n";
    out << "base_seed = " << spec.baseSeed << "\n";
    out << "output_dir = " << spec.outputDir << "\n";
    out << "threads = " << spec.threads << "\n";
    return out.str();
}

void saveConfig(const RunSpec& spec, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write config file: " + path);
    out << serializeConfig(spec);
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace apeot

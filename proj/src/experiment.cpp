#include "apeot/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

namespace apeot {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

// splitmix64 step; decorrelates per-mode filter streams from the
// record stream of the same realization
std::uint64_t mixSeed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

struct RealizationResult {
    // [mode][step] position errors; collapse flag per mode
    std::vector<std::vector<double>> errors;
    std::vector<bool> collapsed;
};

}  // namespace

ResultTable runExperiment(const RunSpec& spec) {
    spec.validate();
    const auto startTime = std::chrono::steady_clock::now();

    const GroundTruth truth = buildTrajectory(spec.scenario);
    const int numSteps = spec.scenario.numSteps;
    const int numModes = static_cast<int>(spec.modes.size());
    const int numReal = spec.realizations;

    PcrlbParams pcrlb = PcrlbParams::fromScenario(spec.scenario);
    pcrlb.motion.accelStd = spec.tracker.accelStd;
    pcrlb.motion.biasStd = spec.tracker.biasStd;
    pcrlb.prior.posStd = spec.tracker.initPosStd;
    pcrlb.prior.velStd = spec.tracker.initVelStd;

    const TrackerConfig trackerCfg = spec.trackerConfig();

    std::vector<RealizationResult> slots(numReal);
    std::atomic<int> nextRealization{0};

    auto worker = [&]() {
        for (;;) {
            const int r = nextRealization.fetch_add(1);
            if (r >= numReal) return;
            const std::uint64_t recordSeed = spec.baseSeed + static_cast<std::uint64_t>(r);
            MeasurementGenerator generator(spec.scenario, recordSeed);
            const std::vector<MeasurementSet> record = generator.generateRecord(truth);

            RealizationResult result;
            result.errors.assign(numModes, std::vector<double>(numSteps, 0.0));
            result.collapsed.assign(numModes, false);
            for (int m = 0; m < numModes; ++m) {
                // keyed on the mode identity so a mode's stream does not
                // depend on which other modes run alongside it
                const std::uint64_t filterSeed =
                    mixSeed(recordSeed) + static_cast<std::uint64_t>(spec.modes[m]) + 1;
                try {
                    const TrackerOutput out = runFilter(record, trackerCfg, spec.modes[m], filterSeed);
                    for (int n = 0; n < numSteps; ++n)
                        result.errors[m][n] = (out.estimates[n].p - truth.states[n].p).norm();
                } catch (const EnsembleCollapseError& e) {
                    // keep the realization in the statistics: the filter had
                    // no estimate from the failing step on, so the error is
                    // frozen at the last defined value
                    result.collapsed[m] = true;
                    const int failStep = std::max(e.step(), 1);
                    for (int n = failStep - 1; n < numSteps; ++n)
                        result.errors[m][n] = result.errors[m][std::max(failStep - 2, 0)];
                }
            }
            slots[r] = std::move(result);
        }
    };

    int threadCount = spec.threads > 0 ? spec.threads
                                       : static_cast<int>(std::thread::hardware_concurrency());
    threadCount = std::clamp(threadCount, 1, numReal);
    std::vector<std::thread> pool;
    for (int t = 1; t < threadCount; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    ResultTable table;
    table.modes = spec.modes;
    table.realizations = numReal;
    table.bound = pcrlbRecursion(truth, pcrlb).positionBound;
    table.rmse.assign(numModes, std::vector<double>(numSteps, 0.0));
    table.cdf.assign(numModes, {});
    table.divergent.assign(numModes, 0);
    table.collapsed.assign(numModes, 0);

    for (int m = 0; m < numModes; ++m) {
        auto& pooled = table.cdf[m];
        pooled.reserve(static_cast<std::size_t>(numReal) * numSteps);
        for (int n = 0; n < numSteps; ++n) {
            double sumSq = 0.0;
            for (int r = 0; r < numReal; ++r) sumSq += slots[r].errors[m][n] * slots[r].errors[m][n];
            table.rmse[m][n] = std::sqrt(sumSq / numReal);
        }
        for (int r = 0; r < numReal; ++r) {
            const auto& errs = slots[r].errors[m];
            pooled.insert(pooled.end(), errs.begin(), errs.end());
            const bool outlier = errs.back() > kOutlierErrorM;
            if (slots[r].collapsed[m] || outlier) ++table.divergent[m];
            if (slots[r].collapsed[m]) ++table.collapsed[m];
        }
        std::sort(pooled.begin(), pooled.end());
    }

    table.wallSeconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - startTime).count();
    return table;
}

void writeOutputs(const ResultTable& table, const RunSpec& spec, const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory: " + dir);

    {
        const std::string path = dir + "/rmse.csv";
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write: " + path);
        out << "step,bound";
        for (Mode m : table.modes) out << ",rmse_" << modeName(m);
        out << "\n";
        for (std::size_t n = 0; n < table.bound.size(); ++n) {
            out << (n + 1) << "," << fmt(table.bound[n]);
            for (std::size_t m = 0; m < table.modes.size(); ++m)
                out << "," << fmt(table.rmse[m][n]);
            out << "\n";
        }
        if (!out) throw std::runtime_error("write failed: " + path);
    }

    for (std::size_t m = 0; m < table.modes.size(); ++m) {
        const std::string path = dir + "/cdf_" + modeName(table.modes[m]) + ".csv";
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write: " + path);
        out << "error_m,cumulative_probability\n";
        const auto& pooled = table.cdf[m];
        for (std::size_t i = 0; i < pooled.size(); ++i)
            out << fmt(pooled[i]) << ","
                << fmt(static_cast<double>(i + 1) / static_cast<double>(pooled.size())) << "\n";
        if (!out) throw std::runtime_error("write failed: " + path);
    }

    {
        const std::string path = dir + "/summary.txt";
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write: " + path);
        out << "realizations: " << table.realizations << "\n";
        for (std::size_t m = 0; m < table.modes.size(); ++m) {
            const double frac = static_cast<double>(table.divergent[m]) / table.realizations;
            out << "divergence_fraction_" << modeName(table.modes[m]) << ": " << fmt(frac)
                << " (collapsed: " << table.collapsed[m] << ")\n";
        }
        out << "wall_seconds: " << fmt(table.wallSeconds) << "\n";
        out << "\n# configuration\n" << serializeConfig(spec);
        if (!out) throw std::runtime_error("write failed: " + path);
    }
}

}  // namespace apeot

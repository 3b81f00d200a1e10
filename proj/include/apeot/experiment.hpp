#pragma once

#include "apeot/config_io.hpp"
#include "apeot/pcrlb.hpp"

namespace apeot {

/// A realization counts as divergent when the filter collapsed or its
/// final position error exceeds this radius (track never recovered).
constexpr double kOutlierErrorM = 1.0;

struct ResultTable {
    std::vector<Mode> modes;
    std::vector<double> bound;               // per step
    std::vector<std::vector<double>> rmse;   // [mode][step]
    std::vector<std::vector<double>> cdf;    // [mode], sorted pooled position errors
    std::vector<int> divergent;              // [mode]
    std::vector<int> collapsed;              // [mode]
    int realizations = 0;
    double wallSeconds = 0.0;
};

/// Runs R paired realizations: per realization one measurement record is
/// generated (seed = baseSeed + r) and every mode runs on that record.
/// Deterministic given the spec, independent of the thread count.
ResultTable runExperiment(const RunSpec& spec);

/// Writes rmse.csv, cdf_<mode>.csv and summary.txt into dir.
void writeOutputs(const ResultTable& table, const RunSpec& spec, const std::string& dir);

}  // namespace apeot

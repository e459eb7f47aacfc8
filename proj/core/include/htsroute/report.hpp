#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "htsroute/harness.hpp"

namespace hts {

/// Files written by emit_outputs.
struct OutputBundle {
    std::filesystem::path summary_json;
    std::filesystem::path timeseries_csv;
    std::vector<std::filesystem::path> charts;
    std::size_t record_count = 0;  // data rows in timeseries.csv
};

inline constexpr const char* kTimeseriesHeader = "run,method,t,p,metric,value";
inline constexpr int kMetricsPerStep = 4;  // loss, outflow, queue, cost

/// summary.json document (config echo, per-method cost/std/gap, sweep table).
std::string summary_json(const AggregateMetrics& metrics, const WindowSweep* sweep = nullptr);

/// Writes summary.json, timeseries.csv and SVG charts into dir (created if
/// missing). t and p are 1-based in the CSV. Needs run series kept by the
/// harness. Throws std::runtime_error naming the path on I/O failure.
OutputBundle emit_outputs(const AggregateMetrics& metrics, const std::filesystem::path& dir,
                          const WindowSweep* sweep = nullptr);

/// Shortest round-trip decimal form, independent of the C locale.
std::string format_number(double value);

}  // namespace hts

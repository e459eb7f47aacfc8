#include "htsroute/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "json.hpp"
#include "svg_chart.hpp"

namespace hts {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::string format_number(double value) {
    if (value == 0.0) return "0";  // folds -0
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{}) throw std::runtime_error("format_number: conversion failed");
    return std::string(buf, ptr);
}

namespace {

ordered_json config_json(const ScenarioConfig& c) {
    ordered_json j;
    j["num_modules"] = c.num_modules;
    j["num_priorities"] = c.num_priorities;
    j["horizon"] = c.horizon;
    j["window"] = c.window;
    j["loss_costs"] = c.loss_costs;
    j["queue_capacity"] = c.queue_capacity;
    j["initial_queue"] = c.initial_queue;
    j["max_weight_step"] = c.max_weight_step;
    j["scheduler_period"] = c.scheduler_period;
    j["link_capacity"] = c.link_capacity;
    j["lambda_start"] = c.lambda_start;
    j["lambda_end"] = c.lambda_end;
    j["ramp_two_sided"] = c.ramp_two_sided;
    j["terminal_flush"] = c.terminal_flush;
    j["num_runs"] = c.num_runs;
    j["base_seed"] = c.base_seed;
    j["time_step_duration"] = c.time_step_duration;
    return j;
}

ordered_json nullable(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

std::vector<double> steps_axis(int horizon) {
    std::vector<double> x(static_cast<std::size_t>(horizon));
    for (int t = 0; t < horizon; ++t) x[static_cast<std::size_t>(t)] = t + 1;
    return x;
}

std::vector<double> column(const Matrix& m, std::size_t c) {
    std::vector<double> out(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) out[r] = m(r, c);
    return out;
}

std::string priority_name(std::size_t p) { return "p" + std::to_string(p + 1); }

}  // namespace

std::string summary_json(const AggregateMetrics& metrics, const WindowSweep* sweep) {
    ordered_json j;
    j["config"] = config_json(metrics.config);
    j["seed"] = metrics.config.base_seed;
    j["runs"] = metrics.config.num_runs;
    j["baseline"] = metrics.gaps.baseline.empty() ? ordered_json(nullptr) : ordered_json(metrics.gaps.baseline);
    j["zero_baseline"] = metrics.gaps.zero_baseline;
    ordered_json methods = ordered_json::array();
    for (const auto& m : metrics.methods) {
        ordered_json e;
        e["method"] = m.label;
        e["mean_cost"] = m.mean_cost;
        e["std_cost"] = m.std_cost;
        const auto gap = metrics.gaps.gap(m.label);
        e["gap_percent"] = gap ? nullable(*gap) : ordered_json(nullptr);
        e["run_costs"] = m.run_costs;
        methods.push_back(std::move(e));
    }
    j["methods"] = std::move(methods);
    j["hindsight_objectives"] = metrics.hindsight_objectives;
    j["paired_demand"] = metrics.paired;
    j["invariants"] = {{"steps_checked", metrics.invariants.steps_checked},
                       {"conservation_violations", metrics.invariants.conservation_violations},
                       {"capacity_violations", metrics.invariants.capacity_violations},
                       {"service_violations", metrics.invariants.service_violations}};
    if (sweep != nullptr) {
        ordered_json rows = ordered_json::array();
        for (std::size_t i = 0; i < sweep->windows.size(); ++i) {
            ordered_json pct = ordered_json::array();
            for (double d : sweep->pct_diff[i]) pct.push_back(nullable(d));
            rows.push_back({{"window", sweep->windows[i]},
                            {"mean_cost", sweep->mean_costs[i]},
                            {"std_cost", sweep->std_costs[i]},
                            {"pct_vs", std::move(pct)}});
        }
        j["window_sweep"] = std::move(rows);
    }
    return j.dump(2) + "\n";
}

OutputBundle emit_outputs(const AggregateMetrics& metrics, const fs::path& dir, const WindowSweep* sweep) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory '" + dir.string() + "': " + ec.message());

    const auto& config = metrics.config;
    const auto T = static_cast<std::size_t>(config.horizon);
    const auto P = static_cast<std::size_t>(config.num_priorities);
    OutputBundle bundle;

    bundle.summary_json = dir / "summary.json";
    write_file(bundle.summary_json, summary_json(metrics, sweep));

    // Long-format records: run-major, then method, step, priority, metric.
    std::string csv;
    csv.reserve(64 * static_cast<std::size_t>(config.num_runs) * metrics.methods.size() * T * P * kMetricsPerStep);
    csv += kTimeseriesHeader;
    csv += '\n';
    for (int run = 0; run < config.num_runs; ++run) {
        for (const auto& m : metrics.methods) {
            if (m.runs.size() != static_cast<std::size_t>(config.num_runs))
                throw std::runtime_error("emit_outputs: per-run series were not kept for " + m.label);
            const RunSeries& s = m.runs[static_cast<std::size_t>(run)];
            const std::string prefix = std::to_string(run) + ',' + m.label + ',';
            for (std::size_t t = 0; t < T; ++t) {
                for (std::size_t p = 0; p < P; ++p) {
                    const std::string key = prefix + std::to_string(t + 1) + ',' + std::to_string(p + 1) + ',';
                    const std::pair<const char*, double> values[kMetricsPerStep] = {
                        {"loss", s.loss(t, p)}, {"outflow", s.outflow(t, p)}, {"queue", s.queue(t, p)},
                        {"cost", s.cost(t, p)}};
                    for (const auto& [name, value] : values) {
                        csv += key;
                        csv += name;
                        csv += ',';
                        csv += format_number(value);
                        csv += '\n';
                        ++bundle.record_count;
                    }
                }
            }
        }
    }
    bundle.timeseries_csv = dir / "timeseries.csv";
    write_file(bundle.timeseries_csv, csv);

    const auto x = steps_axis(config.horizon);
    auto emit_chart = [&](const std::string& name, const svg::LineChart& chart) {
        const fs::path path = dir / name;
        write_file(path, svg::render(chart));
        bundle.charts.push_back(path);
    };

    {
        svg::LineChart chart{"Incoming flows", "time step", "packets per step", {}};
        for (std::size_t p = 0; p < P; ++p) {
            chart.series.push_back({priority_name(p) + " mean", x, column(metrics.mean_demand, p), svg::palette(p), false});
            chart.series.push_back({priority_name(p) + " run 0", x, column(metrics.sample_demand, p), svg::palette(p), true});
        }
        emit_chart("flows_vs_time.svg", chart);
    }
    {
        // Aggregate outflow of the first online method, else the first method.
        const MethodMetrics* shown = &metrics.methods.front();
        for (const auto& m : metrics.methods)
            if (!m.kind.offline()) { shown = &m; break; }
        svg::LineChart chart{"Aggregate outflow (" + shown->label + ")", "time step", "packets per step", {}};
        for (std::size_t p = 0; p < P; ++p)
            chart.series.push_back({priority_name(p), x, column(shown->mean_outflow, p), svg::palette(p), false});
        emit_chart("outflow_vs_time.svg", chart);
    }
    {
        svg::LineChart chart{"Lost packets", "time step", "packets per step", {}};
        for (std::size_t i = 0; i < metrics.methods.size(); ++i) {
            const auto& m = metrics.methods[i];
            for (std::size_t p = 0; p < P; ++p)
                chart.series.push_back(
                    {m.label + " " + priority_name(p), x, column(m.mean_loss, p), svg::palette(i), p > 0});
        }
        emit_chart("losses_vs_time.svg", chart);
    }
    {
        svg::LineChart chart{"Cumulative packet loss cost", "time step", "cost", {}};
        for (std::size_t i = 0; i < metrics.methods.size(); ++i)
            chart.series.push_back(
                {metrics.methods[i].label, x, metrics.methods[i].mean_cumulative_cost, svg::palette(i), false});
        emit_chart("cumulative_cost.svg", chart);
    }
    if (sweep != nullptr) {
        svg::LineChart chart{"Cumulative cost across MPC windows", "time step", "cost", {}};
        for (std::size_t i = 0; i < sweep->metrics.methods.size(); ++i)
            chart.series.push_back({"W = " + std::to_string(sweep->windows[i]), x,
                                    sweep->metrics.methods[i].mean_cumulative_cost, svg::palette(i), false});
        emit_chart("window_sweep.svg", chart);
    }
    return bundle;
}

}  // namespace hts

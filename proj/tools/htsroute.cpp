// htsroute: run routing-policy experiments from the command line.
//
//   htsroute validate --config cfg.yaml
//   htsroute run --method mpc --out out/
//   htsroute compare --runs 20 --out out/
//   htsroute sweep --windows 1,2,5,10,20 --out out/
//
// Exit codes: 0 success, 1 config/usage error, 2 solver failure.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "htsroute/config_io.hpp"
#include "htsroute/harness.hpp"
#include "htsroute/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitSolver = 2;

struct CommonArgs {
    std::string config_path;
    std::string out_dir = "htsroute_out";
    std::optional<std::uint64_t> seed;
    std::optional<int> runs;
    int threads = 1;
    bool quiet = false;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool outputs) {
    cmd->add_option("--config", args.config_path, "YAML scenario config (absent keys take defaults)");
    cmd->add_option("--seed", args.seed, "Override base_seed");
    cmd->add_option("--runs", args.runs, "Override num_runs")->check(CLI::PositiveNumber);
    if (outputs) {
        cmd->add_option("--out", args.out_dir, "Output directory")->capture_default_str();
        cmd->add_option("--threads", args.threads, "Worker threads, 0 = all cores")->capture_default_str();
        cmd->add_flag("--quiet", args.quiet, "Suppress progress output");
    }
}

hts::ScenarioConfig load(const CommonArgs& args) {
    hts::ScenarioConfig config = args.config_path.empty() ? hts::parse_config("") : hts::load_config(args.config_path);
    if (args.seed) config.base_seed = *args.seed;
    if (args.runs) config.num_runs = *args.runs;
    return hts::validate_config(config);
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

hts::HarnessOptions harness_options(const CommonArgs& args, int total_rollouts) {
    hts::HarnessOptions options;
    options.threads = args.threads;
    if (!args.quiet) {
        auto done = std::make_shared<int>(0);
        options.on_rollout = [done, total_rollouts](int, std::string_view) {
            ++*done;
            std::fprintf(stderr, "\r%d/%d rollouts", *done, total_rollouts);
            if (*done == total_rollouts) std::fputc('\n', stderr);
        };
    }
    return options;
}

void print_summary(const hts::AggregateMetrics& metrics) {
    std::printf("%-18s %14s %12s %10s\n", "method", "mean_cost", "std", "gap_%");
    for (const auto& m : metrics.methods) {
        const auto gap = metrics.gaps.gap(m.label);
        char gap_text[32] = "-";
        if (gap) std::snprintf(gap_text, sizeof(gap_text), "%.2f", *gap);
        std::printf("%-18s %14.4f %12.4f %10s\n", m.label.c_str(), m.mean_cost, m.std_cost, gap_text);
    }
    if (metrics.gaps.zero_baseline) std::printf("hindsight mean cost is 0: gaps undefined, absolute costs shown\n");
}

int run_experiment(const CommonArgs& args, const std::vector<hts::PolicyKind>& methods) {
    const auto config = load(args);
    const auto metrics =
        hts::run_monte_carlo(config, methods, harness_options(args, config.num_runs * static_cast<int>(methods.size())));
    const auto bundle = hts::emit_outputs(metrics, args.out_dir);
    print_summary(metrics);
    std::printf("wrote %s, %s (%zu records) and %zu charts\n", bundle.summary_json.string().c_str(),
                bundle.timeseries_csv.string().c_str(), bundle.record_count, bundle.charts.size());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Internal packet routing experiments for multi-module satellite payloads"};
    app.require_subcommand(1);

    CommonArgs validate_args, run_args, compare_args, sweep_args;
    std::string method = "mpc";
    std::string methods_text = "batch,mpc,windowless,static,proportional";
    std::string windows_text = "1,2,5,10,20";

    auto* validate_cmd = app.add_subcommand("validate", "Check a config and print the resolved values");
    add_common(validate_cmd, validate_args, false);

    auto* run_cmd = app.add_subcommand("run", "Monte-Carlo evaluation of one method");
    add_common(run_cmd, run_args, true);
    run_cmd->add_option("--method", method, "batch | static | proportional | windowless | mpc | mpc:N")
        ->capture_default_str();

    auto* compare_cmd = app.add_subcommand("compare", "All methods on paired demand realizations");
    add_common(compare_cmd, compare_args, true);
    compare_cmd->add_option("--methods", methods_text, "Comma-separated method list")->capture_default_str();

    auto* sweep_cmd = app.add_subcommand("sweep", "MPC cost across window lengths");
    add_common(sweep_cmd, sweep_args, true);
    sweep_cmd->add_option("--windows", windows_text, "Comma-separated window lengths")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*validate_cmd) {
            const auto config = load(validate_args);
            std::cout << hts::to_yaml(config);
            return kExitOk;
        }
        if (*run_cmd) {
            const auto config = load(run_args);
            return run_experiment(run_args, {hts::parse_policy(method, config.window)});
        }
        if (*compare_cmd) {
            const auto config = load(compare_args);
            std::vector<hts::PolicyKind> methods;
            for (const auto& name : split_list(methods_text)) methods.push_back(hts::parse_policy(name, config.window));
            if (methods.empty()) throw std::invalid_argument("--methods is empty");
            return run_experiment(compare_args, methods);
        }
        if (*sweep_cmd) {
            const auto config = load(sweep_args);
            std::vector<int> windows;
            for (const auto& w : split_list(windows_text)) windows.push_back(std::stoi(w));
            const auto sweep = hts::sweep_window(
                config, windows, harness_options(sweep_args, config.num_runs * static_cast<int>(windows.size())));
            const auto bundle = hts::emit_outputs(sweep.metrics, sweep_args.out_dir, &sweep);
            std::printf("%-8s %14s %12s\n", "window", "mean_cost", "std");
            for (std::size_t i = 0; i < windows.size(); ++i)
                std::printf("%-8d %14.4f %12.4f\n", windows[i], sweep.mean_costs[i], sweep.std_costs[i]);
            std::printf("wrote %s\n", bundle.summary_json.string().c_str());
            return kExitOk;
        }
    } catch (const hts::ConfigError& e) {
        std::cerr << e.what() << '\n';
        return kExitConfig;
    } catch (const hts::ConfigParseError& e) {
        std::cerr << "config parse error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const hts::RolloutFailure& e) {
        std::cerr << e.what() << '\n';
        return e.solver_failure() ? kExitSolver : kExitConfig;
    } catch (const hts::SolverFailure& e) {
        std::cerr << e.what() << '\n';
        return kExitSolver;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    return kExitOk;
}

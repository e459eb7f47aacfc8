// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.
//
//   htsroute_acceptance [--runs N] [--only 1,3,7]
//
// --runs shrinks the Monte-Carlo experiments for quick local checks; the
// registered ctest entry always runs the full 100-run configuration.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "CLI11.hpp"
#include "htsroute/arrivals.hpp"
#include "htsroute/formulation.hpp"
#include "htsroute/harness.hpp"
#include "htsroute/plant.hpp"
#include "oracles.hpp"
#include "random_instances.hpp"

namespace {

using namespace hts;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::map<int, Outcome> results;

void report(int id, const char* title, Outcome o) {
    std::printf("%s criterion %d: %s | %s\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str());
    std::fflush(stdout);
    results[id] = std::move(o);
}

std::string fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* format, ...) {
    char buf[1024];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof(buf), format, args);
    va_end(args);
    return buf;
}

// a <= b with relative slack; absolute 1e-6 floor when b is (near) zero.
bool le_rel(double a, double b, double rel) { return a <= b + std::max(rel * std::abs(b), 1e-6); }

struct PairStat {
    double mean = 0.0;
    double se = 0.0;
};

// Mean and standard error of the paired per-run difference b - a.
PairStat paired(const std::vector<double>& a, const std::vector<double>& b, std::size_t n) {
    PairStat s;
    for (std::size_t i = 0; i < n; ++i) s.mean += b[i] - a[i];
    s.mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) ss += (b[i] - a[i] - s.mean) * (b[i] - a[i] - s.mean);
    s.se = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0;
    return s;
}

double mean_of(const std::vector<double>& v, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s / static_cast<double>(n);
}

const std::vector<PolicyKind> kOrdered = {PolicyKind::batch(), PolicyKind::mpc(10), PolicyKind::windowless(),
                                          PolicyKind::static_weights(), PolicyKind::proportional()};

// Ordering check over the first n runs. The first pair may tie within noise,
// later pairs need a two-standard-error paired separation.
Outcome check_ordering(const AggregateMetrics& agg, std::size_t n) {
    Outcome o{true, ""};
    for (std::size_t i = 0; i + 1 < kOrdered.size(); ++i) {
        const auto* a = agg.find(kOrdered[i].label());
        const auto* b = agg.find(kOrdered[i + 1].label());
        const auto d = paired(a->run_costs, b->run_costs, n);
        const bool ok = i == 0 ? d.mean >= -2.0 * d.se - 1e-6 : d.mean > 0.0 && d.mean >= 2.0 * d.se;
        o.pass = o.pass && ok;
        o.detail += fmt("%s%s %.4g <= %s %.4g (diff %.4g, 2SE %.4g)%s", i ? "; " : "", a->label.c_str(),
                        mean_of(a->run_costs, n), b->label.c_str(), mean_of(b->run_costs, n), d.mean, 2.0 * d.se,
                        ok ? "" : " X");
    }
    return o;
}

int run_cli(const std::string& args) {
#ifdef HTSROUTE_CLI_PATH
    const std::string cmd = std::string(HTSROUTE_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
#else
    (void)args;
    return -1;
#endif
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

HarnessOptions progress(const char* name, int total) {
    HarnessOptions opts;
    auto done = std::make_shared<int>(0);
    auto start = std::make_shared<Clock::time_point>(Clock::now());
    opts.on_rollout = [=](int, std::string_view) {
        ++*done;
        if (*done % 25 == 0 || *done == total)
            std::fprintf(stderr, "  [%s] %d/%d rollouts, %.0fs\n", name, *done, total, seconds_since(*start));
    };
    return opts;
}

// ---------------------------------------------------------------------------

void criterion_6() {
    int solves = 0, failures = 0;
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const auto inst = oracle::random_small_instance(0xACCE55ULL + seed);
        std::vector<Formulation> forms;
        forms.push_back(build_batch(inst.config, inst.flows));
        forms.push_back(build_static_batch(inst.config, inst.flows));
        forms.push_back(build_proportional(inst.config, inst.flows));
        auto state = PlantState::initial(inst.config);
        const int t = static_cast<int>(seed % static_cast<std::uint64_t>(inst.config.horizon));
        if (t > 0) {
            state.last_weights = Matrix(static_cast<std::size_t>(inst.config.num_modules),
                                        static_cast<std::size_t>(inst.config.num_priorities),
                                        1.0 / inst.config.num_priorities);
            for (double& q : state.queues.data()) q = inst.config.queue_capacity / inst.config.num_priorities;
        }
        forms.push_back(build_mpc_window(inst.config, state, t, inst.flows));
        for (const auto& f : forms) {
            ++solves;
            const auto sol = lp::solve(f.problem);
            if (!sol.optimal()) {
                ++failures;
                continue;
            }
            const double v = lp::check_solution(f.problem, sol.values).max_violation();
            worst = std::max(worst, v);
            if (v > lp::kFeasibilityTol) ++failures;
        }
    }
    report(6, "LP feasibility suite (1000 random small instances)",
           {failures == 0, fmt("%d solves, %d non-optimal or violating, max violation %.3g", solves, failures, worst)});
}

void criterion_7() {
    ScenarioConfig c;
    c.num_modules = 1;
    c.num_priorities = 2;
    c.horizon = 3;
    c.loss_costs = {10.0, 4.0};
    c.scheduler_period = 0.5;
    c.link_capacity = 2.0;
    c.queue_capacity = 3.0;
    c.max_weight_step = 0.1;

    // Weight grid in units of 0.05; the ramp bound is two grid steps.
    const int steps = 20;
    const int ramp = static_cast<int>(std::lround(c.max_weight_step * steps));
    SplitMix64 rng(7007);
    int violations = 0;
    double min_slack = std::numeric_limits<double>::infinity();
    double max_slack = 0.0;
    for (int inst = 0; inst < 50; ++inst) {
        std::vector<std::vector<double>> demand(3, std::vector<double>(2));
        Matrix flows(3, 2);
        for (std::size_t t = 0; t < 3; ++t)
            for (std::size_t p = 0; p < 2; ++p) flows(t, p) = demand[t][p] = static_cast<double>(rng.next() % 6);
        const auto sol = lp::solve(build_batch(c, flows).problem);
        if (!sol.optimal()) {
            ++violations;
            continue;
        }
        double best = std::numeric_limits<double>::infinity();
        for (int a = 0; a <= steps; ++a)
            for (int b = std::max(0, a - ramp); b <= std::min(steps, a + ramp); ++b)
                for (int d = std::max(0, b - ramp); d <= std::min(steps, b + ramp); ++d) {
                    const std::vector<std::vector<double>> w = {{a / 20.0, 1.0 - a / 20.0},
                                                                {b / 20.0, 1.0 - b / 20.0},
                                                                {d / 20.0, 1.0 - d / 20.0}};
                    const double cost = oracle::greedy_single_module_cost(c, w, demand);
                    best = std::min(best, cost);
                    if (cost < sol.objective_value - 1e-6) ++violations;
                }
        min_slack = std::min(min_slack, best - sol.objective_value);
        max_slack = std::max(max_slack, best - sol.objective_value);
    }
    report(7, "small-instance brute-force oracle (50 instances, M=1 P=2 T=3)",
           {violations == 0, fmt("%d grid sequences below the LP optimum; grid-best minus LP in [%.3g, %.3g]",
                                 violations, min_slack, max_slack)});
}

void criterion_9(const std::string& workdir) {
    namespace fs = std::filesystem;
    const fs::path dir = fs::path(workdir) / "determinism";
    fs::remove_all(dir);
    const std::string args = "compare --quiet --runs 2 --seed 20240518 --out ";
    const auto start = Clock::now();
    const int a = run_cli(args + (dir / "a").string());
    const int b = run_cli(args + (dir / "b").string());
    bool same = a == 0 && b == 0;
    std::string detail = fmt("exit codes %d/%d", a, b);
    for (const char* name : {"summary.json", "timeseries.csv"}) {
        const auto x = slurp(dir / "a" / name);
        const auto y = slurp(dir / "b" / name);
        const bool eq = !x.empty() && x == y;
        same = same && eq;
        detail += fmt(", %s %s (%zu bytes)", name, eq ? "identical" : "DIFFERENT", x.size());
    }
    detail += fmt(", %.0fs", seconds_since(start));
    fs::remove_all(dir);
    report(9, "CLI compare determinism (default config, 2 runs, same seed twice)", {same, detail});
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"htsroute acceptance suite"};
    int runs = 100;
    std::string only_text;
    std::string workdir = std::filesystem::temp_directory_path().string() + "/htsroute_acceptance";
    app.add_option("--runs", runs, "Monte-Carlo runs for the default-config experiments")->check(CLI::PositiveNumber);
    app.add_option("--only", only_text, "Comma-separated criteria to run");
    app.add_option("--workdir", workdir, "Scratch directory for CLI outputs");
    CLI11_PARSE(app, argc, argv);

    std::set<int> only;
    {
        std::stringstream ss(only_text);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty()) only.insert(std::stoi(item));
    }
    auto wanted = [&](std::initializer_list<int> ids) {
        if (only.empty()) return true;
        for (int id : ids)
            if (only.count(id)) return true;
        return false;
    };

    const auto suite_start = Clock::now();
    std::printf("htsroute acceptance suite, %d runs\n", runs);

    if (wanted({6})) criterion_6();
    if (wanted({7})) criterion_7();
    if (wanted({9})) criterion_9(workdir);

    if (wanted({1, 2, 3, 4, 5, 8, 10})) {
        ScenarioConfig config;  // defaults
        config.num_runs = runs;

        // Reduced variant first: its runs are the first 20 of the full experiment.
        const int small_runs = std::min(20, runs);
        ScenarioConfig small = config;
        small.num_runs = small_runs;
        auto t0 = Clock::now();
        const auto reduced = run_monte_carlo(small, kOrdered, progress("20-run", small_runs * 5));
        const double reduced_seconds = seconds_since(t0);

        t0 = Clock::now();
        const auto agg = run_monte_carlo(config, kOrdered, progress("compare", runs * 5));
        const double full_seconds = seconds_since(t0);
        const auto n = static_cast<std::size_t>(runs);

        if (wanted({1})) {
            Outcome full = check_ordering(agg, n);
            Outcome sub = check_ordering(reduced, static_cast<std::size_t>(small_runs));
            const bool timing = full_seconds <= 1800.0 && reduced_seconds <= 360.0;
            report(1, "method ordering batch <= mpc(10) <= mpc(1) <= static <= proportional",
                   {full.pass && sub.pass && timing,
                    fmt("%d runs: %s [%.0fs]; %d-run variant: %s [%.0fs]", runs, full.detail.c_str(), full_seconds,
                        small_runs, sub.detail.c_str(), reduced_seconds)});
        }

        if (wanted({2})) {
            const auto& g = agg.gaps;
            if (g.zero_baseline) {
                report(2, "gap bands vs hindsight",
                       {false, fmt("hindsight mean cost is 0, gaps undefined (mpc10 %.4g, mpc1 %.4g, static %.4g, "
                                   "proportional %.4g)",
                                   agg.find("mpc_w10")->mean_cost, agg.find("windowless_mpc")->mean_cost,
                                   agg.find("static_batch")->mean_cost, agg.find("proportional")->mean_cost)});
            } else {
                const double g10 = *g.gap("mpc_w10"), g1 = *g.gap("windowless_mpc");
                const double gs = *g.gap("static_batch"), gp = *g.gap("proportional");
                const bool ok = g10 >= 0.0 && g10 <= 5.0 && g1 > g10 && gs >= 4.0 && gs <= 25.0 && gp > 15.0;
                report(2, "gap bands vs hindsight",
                       {ok, fmt("mpc10 %.2f%% in [0,5]; mpc1 %.2f%% > mpc10; static %.2f%% in [4,25]; "
                                "proportional %.2f%% > 15",
                                g10, g1, gs, gp)});
            }
        }

        if (wanted({4})) {
            int checked = 0, bad = 0;
            double worst = 0.0;
            std::string where;
            for (const char* label : {"batch_hindsight", "static_batch", "proportional"}) {
                const auto* m = agg.find(label);
                int method_bad = 0;
                for (std::size_t r = 0; r < n; ++r) {
                    const double planned = *m->planned_objectives[r];
                    const double rel = std::abs(m->run_costs[r] - planned) / std::max(1.0, std::abs(planned));
                    worst = std::max(worst, rel);
                    ++checked;
                    if (rel > 1e-6) ++method_bad;
                }
                bad += method_bad;
                where += fmt("%s%s %d", where.empty() ? "" : ", ", label, method_bad);
            }
            report(4, "hindsight replay equality (plant cost == own LP objective, 1e-6 rel)",
                   {bad == 0, fmt("%d of %d (method, run) pairs differ [%s]; max rel diff %.3g", bad, checked,
                                  where.c_str(), worst)});
        }

        if (wanted({5})) {
            int bad = 0, checked = 0;
            double min_margin = std::numeric_limits<double>::infinity();
            for (const auto& m : agg.methods)
                for (std::size_t r = 0; r < n; ++r) {
                    const double margin = m.run_costs[r] - agg.hindsight_objectives[r];
                    min_margin = std::min(min_margin, margin);
                    ++checked;
                    if (margin < -1e-6) ++bad;
                }
            report(5, "per-run hindsight lower bound",
                   {bad == 0, fmt("%d of %d (method, run) pairs below the batch LP objective; min margin %.3g", bad,
                                  checked, min_margin)});
        }

        if (wanted({8})) {
            const auto& inv = agg.invariants;
            const long expected = static_cast<long>(runs) * 5 * config.horizon;
            report(8, "conservation and capacity invariants on every rollout step",
                   {inv.total_violations() == 0 && inv.steps_checked == expected,
                    fmt("%ld steps checked (expected %ld); conservation %ld, capacity %ld, service %ld violations",
                        inv.steps_checked, expected, inv.conservation_violations, inv.capacity_violations,
                        inv.service_violations)});
        }

        if (wanted({10})) {
            const auto* m = agg.find("mpc_w10");
            int hits = 0;
            double mean_p1 = 0.0, mean_p3 = 0.0;
            const std::size_t T = static_cast<std::size_t>(config.horizon);
            for (std::size_t r = 0; r < n; ++r) {
                double p1 = 0.0, p3 = 0.0;
                for (std::size_t t = T - 10; t < T; ++t) {
                    p1 += m->runs[r].loss(t, 0);
                    p3 += m->runs[r].loss(t, 2);
                }
                mean_p1 += p1 / 10.0;
                mean_p3 += p3 / 10.0;
                if (p3 > p1) ++hits;
            }
            const int needed = static_cast<int>(std::ceil(0.95 * static_cast<double>(runs)));
            report(10, "saturation sheds priority 3 before priority 1 (mpc(10), last 10 steps)",
                   {hits >= needed, fmt("%d of %d runs with p3 loss > p1 loss (need %d); mean per-step loss p1 %.4g, "
                                        "p3 %.4g",
                                        hits, runs, needed, mean_p1 / runs, mean_p3 / runs)});
        }

        if (wanted({3})) {
            // W = 1 and 10 come from the experiment above (same seeds, same realizations).
            const std::vector<int> windows = {1, 2, 5, 10, 20};
            std::map<int, double> cost;
            cost[1] = agg.find("windowless_mpc")->mean_cost;
            cost[10] = agg.find("mpc_w10")->mean_cost;
            t0 = Clock::now();
            const auto extra = run_monte_carlo(config, {PolicyKind::mpc(2), PolicyKind::mpc(5), PolicyKind::mpc(20)},
                                               progress("sweep", runs * 3));
            for (int w : {2, 5, 20}) cost[w] = extra.find(PolicyKind::mpc(w).label())->mean_cost;
            bool ok = extra.demand_hashes == agg.demand_hashes;
            std::string detail;
            for (std::size_t i = 0; i < windows.size(); ++i) {
                detail += fmt("%sW=%d %.4g", i ? ", " : "", windows[i], cost[windows[i]]);
                if (i > 0) {
                    const bool step_ok = le_rel(cost[windows[i]], cost[windows[i - 1]], 0.005);
                    ok = ok && step_ok;
                    if (!step_ok) detail += " X";
                }
            }
            const double c10 = cost[10], c20 = cost[20];
            const double rel = c20 > 0.0 ? std::abs(c10 - c20) / c20 : std::abs(c10 - c20);
            ok = ok && (c20 > 0.0 ? rel <= 0.015 : std::abs(c10 - c20) <= 1e-6);
            detail += fmt("; |W10-W20|/W20 = %.3f%% (<= 1.5%%) [%.0fs]", 100.0 * rel, seconds_since(t0));
            report(3, "window sweep nonincreasing in W (0.5% slack)", {ok, detail});
        }
    }

    int failed = 0;
    std::printf("summary:");
    for (const auto& [id, o] : results) {
        std::printf(" %d=%s", id, o.pass ? "PASS" : "FAIL");
        failed += o.pass ? 0 : 1;
    }
    std::printf("\n%zu criteria, %d failed, %.0fs total\n", results.size(), failed, seconds_since(suite_start));
    return failed == 0 ? 0 : 1;
}

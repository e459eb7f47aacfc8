#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "htsroute/config_io.hpp"

namespace hts {
namespace {

TEST(ParseConfig, EmptyDocumentGivesDefaults) {
    const auto c = parse_config("");
    EXPECT_EQ(c, ScenarioConfig{});
    EXPECT_EQ(c.num_modules, 16);
    EXPECT_EQ(c.window, 10);
}

TEST(ParseConfig, SingleOverride) {
    ScenarioConfig expected;
    expected.horizon = 50;
    EXPECT_EQ(parse_config("horizon: 50\n"), expected);
}

TEST(ParseConfig, AllKeys) {
    const auto c = parse_config(R"(num_modules: 4
num_priorities: 2
horizon: 20
window: 5
loss_costs: [3, 1.5]
queue_capacity: 6
initial_queue: 1
max_weight_step: 0.2
scheduler_period: 0.25
link_capacity: 8
lambda_start: 2
lambda_end: 30
ramp_two_sided: false
terminal_flush: false
num_runs: 7
base_seed: 99
time_step_duration: 0.5
)");
    EXPECT_EQ(c.num_modules, 4);
    EXPECT_EQ(c.loss_costs, (std::vector<double>{3.0, 1.5}));
    EXPECT_FALSE(c.ramp_two_sided);
    EXPECT_FALSE(c.terminal_flush);
    EXPECT_EQ(c.base_seed, 99u);
    EXPECT_EQ(c.time_step_duration, 0.5);
}

TEST(ParseConfig, ShortCostListFailsValidation) {
    try {
        parse_config("loss_costs: [10, 4]\n");
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        ASSERT_EQ(e.issues().size(), 1u);
        EXPECT_EQ(e.issues()[0].field, "loss_costs");
        EXPECT_EQ(e.issues()[0].kind, ConfigIssue::Kind::invalid_dimension);
    }
}

TEST(ParseConfig, UnknownKeyNamesLine) {
    try {
        parse_config("horizon: 50\nhorizn: 3\n");
        FAIL() << "expected ConfigParseError";
    } catch (const ConfigParseError& e) {
        EXPECT_EQ(e.line(), 2);
        EXPECT_EQ(e.key(), "horizn");
    }
}

TEST(ParseConfig, BadScalar) {
    try {
        parse_config("\nwindow: ten\n");
        FAIL() << "expected ConfigParseError";
    } catch (const ConfigParseError& e) {
        EXPECT_EQ(e.line(), 2);
        EXPECT_EQ(e.key(), "window");
    }
}

TEST(ParseConfig, MalformedYaml) {
    EXPECT_THROW(parse_config("horizon: [1, 2\n"), ConfigParseError);
    EXPECT_THROW(parse_config("- 1\n- 2\n"), ConfigParseError);
}

TEST(ToYaml, RoundTrips) {
    ScenarioConfig c;
    c.loss_costs = {9.5, 3.25, 0.1};
    c.scheduler_period = 0.3;
    c.base_seed = 0xFFFFFFFFFFFFull;
    c.ramp_two_sided = false;
    EXPECT_EQ(parse_config(to_yaml(c)), c);
}

TEST(LoadConfig, ReadsFileAndReportsMissing) {
    const auto path = std::filesystem::temp_directory_path() / "htsroute_cfg_test.yaml";
    {
        std::ofstream out(path);
        out << "num_runs: 3\n";
    }
    EXPECT_EQ(load_config(path.string()).num_runs, 3);
    std::filesystem::remove(path);
    EXPECT_THROW(load_config(path.string()), ConfigParseError);
}

}  // namespace
}  // namespace hts

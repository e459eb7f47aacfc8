#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

namespace {

namespace fs = std::filesystem;

int run_cli(const std::string& args) {
    const std::string cmd = std::string(HTSROUTE_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir = fs::temp_directory_path() / ("htsroute_cli_" + std::string(
            ::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir);
        fs::create_directories(dir);
        config = dir / "small.yaml";
        std::ofstream(config) << "num_modules: 2\nhorizon: 6\nwindow: 3\nnum_runs: 2\nlink_capacity: 5\n"
                                 "queue_capacity: 4\nlambda_start: 20\nlambda_end: 60\n";
    }
    void TearDown() override { fs::remove_all(dir); }
    fs::path dir;
    fs::path config;
};

TEST_F(Cli, ValidateAcceptsGoodConfig) {
    EXPECT_EQ(run_cli("validate --config " + config.string()), 0);
    EXPECT_EQ(run_cli("validate"), 0);
}

TEST_F(Cli, ValidationAndParseErrorsExitOne) {
    const auto bad = dir / "bad.yaml";
    std::ofstream(bad) << "loss_costs: [10, 4]\n";
    EXPECT_EQ(run_cli("validate --config " + bad.string()), 1);
    std::ofstream(bad) << "no_such_key: 1\n";
    EXPECT_EQ(run_cli("validate --config " + bad.string()), 1);
    EXPECT_EQ(run_cli("validate --config " + (dir / "missing.yaml").string()), 1);
    EXPECT_EQ(run_cli("run --method nonsense --quiet --config " + config.string()), 1);
    EXPECT_EQ(run_cli("frobnicate"), 1);
}

TEST_F(Cli, CompareIsDeterministic) {
    const std::string common = "compare --quiet --seed 5 --config " + config.string() + " --out ";
    ASSERT_EQ(run_cli(common + (dir / "a").string()), 0);
    ASSERT_EQ(run_cli(common + (dir / "b").string() + " --threads 2"), 0);
    EXPECT_EQ(slurp(dir / "a" / "summary.json"), slurp(dir / "b" / "summary.json"));
    EXPECT_EQ(slurp(dir / "a" / "timeseries.csv"), slurp(dir / "b" / "timeseries.csv"));
    EXPECT_TRUE(fs::exists(dir / "a" / "cumulative_cost.svg"));
}

TEST_F(Cli, RunAndSweepWriteOutputs) {
    ASSERT_EQ(run_cli("run --quiet --method mpc:2 --config " + config.string() + " --out " + (dir / "r").string()), 0);
    EXPECT_TRUE(fs::exists(dir / "r" / "timeseries.csv"));
    ASSERT_EQ(run_cli("sweep --quiet --windows 1,3 --config " + config.string() + " --out " + (dir / "s").string()), 0);
    EXPECT_TRUE(fs::exists(dir / "s" / "window_sweep.svg"));
}

}  // namespace

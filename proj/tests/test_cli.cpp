#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "pm25kit/cli.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kFixture = std::string(PM25_TEST_DATA_DIR) + "/sample_asia.csv";

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("pm25_cli_" + tag + "_" +
                                            std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string str() const { return path.string(); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::string content((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
    return content;
}

} // namespace

TEST_CASE("cluster command writes the documented files") {
    TempDir dir("cluster");
    const int code = pm25::run_command({"cluster", "--input", kFixture, "--k", "3", "--seed",
                                        "7", "--out", dir.str()});
    CHECK(code == 0);
    CHECK(fs::exists(dir.path / "clusters.csv"));
    CHECK(fs::exists(dir.path / "elbow.svg"));
    CHECK(fs::exists(dir.path / "clusters.svg"));
    CHECK(fs::exists(dir.path / "report.json"));
    CHECK(fs::exists(dir.path / "manifest.json"));
    CHECK(slurp(dir.path / "manifest.json").find("dataset_hash") != std::string::npos);
}

TEST_CASE("trends on the embedded dataset succeeds") {
    TempDir dir("trends");
    const int code = pm25::run_command({"trends", "--embedded", "--out", dir.str()});
    CHECK(code == 0);
    CHECK(fs::exists(dir.path / "trends_overall.svg"));
    CHECK(fs::exists(dir.path / "trends_south_asia.svg"));
    CHECK(fs::exists(dir.path / "trends_regional_means.csv"));
}

TEST_CASE("correlate and deaths on the embedded dataset exit with 2") {
    TempDir dir("empty");
    CHECK(pm25::run_command({"correlate", "--embedded", "--study", "density", "--out",
                             dir.str()}) == 2);
    CHECK(pm25::run_command({"correlate", "--embedded", "--study", "deaths", "--out",
                             dir.str()}) == 2);
    CHECK(pm25::run_command({"deaths", "--embedded", "--out", dir.str()}) == 2);
    // No embedded country has a complete 2018-2022 training series either.
    CHECK(pm25::run_command({"forecast", "--embedded", "--train-end", "2022", "--test-year",
                             "2023", "--out", dir.str()}) == 2);
}

TEST_CASE("help and version exit cleanly") {
    CHECK(pm25::run_command({"--help"}) == 0);
    CHECK(pm25::run_command({"--version"}) == 0);
}

TEST_CASE("usage errors exit with 1") {
    TempDir dir("usage");
    CHECK(pm25::run_command({"no-such-command"}) == 1);
    CHECK(pm25::run_command({"cluster", "--out", dir.str()}) == 1); // no input selected
    CHECK(pm25::run_command({"cluster", "--embedded", "--input", kFixture, "--out",
                             dir.str()}) == 1);
    CHECK(pm25::run_command({"evaluate", "--input", kFixture, "--order", "bogus", "--out",
                             dir.str()}) == 1);
    CHECK(pm25::run_command({"cluster", "--embedded", "--fill-policy", "maybe", "--out",
                             dir.str()}) == 1);
    CHECK(pm25::run_command({"trends", "--input", "/nonexistent/file.csv", "--out",
                             dir.str()}) == 1);
}

TEST_CASE("evaluate on the fixture emits the benchmark comparison") {
    TempDir dir("evaluate");
    const int code = pm25::run_command({"evaluate", "--input", kFixture, "--out", dir.str()});
    CHECK(code == 0);
    const std::string report = slurp(dir.path / "report.json");
    CHECK(report.find("benchmark") != std::string::npos);
    CHECK(report.find("deviation_pct") != std::string::npos);
    CHECK(fs::exists(dir.path / "evaluate_values.csv"));
    CHECK(fs::exists(dir.path / "evaluate_metrics.csv"));
    CHECK(fs::exists(dir.path / "evaluate_benchmark.csv"));
    CHECK(fs::exists(dir.path / "evaluate_scatter.svg"));
}

TEST_CASE("forecast to 2024 reports absent metrics") {
    TempDir dir("forecast");
    const int code = pm25::run_command({"forecast", "--input", kFixture, "--out", dir.str()});
    CHECK(code == 0);
    const std::string metrics = slurp(dir.path / "forecast_metrics.csv");
    CHECK(metrics.find("MAE,\n") != std::string::npos); // explicitly empty, never 0
}

TEST_CASE("manual order override flows through") {
    TempDir dir("order");
    const int code = pm25::run_command({"evaluate", "--input", kFixture, "--order",
                                        "0,1,0,drift", "--out", dir.str()});
    CHECK(code == 0);
    const std::string values = slurp(dir.path / "evaluate_values.csv");
    CHECK(values.find("(0,1,0)+drift") != std::string::npos);
}

TEST_CASE("report on the embedded dataset runs the feasible studies") {
    TempDir dir("report");
    const int code = pm25::run_command({"report", "--embedded", "--seed", "0", "--out",
                                        dir.str()});
    CHECK(code == 0);
    const std::string report = slurp(dir.path / "report.json");
    CHECK(report.find("\"study\": \"trends\"") != std::string::npos);
    CHECK(report.find("\"study\": \"cluster\"") != std::string::npos);
    CHECK(report.find("\"status\": \"empty\"") != std::string::npos); // deaths etc.
    CHECK(fs::exists(dir.path / "elbow.svg"));
}

TEST_CASE("zero-filled tables never leak zeros into trend charts") {
    TempDir excl("gaps_excl");
    TempDir zero("gaps_zero");
    REQUIRE(pm25::run_command({"trends", "--embedded", "--out", excl.str()}) == 0);
    REQUIRE(pm25::run_command({"trends", "--embedded", "--fill-policy", "zero", "--out",
                               zero.str()}) == 0);
    // Charts are identical across fill policies; only the tables differ.
    CHECK(slurp(excl.path / "trends_south_asia.svg") ==
          slurp(zero.path / "trends_south_asia.svg"));
    CHECK(slurp(excl.path / "trends_overall.svg") == slurp(zero.path / "trends_overall.svg"));
    CHECK(slurp(excl.path / "trends_regional_means.csv") !=
          slurp(zero.path / "trends_regional_means.csv"));
}

TEST_CASE("zero fill policy is honored end to end") {
    TempDir dir("zero");
    const int code = pm25::run_command({"cluster", "--embedded", "--fill-policy", "zero",
                                        "--k", "3", "--out", dir.str()});
    CHECK(code == 0);
    // Zero-filled countries now cluster; no exclusions remain.
    const std::string report = slurp(dir.path / "report.json");
    CHECK(report.find("\"exclusions\": []") != std::string::npos);
}

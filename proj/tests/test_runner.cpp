#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "tensor_spectra/runner.hpp"

using namespace tensor_spectra;

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("doubles render with round-trip precision") {
  for (double v : {0.0, 1.0, -2.5, 0.1, 1.0 / 3.0, 1e-17, 123456.789}) {
    const std::string text = format_double(v);
    CHECK(std::stod(text) == v);
  }
}

TEST_CASE("argument parsing") {
  const RunConfig cfg = parse_config({"simulate", "--ensemble", "cue-tensor-cue", "--n", "3",
                                      "--samples", "500", "--seed", "42", "--bins", "25",
                                      "--s-max", "3.5", "--workers", "4"});
  CHECK(cfg.command == "simulate");
  CHECK(cfg.ensemble.kind == EnsembleKind::CueTensorCue);
  CHECK(cfg.ensemble.size == 3);
  CHECK(cfg.ensemble.samples == 500);
  CHECK(cfg.ensemble.seed == 42);
  CHECK(cfg.bins == 25);
  CHECK(cfg.s_max == 3.5);
  CHECK(cfg.workers == 4);

  const RunConfig m_cfg = parse_config({"void", "--ensemble", "cue2-tensor", "--m", "4",
                                        "--s-grid", "0.5", "1.0", "2.0"});
  CHECK(m_cfg.ensemble.kind == EnsembleKind::Cue2Tensor);
  CHECK(m_cfg.ensemble.size == 4);
  CHECK(m_cfg.s_grid == std::vector<double>{0.5, 1.0, 2.0});
  CHECK(m_cfg.workers == 0);  // auto

  CHECK_THROWS_AS(parse_config({"simulate"}), usage_error);
  CHECK_THROWS_AS(parse_config({"simulate", "--ensemble", "bogus", "--n", "2"}), usage_error);
  CHECK_THROWS_AS(parse_config({"simulate", "--ensemble", "cue"}), usage_error);
  CHECK_THROWS_AS(parse_config({"frobnicate"}), usage_error);
  CHECK_THROWS_AS(parse_config({"simulate", "--ensemble", "cue", "--n", "2", "--workers", "-3"}),
                  usage_error);
  CHECK_THROWS_AS(parse_config({"simulate", "--ensemble", "cue2-tensor", "--n", "2"}),
                  usage_error);
}

TEST_CASE("environment variable overrides the worker option") {
  setenv("TENSOR_SPECTRA_WORKERS", "2", 1);
  const RunConfig cfg = parse_config({"simulate", "--ensemble", "cue", "--n", "2",
                                      "--workers", "8"});
  CHECK(cfg.workers == 2);
  unsetenv("TENSOR_SPECTRA_WORKERS");
}

TEST_CASE("simulate report carries a config echo and histogram rows") {
  RunConfig cfg = parse_config({"simulate", "--ensemble", "cue", "--n", "4",
                                "--samples", "100", "--bins", "10"});
  const RunReport report = run(cfg);
  REQUIRE(!report.config_echo.empty());
  CHECK(report.config_echo.front().first == "version");
  CHECK(report.config_echo.front().second == kLibraryVersion);
  CHECK(report.columns == std::vector<std::string>{"bin_left", "bin_right", "density", "count"});
  CHECK(report.rows.size() == 10u);

  long long total = 0;
  for (const auto& row : report.rows) total += std::stoll(row[3]);
  CHECK(total <= 400);
  CHECK(total > 0);
}

TEST_CASE("csv output is bitwise identical across worker counts") {
  const auto path_a = temp_file("ts_workers_1.csv");
  const auto path_b = temp_file("ts_workers_8.csv");
  for (const auto& [workers, path] : {std::pair{std::string("1"), path_a},
                                      std::pair{std::string("8"), path_b}}) {
    RunConfig cfg = parse_config({"simulate", "--ensemble", "cue-tensor-cue", "--n", "2",
                                  "--samples", "400", "--seed", "7", "--workers", workers});
    persist(run(cfg), path.string(), "csv");
  }
  const std::string a = slurp(path_a);
  const std::string b = slurp(path_b);
  CHECK(!a.empty());
  CHECK(a == b);
  std::filesystem::remove(path_a);
  std::filesystem::remove(path_b);
}

TEST_CASE("json output parses and mirrors the csv content") {
  RunConfig cfg = parse_config({"void", "--ensemble", "cpe", "--n", "8", "--samples", "200",
                                "--s-grid", "0.5", "1.0"});
  const RunReport report = run(cfg);
  const auto path = temp_file("ts_report.json");
  persist(report, path.string(), "json");
  const nlohmann::json doc = nlohmann::json::parse(slurp(path));
  CHECK(doc["config"]["ensemble"] == "cpe");
  CHECK(doc["config"]["command"] == "void");
  CHECK(doc["results"]["columns"].size() == 4u);
  CHECK(doc["results"]["rows"].size() == 2u);
  std::filesystem::remove(path);
}

TEST_CASE("theory command evaluates the analytic void series") {
  RunConfig cfg = parse_config({"theory", "--n", "2", "--s-grid", "0.0", "1.0"});
  const RunReport report = run(cfg);
  REQUIRE(report.rows.size() == 2u);
  CHECK(std::stod(report.rows[0][1]) == doctest::Approx(1.0).epsilon(1e-12));
  // closed form at s = 1 for N = 2
  const double pi = std::numbers::pi;
  const double target = 0.25 - 1.0 / (pi * pi);
  CHECK(std::stod(report.rows[1][1]) == doctest::Approx(target).epsilon(1e-8));
}

TEST_CASE("csv rendering via the main driver") {
  const auto path = temp_file("ts_main.csv");
  std::vector<std::string> args{"tensor_spectra", "simulate", "--ensemble", "cue", "--n", "2",
                                "--samples", "50", "--out", path.string()};
  std::vector<char*> argv;
  for (auto& token : args) argv.push_back(token.data());
  CHECK(run_main(static_cast<int>(argv.size()), argv.data()) == 0);

  std::istringstream in(slurp(path));
  std::string line;
  bool saw_version = false, saw_header = false;
  while (std::getline(in, line)) {
    if (line.rfind("# version=", 0) == 0) saw_version = true;
    if (line == "bin_left,bin_right,density,count") saw_header = true;
  }
  CHECK(saw_version);
  CHECK(saw_header);
  std::filesystem::remove(path);
}

TEST_CASE("main driver exit codes") {
  std::vector<std::string> bad{"tensor_spectra", "simulate", "--ensemble", "nope", "--n", "2"};
  std::vector<char*> argv;
  for (auto& token : bad) argv.push_back(token.data());
  CHECK(run_main(static_cast<int>(argv.size()), argv.data()) == 1);

  std::vector<std::string> none{"tensor_spectra"};
  argv.clear();
  for (auto& token : none) argv.push_back(token.data());
  CHECK(run_main(static_cast<int>(argv.size()), argv.data()) == 1);
}

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tensor_spectra/ensembles.hpp"

namespace tensor_spectra {

inline constexpr const char* kLibraryVersion = "tensor-spectra 1.0.0";

struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;  // simulate | void | theory | lemmas | reproduce-fig1 | reproduce-fig2
  EnsembleSpec ensemble{};
  bool ensemble_set = false;
  int bins = 40;
  double s_max = 4.0;
  std::vector<double> s_grid;  // default set per command
  std::string output;          // empty: stdout
  std::string format = "csv";
  int workers = 0;             // 0 = auto
};

struct RunReport {
  std::vector<std::pair<std::string, std::string>> config_echo;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;  // numbers preformatted, 17 significant digits
  std::vector<std::pair<std::string, bool>> checks;
  double wall_seconds = 0.0;
  // named sub-reports (one per reproduced figure panel)
  std::vector<std::pair<std::string, RunReport>> artifacts;
};

// 17 significant digits; round-trip exact for doubles
std::string format_double(double v);

RunConfig parse_config(const std::vector<std::string>& argv);

RunReport run(const RunConfig& config);

void persist(const RunReport& report, const std::string& path, const std::string& format);

// Full driver: parse, run, persist; returns the process exit code
// (0 ok, 1 usage, 2 numerical failure, 3 check failure).
int run_main(int argc, char** argv);

}  // namespace tensor_spectra

#include "tensor_spectra/runner.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "tensor_spectra/kernel_theory.hpp"
#include "tensor_spectra/lemma_lab.hpp"
#include "tensor_spectra/parallel.hpp"
#include "tensor_spectra/spectral_stats.hpp"

namespace tensor_spectra {

namespace {

struct help_requested : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string kind_name(EnsembleKind kind) {
  switch (kind) {
    case EnsembleKind::Cue: return "cue";
    case EnsembleKind::Cpe: return "cpe";
    case EnsembleKind::CueTensorCue: return "cue-tensor-cue";
    case EnsembleKind::Cue2Tensor: return "cue2-tensor";
  }
  throw std::invalid_argument("unknown ensemble kind");
}

EnsembleKind kind_from_name(const std::string& name) {
  if (name == "cue") return EnsembleKind::Cue;
  if (name == "cpe") return EnsembleKind::Cpe;
  if (name == "cue-tensor-cue") return EnsembleKind::CueTensorCue;
  if (name == "cue2-tensor") return EnsembleKind::Cue2Tensor;
  throw usage_error("unknown ensemble: " + name);
}

std::vector<double> uniform_grid(double max, double step) {
  std::vector<double> grid;
  for (int i = 0;; ++i) {
    const double s = i * step;
    if (s > max + 1e-12) break;
    grid.push_back(s);
  }
  return grid;
}

std::string join_grid(const std::vector<double>& grid) {
  std::string out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i) out += ",";
    out += format_double(grid[i]);
  }
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", v);
  return buffer;
}

RunConfig parse_config(const std::vector<std::string>& args) {
  RunConfig cfg;
  CLI::App app{"spectral statistics of tensor products of Haar-random unitaries"};
  app.require_subcommand(1);

  std::string ensemble_name;
  std::string workers_text = "auto";
  long long samples = 1024;
  std::uint64_t seed = 0;
  int n = 0;
  int m = 0;
  std::vector<double> s_grid;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.output, "output file (stdout when omitted)");
    sub->add_option("--format", cfg.format)->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--workers", workers_text, "worker count or 'auto'");
    sub->add_option("--seed", seed, "base RNG seed");
  };
  auto add_ensemble = [&](CLI::App* sub) {
    sub->add_option("--ensemble", ensemble_name, "cue | cpe | cue-tensor-cue | cue2-tensor")
        ->required();
    sub->add_option("--n", n, "matrix dimension N");
    sub->add_option("--m", m, "number of CUE_2 factors M");
    sub->add_option("--samples", samples, "independent configurations");
  };

  CLI::App* simulate = app.add_subcommand("simulate", "level-spacing histogram of an ensemble");
  add_ensemble(simulate);
  add_common(simulate);
  simulate->add_option("--bins", cfg.bins);
  simulate->add_option("--s-max", cfg.s_max);

  CLI::App* void_cmd = app.add_subcommand("void", "empirical void probabilities E(0;s)");
  add_ensemble(void_cmd);
  add_common(void_cmd);
  void_cmd->add_option("--s-grid", s_grid)->expected(-1);

  CLI::App* theory = app.add_subcommand("theory", "analytic void series for rescaled CUE_N");
  theory->add_option("--n", n, "matrix dimension N")->required();
  theory->add_option("--s-grid", s_grid)->expected(-1);
  add_common(theory);

  CLI::App* lemmas = app.add_subcommand("lemmas", "exact combinatorial lemma suite");
  add_common(lemmas);

  CLI::App* fig1 = app.add_subcommand("reproduce-fig1", "spacing statistics of CUE_N (x) CUE_N");
  add_common(fig1);
  CLI::App* fig2 = app.add_subcommand("reproduce-fig2", "spacing statistics of CUE_2^(x)M");
  add_common(fig2);

  std::vector<std::string> argv_storage;
  argv_storage.push_back("tensor_spectra");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& token : argv_storage) argv.push_back(token.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    throw help_requested(app.help());
  } catch (const CLI::ParseError& error) {
    throw usage_error(error.what());
  }

  CLI::App* chosen = app.get_subcommands().front();
  cfg.command = chosen->get_name();

  if (chosen == simulate || chosen == void_cmd) {
    cfg.ensemble.kind = kind_from_name(ensemble_name);
    const bool wants_m = cfg.ensemble.kind == EnsembleKind::Cue2Tensor;
    const int size = wants_m ? m : n;
    if (size <= 0)
      throw usage_error(wants_m ? "cue2-tensor requires --m" : "this ensemble requires --n");
    cfg.ensemble.size = size;
    cfg.ensemble.samples = samples;
    cfg.ensemble.seed = seed;
    cfg.ensemble_set = true;
  } else if (chosen == theory) {
    cfg.ensemble.kind = EnsembleKind::Cue;
    cfg.ensemble.size = n;
    cfg.ensemble.samples = 1;
    cfg.ensemble.seed = seed;
    cfg.ensemble_set = true;
  } else {
    cfg.ensemble.seed = seed;
  }
  cfg.s_grid = s_grid;

  if (const char* env = std::getenv("TENSOR_SPECTRA_WORKERS")) workers_text = env;
  if (workers_text == "auto") {
    cfg.workers = 0;
  } else {
    try {
      std::size_t used = 0;
      cfg.workers = std::stoi(workers_text, &used);
      if (used != workers_text.size() || cfg.workers < 1) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw usage_error("--workers expects a positive integer or 'auto'");
    }
  }
  return cfg;
}

namespace {

void echo_ensemble(RunReport& report, const RunConfig& cfg) {
  report.config_echo.emplace_back("ensemble", kind_name(cfg.ensemble.kind));
  report.config_echo.emplace_back(
      cfg.ensemble.kind == EnsembleKind::Cue2Tensor ? "m" : "n",
      std::to_string(cfg.ensemble.size));
  report.config_echo.emplace_back("samples", std::to_string(cfg.ensemble.samples));
  report.config_echo.emplace_back("seed", std::to_string(cfg.ensemble.seed));
}

RunReport histogram_report(const Histogram& hist) {
  RunReport report;
  report.columns = {"bin_left", "bin_right", "density", "count"};
  for (int b = 0; b < hist.bins(); ++b)
    report.rows.push_back({format_double(hist.edges(b)), format_double(hist.edges(b + 1)),
                           format_double(hist.density(b)), std::to_string(hist.counts(b))});
  return report;
}

RunReport run_simulate(const RunConfig& cfg) {
  const Histogram hist =
      spacing_histogram(cfg.ensemble, cfg.bins, cfg.s_max, resolve_workers(cfg.workers));
  RunReport report = histogram_report(hist);
  report.config_echo.emplace_back("command", cfg.command);
  echo_ensemble(report, cfg);
  report.config_echo.emplace_back("bins", std::to_string(cfg.bins));
  report.config_echo.emplace_back("s_max", format_double(cfg.s_max));
  return report;
}

RunReport run_void(const RunConfig& cfg) {
  const std::vector<double> grid = cfg.s_grid.empty() ? uniform_grid(3.0, 0.1) : cfg.s_grid;
  const VoidCurve curve = void_curve(cfg.ensemble, grid, resolve_workers(cfg.workers));
  RunReport report;
  report.config_echo.emplace_back("command", cfg.command);
  echo_ensemble(report, cfg);
  report.config_echo.emplace_back("s_grid", join_grid(grid));
  report.columns = {"s", "E_hat", "stderr", "samples"};
  for (Eigen::Index i = 0; i < curve.s.size(); ++i)
    report.rows.push_back({format_double(curve.s(i)), format_double(curve.estimate(i)),
                           format_double(curve.std_error(i)), std::to_string(curve.samples)});
  return report;
}

RunReport run_theory(const RunConfig& cfg) {
  const KernelContext ctx{cfg.ensemble.size};
  const double s_cap = std::min(3.0, static_cast<double>(ctx.n));
  const std::vector<double> grid = cfg.s_grid.empty() ? uniform_grid(s_cap, 0.1) : cfg.s_grid;
  RunReport report;
  report.config_echo.emplace_back("command", cfg.command);
  report.config_echo.emplace_back("n", std::to_string(ctx.n));
  report.config_echo.emplace_back("s_grid", join_grid(grid));
  report.columns = {"s", "E_series", "error_est"};
  for (double s : grid) {
    const VoidSeriesResult series = void_series(ctx, s);
    report.rows.push_back({format_double(s), format_double(series.value),
                           format_double(series.error_estimate)});
  }
  return report;
}

RunReport run_lemmas(const RunConfig& cfg) {
  RunReport report;
  report.config_echo.emplace_back("command", cfg.command);

  bool stirling_ok = true;
  for (int k = 1; k <= 20 && stirling_ok; ++k)
    for (int x = 0; x <= 30; ++x)
      if (!stirling_identity_check(k, x)) {
        stirling_ok = false;
        break;
      }
  report.checks.emplace_back("stirling-identity", stirling_ok);

  bool tail_ok = true;
  for (int s = 2; s <= 8 && tail_ok; ++s)
    for (double gamma = 0.05; gamma < 1.0 / s - 0.05 + 1e-9 && tail_ok; gamma += 0.05)
      for (int n = 1; n <= 60; ++n) {
        const TailReport tail = multinomial_tail(s, gamma, n);
        if (tail.tail > tail.hoeffding + 1e-12) {
          tail_ok = false;
          break;
        }
      }
  report.checks.emplace_back("multinomial-hoeffding", tail_ok);

  const bool tail_decreasing =
      multinomial_tail(4, 0.1, 60).tail_exact < multinomial_tail(4, 0.1, 12).tail_exact;
  report.checks.emplace_back("multinomial-tail-vanishes", tail_decreasing);

  const RankLemmaReport ranks = rank_lemma_check(4, 8);
  report.checks.emplace_back("binary-rank-lemma", !ranks.counterexample_found);

  report.columns = {"check", "pass"};
  for (const auto& [name, pass] : report.checks)
    report.rows.push_back({name, pass ? "1" : "0"});
  return report;
}

RunReport run_figure(const RunConfig& cfg, bool fig1) {
  RunReport report;
  report.config_echo.emplace_back("command", cfg.command);
  report.config_echo.emplace_back("seed", std::to_string(cfg.ensemble.seed));
  report.columns = {fig1 ? "n" : "m", "samples", "ks_exponential"};
  const std::vector<std::pair<int, long long>> cases =
      fig1 ? std::vector<std::pair<int, long long>>{{2, 1LL << 17}, {3, 1LL << 16}, {20, 1LL << 13}}
           : std::vector<std::pair<int, long long>>{{2, 1LL << 17}, {3, 1LL << 16}, {8, 1LL << 14}};
  for (const auto& [size, samples] : cases) {
    EnsembleSpec spec;
    spec.kind = fig1 ? EnsembleKind::CueTensorCue : EnsembleKind::Cue2Tensor;
    spec.size = size;
    spec.samples = samples;
    spec.seed = cfg.ensemble.seed;
    EnsembleStatistics stats = collect_statistics(spec, cfg.bins, cfg.s_max, uniform_grid(3.0, 0.1),
                                                  resolve_workers(cfg.workers));
    const double ks = ks_exponential(std::move(stats.pooled_spacings));
    report.rows.push_back({std::to_string(size), std::to_string(samples), format_double(ks)});

    RunReport panel = histogram_report(stats.histogram);
    panel.config_echo.emplace_back("command", "simulate");
    panel.config_echo.emplace_back("ensemble", kind_name(spec.kind));
    panel.config_echo.emplace_back(fig1 ? "n" : "m", std::to_string(size));
    panel.config_echo.emplace_back("samples", std::to_string(samples));
    panel.config_echo.emplace_back("seed", std::to_string(spec.seed));
    panel.config_echo.emplace_back("bins", std::to_string(cfg.bins));
    panel.config_echo.emplace_back("s_max", format_double(cfg.s_max));
    const std::string tag = (fig1 ? "fig1-n" : "fig2-m") + std::to_string(size);
    report.artifacts.emplace_back(tag, std::move(panel));
  }
  return report;
}

}  // namespace

RunReport run(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  RunReport report;
  if (cfg.command == "simulate") {
    report = run_simulate(cfg);
  } else if (cfg.command == "void") {
    report = run_void(cfg);
  } else if (cfg.command == "theory") {
    report = run_theory(cfg);
  } else if (cfg.command == "lemmas") {
    report = run_lemmas(cfg);
  } else if (cfg.command == "reproduce-fig1") {
    report = run_figure(cfg, true);
  } else if (cfg.command == "reproduce-fig2") {
    report = run_figure(cfg, false);
  } else {
    throw usage_error("unknown command: " + cfg.command);
  }
  report.config_echo.insert(report.config_echo.begin(), {"version", kLibraryVersion});
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

namespace {

std::string render_csv(const RunReport& report) {
  std::ostringstream out;
  for (const auto& [key, value] : report.config_echo) out << "# " << key << "=" << value << "\n";
  for (const auto& [name, pass] : report.checks)
    out << "# check:" << name << "=" << (pass ? "pass" : "fail") << "\n";
  for (std::size_t c = 0; c < report.columns.size(); ++c)
    out << (c ? "," : "") << report.columns[c];
  out << "\n";
  for (const auto& row : report.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
    out << "\n";
  }
  return out.str();
}

std::string render_json(const RunReport& report) {
  nlohmann::json doc;
  for (const auto& [key, value] : report.config_echo) doc["config"][key] = value;
  doc["results"]["columns"] = report.columns;
  doc["results"]["rows"] = report.rows;
  doc["meta"]["version"] = kLibraryVersion;
  for (const auto& [name, pass] : report.checks) doc["meta"]["checks"][name] = pass;
  return doc.dump(2) + "\n";
}

void write_atomically(const std::string& path, const std::string& payload) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path temp = target.string() + ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    out << payload;
    if (!out.good()) {
      out.close();
      std::error_code ignore;
      fs::remove(temp, ignore);
      throw std::runtime_error("persist: write failed for " + path);
    }
  }
  std::error_code ec;
  fs::rename(temp, target, ec);
  if (ec) {
    std::error_code ignore;
    fs::remove(temp, ignore);
    throw std::runtime_error("persist: rename failed for " + path);
  }
}

std::string artifact_path(const std::string& base, const std::string& tag) {
  namespace fs = std::filesystem;
  fs::path p(base);
  const std::string ext = p.extension().string();
  fs::path stem = p;
  stem.replace_extension();
  return stem.string() + "." + tag + ext;
}

}  // namespace

void persist(const RunReport& report, const std::string& path, const std::string& format) {
  const std::string payload = format == "json" ? render_json(report) : render_csv(report);
  write_atomically(path, payload);
  for (const auto& [tag, artifact] : report.artifacts)
    persist(artifact, artifact_path(path, tag), format);
}

int run_main(int argc, char** argv) {
  RunConfig cfg;
  try {
    cfg = parse_config(std::vector<std::string>(argv + 1, argv + argc));
  } catch (const help_requested& help) {
    std::cout << help.what();
    return 0;
  } catch (const usage_error& error) {
    std::cerr << "usage error: " << error.what() << "\n";
    return 1;
  }

  RunReport report;
  try {
    report = run(cfg);
  } catch (const usage_error& error) {
    std::cerr << "usage error: " << error.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& error) {
    std::cerr << "usage error: " << error.what() << "\n";
    return 1;
  } catch (const numerical_error& error) {
    std::cerr << "numerical failure: " << error.what() << "\n";
    return 2;
  }

  try {
    if (cfg.output.empty()) {
      std::cout << (cfg.format == "json" ? render_json(report) : render_csv(report));
    } else {
      persist(report, cfg.output, cfg.format);
    }
  } catch (const std::exception& error) {
    std::cerr << "output failure: " << error.what() << "\n";
    return 2;
  }
  std::cerr << "completed in " << format_double(report.wall_seconds) << " s\n";

  for (const auto& [name, pass] : report.checks)
    if (!pass) return 3;
  return 0;
}

}  // namespace tensor_spectra

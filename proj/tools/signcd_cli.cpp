// signcd: run threshold-learning and sign-oracle optimization experiments.
//
//   signcd learn-threshold --config F
//   signcd optimize --config F
//   signcd sweep --config F --out D
//   signcd slope --table F.csv --column excess_risk
//
// Exit codes: 0 success, 2 configuration/usage error, 3 runtime failure.

#include "signcd/harness.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace signcd;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

nlohmann::json row_json(const RunRow& row) {
  RunTable t;
  t.rows.push_back(row);
  return t.to_json().at(0);
}

int single_run(const std::string& path, ExperimentKind expected) {
  const ExperimentConfig cfg = load_experiment_config(path);
  if (cfg.kind != expected) {
    throw ConfigError("experiment.kind", "expected '" + std::string(to_string(expected)) + "' for this subcommand");
  }
  const RunRow row = run_single(cfg);
  std::cout << row_json(row).dump(2) << '\n';
  if (!row.ok()) {
    std::cerr << row.status << '\n';
    return kExitRuntime;
  }
  return 0;
}

int sweep(const std::string& path, const std::string& out_dir, int concurrency) {
  const ExperimentConfig cfg = load_experiment_config(path);
  validate_sweep(cfg);
  const RunTable table = run_experiment(cfg, concurrency);

  fs::create_directories(out_dir);
  const fs::path csv = fs::path(out_dir) / (cfg.id + ".csv");
  {
    std::ofstream out(csv);
    table.write_csv(out);
  }
  std::cerr << "wrote " << csv.string() << " (" << table.rows.size() << " rows)\n";
  if (cfg.report == ReportFormat::json) {
    const fs::path js = fs::path(out_dir) / (cfg.id + ".json");
    std::ofstream(js) << table.to_json().dump(2) << '\n';
    std::cerr << "wrote " << js.string() << '\n';
  } else if (cfg.report == ReportFormat::slope_summary) {
    const SlopeReport rep = slope_report(table, Statistic::median, cfg.report_column);
    const fs::path txt = fs::path(out_dir) / (cfg.id + ".slope.json");
    std::ofstream(txt) << rep.to_json().dump(2) << '\n';
    std::cout << rep.summary();
  }
  if (const auto errors = table.error_count(); errors > 0) {
    std::cerr << errors << " cell(s) failed; see the status column\n";
    return kExitRuntime;
  }
  return 0;
}

int slope(const std::string& table_path, const std::string& column, const std::string& statistic, bool json) {
  std::ifstream in(table_path);
  if (!in) throw ConfigError("--table", "cannot open '" + table_path + "'");
  const RunTable table = RunTable::read_csv(in);
  Statistic stat = Statistic::median;
  if (statistic == "mean") {
    stat = Statistic::mean;
  } else if (statistic != "median") {
    throw ConfigError("--statistic", "expected median or mean");
  }
  const SlopeReport rep = slope_report(table, stat, column);
  if (json) {
    std::cout << rep.to_json().dump(2) << '\n';
  } else {
    std::cout << rep.summary();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Active threshold learning and stochastic-sign coordinate descent experiments"};
  app.require_subcommand(1);

  std::string config;
  std::string out_dir;
  std::string table;
  std::string column = "excess_risk";
  std::string statistic = "median";
  int concurrency = 0;
  bool json = false;

  auto* learn = app.add_subcommand("learn-threshold", "Run one 1-D threshold learner");
  learn->add_option("--config", config, "Experiment config file")->required()->check(CLI::ExistingFile);

  auto* optimize = app.add_subcommand("optimize", "Run one sign-oracle coordinate descent");
  optimize->add_option("--config", config, "Experiment config file")->required()->check(CLI::ExistingFile);

  auto* sweep_cmd = app.add_subcommand("sweep", "Run a budget x replication sweep");
  sweep_cmd->add_option("--config", config, "Experiment config file")->required()->check(CLI::ExistingFile);
  sweep_cmd->add_option("--out", out_dir, "Output directory")->required();
  sweep_cmd->add_option("--concurrency", concurrency,
                        std::string("Worker threads (default: ") + kConcurrencyEnv + " or hardware)");

  auto* slope_cmd = app.add_subcommand("slope", "Fit the log-log rate slope of a sweep table");
  slope_cmd->add_option("--table", table, "CSV table written by sweep")->required();
  slope_cmd->add_option("--column", column, "point_error | excess_risk | f_error");
  slope_cmd->add_option("--statistic", statistic, "median | mean");
  slope_cmd->add_flag("--json", json, "Emit JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*learn) return single_run(config, ExperimentKind::learn_threshold);
    if (*optimize) return single_run(config, ExperimentKind::optimize);
    if (*sweep_cmd) return sweep(config, out_dir, concurrency);
    if (*slope_cmd) return slope(table, column, statistic, json);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}

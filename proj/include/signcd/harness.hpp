#pragma once

#include "signcd/config.hpp"
#include "signcd/learners.hpp"
#include "signcd/metrics.hpp"
#include "signcd/optimizer.hpp"
#include "signcd/oracles.hpp"
#include "signcd/problems.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace signcd {

inline constexpr int kCsvSchemaVersion = 1;
inline constexpr const char* kConcurrencyEnv = "SIGNCD_CONCURRENCY";

enum class ExperimentKind { learn_threshold, optimize };
enum class ReportFormat { csv, json, slope_summary };
enum class Statistic { median, mean };

std::string_view to_string(ExperimentKind k);
std::string_view to_string(ReportFormat f);

struct ExperimentConfig {
  std::string id = "experiment";
  ExperimentKind kind = ExperimentKind::learn_threshold;

  // learn-threshold
  std::optional<TncProblem> problem;
  LearnerKind learner = LearnerKind::adaptive;
  LearnerConfig learner_config;

  // optimize
  std::shared_ptr<const UcFunction> function;
  SignMode oracle = AdditiveNoise{};
  std::optional<std::int64_t> oracle_budget;
  OptimizerConfig optimizer;
  std::optional<Point> x0;  // box center when unset

  // single runs
  std::int64_t budget = 0;
  std::uint64_t seed = 0;

  // sweeps
  std::vector<std::int64_t> budgets;
  std::int64_t replications = 1;
  std::uint64_t base_seed = 0;
  int concurrency = 0;  // 0: environment default

  std::string output_path;
  ReportFormat report = ReportFormat::csv;
  std::string report_column;
};

// Parses the key-value format; relative file references resolve against
// base_dir. Throws ConfigError naming the offending key.
ExperimentConfig parse_experiment_config(std::string_view text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_experiment_config(const std::filesystem::path& file);

// Throws ConfigError when sweep fields are inconsistent.
void validate_sweep(const ExperimentConfig& config);

// Seed for replication r; independent of every other replication.
std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t replication);

struct RunRow {
  std::string experiment_id;
  std::int64_t budget = 0;
  std::int64_t replication = 0;
  std::uint64_t seed = 0;
  std::vector<double> estimate;
  double point_error = 0.0;
  std::optional<double> excess_risk;
  std::optional<double> f_error;
  std::int64_t queries_used = 0;
  std::string status = "ok";
  double wall_time_ms = 0.0;

  [[nodiscard]] bool ok() const { return status == "ok"; }
};

struct RunTable {
  std::vector<RunRow> rows;

  [[nodiscard]] std::size_t error_count() const;
  void write_csv(std::ostream& out, bool include_timing = true) const;
  [[nodiscard]] std::string to_csv(bool include_timing = true) const;
  [[nodiscard]] nlohmann::json to_json() const;
  static RunTable read_csv(std::istream& in);
};

// One (budget, replication) cell. Errors inside the run come back as an error row.
RunRow run_cell(const ExperimentConfig& config, std::int64_t budget, std::int64_t replication);

// Single run at config.budget with config.seed.
RunRow run_single(const ExperimentConfig& config);

// Every (budget, replication) cell, in (budget, replication) order whatever
// the completion order. concurrency <= 0 uses config.concurrency, then the
// SIGNCD_CONCURRENCY environment variable, then the hardware thread count.
RunTable run_experiment(const ExperimentConfig& config, int concurrency = 0);

int default_concurrency();

struct BudgetAggregate {
  std::int64_t budget = 0;
  double value = 0.0;
  std::size_t samples = 0;
  bool excluded = false;
};

struct SlopeReport {
  std::string column;
  Statistic statistic = Statistic::median;
  RateFit fit;
  std::vector<BudgetAggregate> aggregates;
  std::size_t excluded_zero = 0;
  std::vector<std::string> warnings;

  [[nodiscard]] nlohmann::json to_json() const;
  [[nodiscard]] std::string summary() const;
};

// Aggregates `column` per budget over successful rows, then fits the log-log slope.
SlopeReport slope_report(const RunTable& table, Statistic statistic, std::string_view column);

}  // namespace signcd

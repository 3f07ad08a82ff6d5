#include "signcd/harness.hpp"
#include "support/reference.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <set>
#include <sstream>

using namespace signcd;

namespace {

const char* kThresholdConfig = R"(# small sweep
experiment.kind = learn-threshold
experiment.id = small
problem.t = 0.37
problem.k = 2
problem.mu = 1
problem.cap = 0.4
learner.kind = adaptive
sweep.budgets = 100, 400
sweep.replications = 2
sweep.base_seed = 5
)";

const char* kOptimizeConfig = R"(
experiment.kind = optimize
experiment.id = opt
function.family = quadratic
function.dim = 2
function.diag = 1, 2
function.minimizer = 0.3, -0.2
oracle.mode = additive-noise
oracle.noise = uniform
oracle.halfwidth = 2
optimizer.line_search = adaptive
sweep.budgets = 2000, 4000, 8000
sweep.replications = 6
sweep.base_seed = 9
)";

std::string with(std::string text, const std::string& line) { return text + line + "\n"; }

std::string config_error_key(const std::string& text) {
  try {
    parse_experiment_config(text);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<no error>";
}

RunTable table_with_errors(std::vector<std::pair<std::int64_t, double>> cells) {
  RunTable t;
  std::int64_t rep = 0;
  for (const auto& [budget, err] : cells) {
    RunRow r;
    r.experiment_id = "synthetic";
    r.budget = budget;
    r.replication = rep++;
    r.estimate = {0.0};
    r.point_error = err;
    r.excess_risk = err;
    t.rows.push_back(r);
  }
  return t;
}

}  // namespace

// --- config ----------------------------------------------------------------------

TEST(ExperimentConfig, ParsesThresholdSweep) {
  const auto c = parse_experiment_config(kThresholdConfig);
  EXPECT_EQ(c.kind, ExperimentKind::learn_threshold);
  EXPECT_EQ(c.id, "small");
  ASSERT_TRUE(c.problem.has_value());
  EXPECT_EQ(c.problem->t, 0.37);
  EXPECT_EQ(c.learner, LearnerKind::adaptive);
  EXPECT_EQ(c.budgets, (std::vector<std::int64_t>{100, 400}));
  EXPECT_EQ(c.replications, 2);
  EXPECT_EQ(c.base_seed, 5u);
  EXPECT_EQ(c.report, ReportFormat::csv);
}

TEST(ExperimentConfig, ParsesOptimizeSweep) {
  const auto c = parse_experiment_config(kOptimizeConfig);
  EXPECT_EQ(c.kind, ExperimentKind::optimize);
  ASSERT_NE(c.function, nullptr);
  EXPECT_EQ(c.function->dim(), 2u);
  EXPECT_TRUE(std::holds_alternative<AdditiveNoise>(c.oracle));
  EXPECT_EQ(c.optimizer.line_search, LearnerKind::adaptive);
  EXPECT_FALSE(c.x0.has_value());
}

TEST(ExperimentConfig, ErrorsNameTheKey) {
  EXPECT_EQ(config_error_key(with(kThresholdConfig, "learner.buget = 10")), "learner.buget");
  EXPECT_EQ(config_error_key(with(kThresholdConfig, "learner.kind = newton")), "learner.kind");
  EXPECT_EQ(config_error_key(with(kOptimizeConfig, "oracle.mode = psychic")), "oracle.mode");
  EXPECT_EQ(config_error_key(with(kOptimizeConfig, "optimizer.x0 = 3, 0")), "optimizer.x0");
  EXPECT_EQ(config_error_key("experiment.kind = learn-threshold\n"), "problem.t");
  EXPECT_EQ(config_error_key("experiment.kind = cook\n"), "experiment.kind");
  EXPECT_EQ(config_error_key(with(kThresholdConfig, "problem.k = 9")), "problem.k");
  EXPECT_EQ(config_error_key(with(kOptimizeConfig, "function.matrix = 1, 2, 3")), "function.matrix");
}

TEST(ExperimentConfig, SweepValidation) {
  auto c = parse_experiment_config(kThresholdConfig);
  c.budgets = {100, 10};
  try {
    validate_sweep(c);
    FAIL() << "expected a sweep error";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key(), "sweep.budgets");
    EXPECT_NE(std::string(e.what()).find("increasing"), std::string::npos);
  }
  c.budgets = {};
  EXPECT_THROW(validate_sweep(c), ConfigError);
  c.budgets = {10};
  c.replications = 0;
  EXPECT_THROW(validate_sweep(c), ConfigError);
  c.replications = 1;
  EXPECT_THROW(run_experiment(parse_experiment_config(with(kThresholdConfig, "sweep.budgets = 100, 10"))),
               ConfigError);
}

TEST(ExperimentConfig, ShippedConfigsLoad) {
  for (const char* name : {"adaptive_k2.cfg", "adaptive_k3.cfg", "bz_k2.cfg", "rssgd_quadratic_d5.cfg",
                           "rssgd_power_d3.cfg", "rssgd_quantized_d3.cfg"}) {
    const auto c = load_experiment_config(std::string(SIGNCD_CONFIG_DIR) + "/" + name);
    EXPECT_NO_THROW(validate_sweep(c)) << name;
  }
  EXPECT_THROW(load_experiment_config("/nonexistent/x.cfg"), ConfigError);
}

// --- runs ------------------------------------------------------------------------

TEST(RunExperiment, CellCountAndOrder) {
  const auto c = parse_experiment_config(kThresholdConfig);
  const auto t = run_experiment(c, 1);
  ASSERT_EQ(t.rows.size(), 4u);
  std::set<std::pair<std::int64_t, std::int64_t>> keys;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    EXPECT_EQ(t.rows[i].budget, c.budgets[i / 2]);
    EXPECT_EQ(t.rows[i].replication, static_cast<std::int64_t>(i % 2));
    EXPECT_EQ(t.rows[i].seed, derive_seed(5, i % 2));
    EXPECT_TRUE(t.rows[i].ok()) << t.rows[i].status;
    keys.insert({t.rows[i].budget, t.rows[i].replication});
  }
  EXPECT_EQ(keys.size(), 4u);
}

TEST(RunExperiment, DeterministicCsv) {
  for (const char* text : {kThresholdConfig, kOptimizeConfig}) {
    const auto c = parse_experiment_config(text);
    EXPECT_EQ(run_experiment(c, 1).to_csv(false), run_experiment(c, 1).to_csv(false));
  }
}

TEST(RunExperiment, ParallelEqualsSerial) {
  for (const char* text : {kThresholdConfig, kOptimizeConfig}) {
    const auto c = parse_experiment_config(text);
    EXPECT_EQ(run_experiment(c, 1).to_csv(false), run_experiment(c, 8).to_csv(false));
  }
}

TEST(RunExperiment, ConcurrencyFromEnvironment) {
  ::setenv(kConcurrencyEnv, "3", 1);
  EXPECT_EQ(default_concurrency(), 3);
  ::setenv(kConcurrencyEnv, "junk", 1);
  EXPECT_GE(default_concurrency(), 1);
  ::unsetenv(kConcurrencyEnv);
  const auto c = parse_experiment_config(kThresholdConfig);
  EXPECT_EQ(run_experiment(c).to_csv(false), run_experiment(c, 1).to_csv(false));
}

TEST(RunExperiment, ReplicationSeedsAreIndependent) {
  // Replication 3 alone gives the same row as inside a 5-replication sweep.
  auto c = parse_experiment_config(kOptimizeConfig);
  c.replications = 5;
  const auto full = run_experiment(c, 1);
  const RunRow alone = run_cell(c, 4000, 3);
  const RunRow& inside = full.rows[5 + 3];
  EXPECT_EQ(inside.budget, 4000);
  EXPECT_EQ(alone.seed, inside.seed);
  EXPECT_EQ(alone.estimate, inside.estimate);
  EXPECT_EQ(alone.f_error, inside.f_error);
  std::set<std::uint64_t> seeds;
  for (std::uint64_t r = 0; r < 1000; ++r) seeds.insert(derive_seed(9, r));
  EXPECT_EQ(seeds.size(), 1000u);
  EXPECT_NE(derive_seed(9, 0), derive_seed(10, 0));
}

TEST(RunExperiment, BudgetHonesty) {
  for (const char* text : {kThresholdConfig, kOptimizeConfig}) {
    for (const char* learner : {"passive", "bz", "adaptive", "bisect"}) {
      const std::string key = std::string(text) == kThresholdConfig ? "learner.kind" : "optimizer.line_search";
      std::string t = text;
      t.replace(t.find(key), t.find('\n', t.find(key)) - t.find(key), key + " = " + learner);
      const auto table = run_experiment(parse_experiment_config(t), 1);
      for (const auto& r : table.rows) {
        EXPECT_TRUE(r.ok()) << r.status;
        EXPECT_LE(r.queries_used, r.budget) << learner;
      }
    }
  }
}

TEST(RunExperiment, ErrorCellsBecomeRows) {
  // 1000 is below the d (ln T)^2 schedule for d = 30; 20000 is not.
  std::string text = kOptimizeConfig;
  text.replace(text.find("function.dim = 2"), 16, "function.dim = 30");
  text.replace(text.find("function.diag = 1, 2"), 20, "function.diag = 1");
  text.replace(text.find("function.minimizer = 0.3, -0.2"), 30, "function.minimizer = 0.1");
  text.replace(text.find("sweep.budgets = 2000, 4000, 8000"), 32, "sweep.budgets = 1000, 20000");
  auto c = parse_experiment_config(text);
  c.replications = 1;
  const auto t = run_experiment(c, 1);
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_FALSE(t.rows[0].ok());
  EXPECT_EQ(t.rows[0].status.rfind("error: ", 0), 0u);
  EXPECT_TRUE(t.rows[1].ok());
  EXPECT_EQ(t.error_count(), 1u);
  std::istringstream in(t.to_csv());
  EXPECT_EQ(RunTable::read_csv(in).rows[0].status, t.rows[0].status);
}

TEST(RunExperiment, SingleRun) {
  auto c = parse_experiment_config(with(kThresholdConfig, "learner.budget = 300\nseed = 4"));
  EXPECT_EQ(c.budget, 300);
  EXPECT_EQ(c.seed, 4u);
  const auto a = run_single(c);
  EXPECT_EQ(a.seed, 4u);
  EXPECT_EQ(a.budget, 300);
  EXPECT_EQ(a.estimate, run_single(c).estimate);
  c.budget = 0;
  EXPECT_THROW(run_single(c), ConfigError);
}

// --- tables ----------------------------------------------------------------------

TEST(RunTable, CsvRoundTripIsBitExact) {
  const auto t = run_experiment(parse_experiment_config(kOptimizeConfig), 1);
  const std::string csv = t.to_csv();
  EXPECT_EQ(csv.rfind("schema_version,", 0), 0u);
  std::istringstream in(csv);
  const auto back = RunTable::read_csv(in);
  ASSERT_EQ(back.rows.size(), t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    EXPECT_EQ(back.rows[i].estimate, t.rows[i].estimate);
    EXPECT_EQ(back.rows[i].f_error, t.rows[i].f_error);
    EXPECT_EQ(back.rows[i].point_error, t.rows[i].point_error);
    EXPECT_EQ(back.rows[i].seed, t.rows[i].seed);
    EXPECT_EQ(back.rows[i].queries_used, t.rows[i].queries_used);
    EXPECT_EQ(back.rows[i].wall_time_ms, t.rows[i].wall_time_ms);
  }
  EXPECT_EQ(back.to_csv(), csv);
}

TEST(RunTable, JsonMirrorsCsv) {
  const auto t = run_experiment(parse_experiment_config(kThresholdConfig), 1);
  const auto js = t.to_json();
  ASSERT_TRUE(js.is_array());
  ASSERT_EQ(js.size(), t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    EXPECT_EQ(js[i]["schema_version"], kCsvSchemaVersion);
    EXPECT_EQ(js[i]["budget"], t.rows[i].budget);
    EXPECT_EQ(js[i]["seed"], t.rows[i].seed);
    EXPECT_EQ(js[i]["estimate"].get<double>(), t.rows[i].estimate.front());
    EXPECT_EQ(js[i]["excess_risk"].get<double>(), *t.rows[i].excess_risk);
    EXPECT_TRUE(js[i]["f_error"].is_null());
    EXPECT_EQ(js[i]["status"], "ok");
  }
}

TEST(RunTable, RejectsForeignSchema) {
  std::istringstream missing("budget,replication\n1,0\n");
  EXPECT_THROW(RunTable::read_csv(missing), InvalidArgument);
  std::istringstream version("schema_version,budget,replication,status\n2,10,0,ok\n");
  EXPECT_THROW(RunTable::read_csv(version), InvalidArgument);
}

// --- slope reports ------------------------------------------------------------------

TEST(SlopeReport, ExactMedians) {
  const auto t = table_with_errors({{10, 1}, {10, 5}, {10, 0.5}, {100, 0.1}, {1000, 0.01}});
  const auto rep = slope_report(t, Statistic::median, "excess_risk");
  EXPECT_NEAR(rep.fit.slope, -1.0, 1e-12);
  ASSERT_EQ(rep.aggregates.size(), 3u);
  EXPECT_EQ(rep.aggregates[0].value, 1.0);
  EXPECT_EQ(rep.aggregates[0].samples, 3u);
  EXPECT_TRUE(rep.warnings.empty());
  const auto mean = slope_report(t, Statistic::mean, "excess_risk");
  EXPECT_NEAR(mean.aggregates[0].value, 6.5 / 3, 1e-15);
}

TEST(SlopeReport, ZeroMedianBudgetIsExcludedWithWarning) {
  const auto t = table_with_errors({{10, 1}, {100, 0}, {100, 0}, {100, 0.3}, {1000, 0.01}});
  const auto rep = slope_report(t, Statistic::median, "point_error");
  EXPECT_EQ(rep.excluded_zero, 1u);
  EXPECT_EQ(rep.fit.excluded, 1u);
  ASSERT_EQ(rep.warnings.size(), 1u);
  EXPECT_NE(rep.warnings[0].find("100"), std::string::npos);
  EXPECT_NEAR(rep.fit.slope, -1.0, 1e-12);
  EXPECT_NE(rep.summary().find("warning"), std::string::npos);
  EXPECT_EQ(rep.to_json()["excluded_zero"], 1);
}

TEST(SlopeReport, Errors) {
  EXPECT_THROW(slope_report(table_with_errors({{10, 1}, {10, 2}}), Statistic::median, "excess_risk"),
               InvalidArgument);
  EXPECT_THROW(slope_report(table_with_errors({{10, 1}, {100, 2}}), Statistic::median, "loss"), InvalidArgument);
  EXPECT_THROW(slope_report(RunTable{}, Statistic::median, "excess_risk"), InvalidArgument);
}

TEST(SlopeReport, AdaptiveK2SweepRate) {
  const auto c = load_experiment_config(std::string(SIGNCD_CONFIG_DIR) + "/adaptive_k2.cfg");
  const auto rep = slope_report(run_experiment(c), Statistic::median, c.report_column);
  EXPECT_GE(rep.fit.slope, -1.2);
  EXPECT_LE(rep.fit.slope, -0.8);
}

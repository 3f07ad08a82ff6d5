#include "signcd/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

namespace signcd {

std::string_view to_string(ExperimentKind k) {
  return k == ExperimentKind::learn_threshold ? "learn-threshold" : "optimize";
}

std::string_view to_string(ReportFormat f) {
  switch (f) {
    case ReportFormat::csv: return "csv";
    case ReportFormat::json: return "json";
    case ReportFormat::slope_summary: return "slope-summary";
  }
  return "?";
}

namespace {

// Re-throws library validation failures as ConfigError under `key`.
template <class F>
auto keyed(const std::string& key, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(key, e.what());
  }
}

Eigen::VectorXd broadcast(const std::string& key, const std::vector<double>& v, std::size_t dim) {
  if (v.size() == 1) return Eigen::VectorXd::Constant(static_cast<Eigen::Index>(dim), v[0]);
  if (v.size() != dim) {
    throw ConfigError(key, "expected 1 or " + std::to_string(dim) + " values, got " + std::to_string(v.size()));
  }
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<double> doubles_or(KeyValueConfig& kv, const std::string& key, std::vector<double> fallback) {
  return kv.has(key) ? kv.get_doubles(key) : std::move(fallback);
}

LearnerConfig parse_learner_config(KeyValueConfig& kv) {
  LearnerConfig c;
  c.budget = kv.get_int("learner.budget", 0);
  c.confidence = kv.get_double("learner.confidence", c.confidence);
  c.c_delta = kv.get_double("learner.c_delta", c.c_delta);
  c.orientation = keyed("learner.orientation", [&] {
    return parse_orientation_mode(kv.get_string("learner.orientation", "positive-right"));
  });
  c.grid_size = kv.get_int("learner.grid_size", 0);
  c.bz_k = kv.get_double("learner.bz_k", c.bz_k);
  c.bz_mu = kv.get_double("learner.bz_mu", c.bz_mu);
  keyed("learner", [&] {
    LearnerConfig probe = c;
    probe.budget = std::max<std::int64_t>(probe.budget, 0);
    validate(probe);
  });
  return c;
}

std::shared_ptr<const UcFunction> parse_function(KeyValueConfig& kv, const std::filesystem::path& base_dir) {
  const Family family = keyed("function.family", [&] { return parse_family(kv.get_string("function.family")); });

  if (family == Family::ridge) {
    RidgeData data;
    if (auto file = kv.find("function.data_file")) {
      std::filesystem::path p(*file);
      if (p.is_relative()) p = base_dir / p;
      std::ifstream in(p);
      if (!in) throw ConfigError("function.data_file", "cannot open '" + p.string() + "'");
      data = keyed("function.data_file", [&] { return read_ridge_data(in); });
    } else {
      const auto rows = kv.get_int("function.rows");
      const auto m = kv.get_doubles("function.matrix");
      const auto b = kv.get_doubles("function.b");
      if (rows < 1 || m.size() % static_cast<std::size_t>(rows) != 0) {
        throw ConfigError("function.matrix", "length is not a multiple of function.rows");
      }
      const auto cols = static_cast<Eigen::Index>(m.size() / static_cast<std::size_t>(rows));
      data.A = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
          m.data(), rows, cols);
      data.b = Eigen::Map<const Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(b.size()));
    }
    const auto dim = static_cast<std::size_t>(data.A.cols());
    const auto lo = broadcast("function.lo", doubles_or(kv, "function.lo", {-1.0}), dim);
    const auto hi = broadcast("function.hi", doubles_or(kv, "function.hi", {1.0}), dim);
    return keyed("function", [&] {
      std::vector<Interval> sides;
      for (std::size_t j = 0; j < dim; ++j) sides.push_back(make_interval(lo[Eigen::Index(j)], hi[Eigen::Index(j)]));
      return std::make_shared<const UcFunction>(make_ridge(Box(sides), data.A, data.b));
    });
  }

  const auto dim_raw = kv.get_int("function.dim");
  if (dim_raw < 1) throw ConfigError("function.dim", "must be at least 1");
  const auto dim = static_cast<std::size_t>(dim_raw);
  const auto lo = broadcast("function.lo", doubles_or(kv, "function.lo", {-1.0}), dim);
  const auto hi = broadcast("function.hi", doubles_or(kv, "function.hi", {1.0}), dim);
  const auto xstar = broadcast("function.minimizer", doubles_or(kv, "function.minimizer", {0.0}), dim);
  Box box = keyed("function", [&] {
    std::vector<Interval> sides;
    for (std::size_t j = 0; j < dim; ++j) sides.push_back(make_interval(lo[Eigen::Index(j)], hi[Eigen::Index(j)]));
    return Box(sides);
  });

  if (family == Family::separable_power) {
    const auto coeffs = broadcast("function.coeffs", doubles_or(kv, "function.coeffs", {1.0}), dim);
    const double k = kv.get_double("function.k", 2.0);
    return keyed("function", [&] {
      return std::make_shared<const UcFunction>(make_separable_power(box, coeffs, k, xstar));
    });
  }

  Eigen::MatrixXd A;
  if (kv.has("function.diag")) {
    A = broadcast("function.diag", kv.get_doubles("function.diag"), dim).asDiagonal();
  } else {
    const auto m = kv.get_doubles("function.matrix");
    if (m.size() != dim * dim) throw ConfigError("function.matrix", "expected dim*dim row-major values");
    A = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        m.data(), static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  }
  return keyed("function", [&] { return std::make_shared<const UcFunction>(make_quadratic(box, A, xstar)); });
}

SignMode parse_oracle(KeyValueConfig& kv) {
  const std::string mode = kv.get_string("oracle.mode", "additive-noise");
  SignMode out;
  if (mode == "additive-noise") {
    const std::string noise = kv.get_string("oracle.noise", "gaussian");
    if (noise == "gaussian") {
      out = AdditiveNoise{GaussianNoise{kv.get_double("oracle.sigma", 1.0)}};
    } else if (noise == "uniform") {
      out = AdditiveNoise{UniformNoise{kv.get_double("oracle.halfwidth", 1.0)}};
    } else {
      throw ConfigError("oracle.noise", "expected gaussian or uniform, got '" + noise + "'");
    }
  } else if (mode == "direct-bernoulli") {
    out = DirectBernoulli{kv.get_double("oracle.slope", 1.0), kv.get_double("oracle.cap", 0.5)};
  } else if (mode == "exact") {
    out = ExactSign{};
  } else if (mode == "quantized") {
    out = QuantizedSign{static_cast<int>(kv.get_int("oracle.decimals", 3))};
  } else {
    throw ConfigError("oracle.mode", "unknown mode '" + mode + "'");
  }
  keyed("oracle", [&] { validate(out); });
  return out;
}

std::string sanitize(std::string s) {
  for (auto& ch : s) {
    if (ch == ',' || ch == '\n' || ch == '\r' || ch == '"') ch = ';';
  }
  return s;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

ExperimentConfig parse_experiment_config(std::string_view text, const std::filesystem::path& base_dir) {
  KeyValueConfig kv = KeyValueConfig::parse(text);
  ExperimentConfig c;
  c.id = kv.get_string("experiment.id", "experiment");
  const std::string kind = kv.get_string("experiment.kind");
  if (kind == "learn-threshold") {
    c.kind = ExperimentKind::learn_threshold;
  } else if (kind == "optimize") {
    c.kind = ExperimentKind::optimize;
  } else {
    throw ConfigError("experiment.kind", "expected learn-threshold or optimize, got '" + kind + "'");
  }
  c.seed = kv.get_uint("seed", 0);
  c.learner_config = parse_learner_config(kv);

  if (c.kind == ExperimentKind::learn_threshold) {
    const double lo = kv.get_double("problem.lo", 0.0);
    const double hi = kv.get_double("problem.hi", 1.0);
    const double t = kv.get_double("problem.t");
    const double k = kv.get_double("problem.k", 2.0);
    const double mu = kv.get_double("problem.mu", 1.0);
    const double cap = kv.get_double("problem.cap", 0.4);
    const auto orient = keyed("problem.orientation", [&] {
      return parse_orientation(kv.get_string("problem.orientation", "positive-right"));
    });
    c.problem = keyed("problem", [&] { return make_tnc_problem(Interval{lo, hi}, t, k, mu, cap, orient); });
    c.learner = keyed("learner.kind", [&] { return parse_learner_kind(kv.get_string("learner.kind", "adaptive")); });
    c.budget = c.learner_config.budget;
    c.report_column = "excess_risk";
  } else {
    c.function = parse_function(kv, base_dir);
    c.oracle = parse_oracle(kv);
    if (kv.has("oracle.budget")) c.oracle_budget = kv.get_int("oracle.budget");
    c.optimizer.budget = kv.get_int("optimizer.budget", 0);
    const std::string rule = kv.get_string("optimizer.epoch_rule", "paper-default");
    if (rule == "paper-default") {
      c.optimizer.epoch_rule = EpochRule::paper_default;
    } else if (rule == "explicit") {
      c.optimizer.epoch_rule = EpochRule::explicit_count;
      c.optimizer.epochs = kv.get_int("optimizer.epochs");
      if (c.optimizer.epochs < 1) throw ConfigError("optimizer.epochs", "must be at least 1");
    } else {
      throw ConfigError("optimizer.epoch_rule", "expected paper-default or explicit, got '" + rule + "'");
    }
    c.optimizer.line_search = keyed("optimizer.line_search", [&] {
      return parse_learner_kind(kv.get_string("optimizer.line_search", "adaptive"));
    });
    c.optimizer.learner = c.learner_config;
    const std::string x0 = kv.get_string("optimizer.x0", "center");
    if (x0 != "center") {
      Point p = broadcast("optimizer.x0", kv.get_doubles("optimizer.x0"), c.function->dim());
      if (!c.function->domain().contains(p)) throw ConfigError("optimizer.x0", "point outside the domain box");
      c.x0 = p;
    }
    c.budget = c.optimizer.budget;
    c.report_column = "f_error";
  }

  if (kv.has("sweep.budgets")) c.budgets = kv.get_ints("sweep.budgets");
  c.replications = kv.get_int("sweep.replications", 1);
  c.base_seed = kv.get_uint("sweep.base_seed", 0);
  c.concurrency = static_cast<int>(kv.get_int("sweep.concurrency", 0));

  c.output_path = kv.get_string("output.path", "");
  const std::string report = kv.get_string("output.report", "csv");
  if (report == "csv") {
    c.report = ReportFormat::csv;
  } else if (report == "json") {
    c.report = ReportFormat::json;
  } else if (report == "slope-summary") {
    c.report = ReportFormat::slope_summary;
  } else {
    throw ConfigError("output.report", "expected csv, json or slope-summary, got '" + report + "'");
  }
  c.report_column = kv.get_string("output.column", c.report_column);

  if (const auto unused = kv.unused_keys(); !unused.empty()) {
    throw ConfigError(unused.front(), "unknown key");
  }
  return c;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("", "cannot open config file '" + file.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_experiment_config(text.str(), file.parent_path());
}

void validate_sweep(const ExperimentConfig& c) {
  if (c.budgets.empty()) throw ConfigError("sweep.budgets", "at least one budget is required");
  for (std::size_t i = 0; i < c.budgets.size(); ++i) {
    if (c.budgets[i] < 1) throw ConfigError("sweep.budgets", "budgets must be positive");
    if (i > 0 && c.budgets[i] <= c.budgets[i - 1]) {
      throw ConfigError("sweep.budgets", "budgets must be strictly increasing");
    }
  }
  if (c.replications < 1) throw ConfigError("sweep.replications", "must be at least 1");
}

std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t replication) {
  return RngStream(base_seed).split(replication).key();
}

namespace {

void run_threshold(const ExperimentConfig& c, std::int64_t budget, RunRow& row) {
  if (!c.problem) throw InvalidArgument("learn-threshold experiment has no problem");
  const RngStream base(row.seed);
  LabelOracle oracle(*c.problem, base.split(static_cast<std::uint64_t>(StreamRole::label_oracle)));
  RngStream learner_rng = base.split(static_cast<std::uint64_t>(StreamRole::learner));
  LearnerConfig cfg = c.learner_config;
  cfg.budget = budget;
  const ThresholdEstimate est = run_learner(c.learner, oracle, c.problem->interval, cfg, learner_rng);
  const ErrorRecord rec = error_record(*c.problem, est.point, {oracle.queries_used(), row.seed, budget});
  row.estimate = {est.point};
  row.point_error = rec.point_error;
  row.excess_risk = rec.excess_risk;
  row.queries_used = rec.queries_used;
}

void run_optimize(const ExperimentConfig& c, std::int64_t budget, RunRow& row) {
  if (!c.function) throw InvalidArgument("optimize experiment has no function");
  const UcFunction& fn = *c.function;
  SignOracle oracle(fn, c.oracle, RngStream(row.seed).split(static_cast<std::uint64_t>(StreamRole::sign_oracle)),
                    c.oracle_budget);
  OptimizerConfig opt = c.optimizer;
  opt.budget = budget;
  opt.seed = row.seed;
  const Point x0 = c.x0 ? *c.x0 : fn.domain().center();
  const OptRunResult res = rssgd(fn, oracle, opt, x0);
  const ErrorRecord rec = error_record(fn, res.x_final, {res.queries_used, row.seed, budget});
  row.estimate.assign(res.x_final.data(), res.x_final.data() + res.x_final.size());
  row.point_error = rec.point_error;
  row.f_error = rec.f_error;
  row.queries_used = rec.queries_used;
}

RunRow run_with_seed(const ExperimentConfig& c, std::int64_t budget, std::int64_t replication, std::uint64_t seed) {
  RunRow row;
  row.experiment_id = c.id;
  row.budget = budget;
  row.replication = replication;
  row.seed = seed;
  const auto start = std::chrono::steady_clock::now();
  try {
    if (c.kind == ExperimentKind::learn_threshold) {
      run_threshold(c, budget, row);
    } else {
      run_optimize(c, budget, row);
    }
  } catch (const std::exception& e) {
    row.status = "error: " + sanitize(e.what());
    row.estimate.clear();
    row.point_error = std::nan("");
    row.excess_risk.reset();
    row.f_error.reset();
  }
  row.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return row;
}

}  // namespace

RunRow run_cell(const ExperimentConfig& c, std::int64_t budget, std::int64_t replication) {
  return run_with_seed(c, budget, replication, derive_seed(c.base_seed, static_cast<std::uint64_t>(replication)));
}

RunRow run_single(const ExperimentConfig& c) {
  if (c.budget < 1) {
    throw ConfigError(c.kind == ExperimentKind::learn_threshold ? "learner.budget" : "optimizer.budget",
                      "a positive budget is required for a single run");
  }
  return run_with_seed(c, c.budget, 0, c.seed);
}

int default_concurrency() {
  if (const char* env = std::getenv(kConcurrencyEnv)) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

RunTable run_experiment(const ExperimentConfig& c, int concurrency) {
  validate_sweep(c);
  if (concurrency <= 0) concurrency = c.concurrency > 0 ? c.concurrency : default_concurrency();

  const std::size_t reps = static_cast<std::size_t>(c.replications);
  const std::size_t cells = c.budgets.size() * reps;
  RunTable table;
  table.rows.resize(cells);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells; i = next++) {
      table.rows[i] = run_cell(c, c.budgets[i / reps], static_cast<std::int64_t>(i % reps));
    }
  };
  const auto threads = static_cast<std::size_t>(std::min<std::size_t>(static_cast<std::size_t>(concurrency), cells));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return table;
}

// ---------------------------------------------------------------------------

std::size_t RunTable::error_count() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const RunRow& r) { return !r.ok(); }));
}

void RunTable::write_csv(std::ostream& out, bool include_timing) const {
  out << "schema_version,experiment_id,budget,replication,seed,estimate,point_error,excess_risk,f_error,"
         "queries_used,status";
  if (include_timing) out << ",wall_time_ms";
  out << '\n';
  for (const auto& r : rows) {
    out << kCsvSchemaVersion << ',' << r.experiment_id << ',' << r.budget << ',' << r.replication << ','
        << r.seed << ',';
    for (std::size_t i = 0; i < r.estimate.size(); ++i) out << (i ? ";" : "") << num(r.estimate[i]);
    out << ',' << (r.ok() ? num(r.point_error) : "") << ',' << (r.excess_risk ? num(*r.excess_risk) : "")
        << ',' << (r.f_error ? num(*r.f_error) : "") << ',' << r.queries_used << ',' << r.status;
    if (include_timing) out << ',' << num(r.wall_time_ms);
    out << '\n';
  }
}

std::string RunTable::to_csv(bool include_timing) const {
  std::ostringstream os;
  write_csv(os, include_timing);
  return os.str();
}

nlohmann::json RunTable::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json o;
    o["schema_version"] = kCsvSchemaVersion;
    o["experiment_id"] = r.experiment_id;
    o["budget"] = r.budget;
    o["replication"] = r.replication;
    o["seed"] = r.seed;
    if (r.estimate.size() == 1) {
      o["estimate"] = r.estimate.front();
    } else {
      o["estimate"] = r.estimate;
    }
    o["point_error"] = r.ok() ? nlohmann::json(r.point_error) : nlohmann::json(nullptr);
    o["excess_risk"] = r.excess_risk ? nlohmann::json(*r.excess_risk) : nlohmann::json(nullptr);
    o["f_error"] = r.f_error ? nlohmann::json(*r.f_error) : nlohmann::json(nullptr);
    o["queries_used"] = r.queries_used;
    o["status"] = r.status;
    o["wall_time_ms"] = r.wall_time_ms;
    arr.push_back(std::move(o));
  }
  return arr;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, ',')) out.push_back(cur);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::optional<double> opt_num(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return std::stod(s);
}

}  // namespace

RunTable RunTable::read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("empty CSV table");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_csv_line(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const char* required : {"schema_version", "budget", "replication", "status"}) {
    if (col.count(required) == 0) throw InvalidArgument(std::string("CSV table lacks column '") + required + "'");
  }
  auto field = [&](const std::vector<std::string>& f, const char* name) -> std::string {
    const auto it = col.find(name);
    return it == col.end() || it->second >= f.size() ? std::string() : f[it->second];
  };

  RunTable table;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    try {
      if (std::stoi(field(f, "schema_version")) != kCsvSchemaVersion) {
        throw InvalidArgument("unsupported schema_version");
      }
      RunRow r;
      r.experiment_id = field(f, "experiment_id");
      r.budget = std::stoll(field(f, "budget"));
      r.replication = std::stoll(field(f, "replication"));
      if (auto s = field(f, "seed"); !s.empty()) r.seed = std::stoull(s);
      std::istringstream est(field(f, "estimate"));
      for (std::string piece; std::getline(est, piece, ';');) {
        if (!piece.empty()) r.estimate.push_back(std::stod(piece));
      }
      r.point_error = opt_num(field(f, "point_error")).value_or(std::nan(""));
      r.excess_risk = opt_num(field(f, "excess_risk"));
      r.f_error = opt_num(field(f, "f_error"));
      if (auto q = field(f, "queries_used"); !q.empty()) r.queries_used = std::stoll(q);
      r.status = field(f, "status");
      r.wall_time_ms = opt_num(field(f, "wall_time_ms")).value_or(0.0);
      table.rows.push_back(std::move(r));
    } catch (const std::logic_error& e) {
      throw InvalidArgument("CSV line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return table;
}

// ---------------------------------------------------------------------------

SlopeReport slope_report(const RunTable& table, Statistic statistic, std::string_view column) {
  if (table.rows.empty()) throw InvalidArgument("slope report needs a non-empty table");
  auto pick = [&](const RunRow& r) -> std::optional<double> {
    if (column == "point_error") return r.point_error;
    if (column == "excess_risk") return r.excess_risk;
    if (column == "f_error") return r.f_error;
    throw InvalidArgument("unknown error column '" + std::string(column) + "'");
  };
  pick(table.rows.front());

  std::map<std::int64_t, std::vector<double>> groups;
  for (const auto& r : table.rows) {
    if (!r.ok()) continue;
    if (auto v = pick(r); v && std::isfinite(*v)) groups[r.budget].push_back(*v);
  }

  SlopeReport rep;
  rep.column = std::string(column);
  rep.statistic = statistic;
  std::vector<RatePoint> points;
  for (auto& [budget, values] : groups) {
    BudgetAggregate agg;
    agg.budget = budget;
    agg.samples = values.size();
    if (statistic == Statistic::median) {
      std::sort(values.begin(), values.end());
      const std::size_t n = values.size();
      agg.value = n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
    } else {
      double s = 0.0;
      for (double v : values) s += v;
      agg.value = s / static_cast<double>(values.size());
    }
    if (!(agg.value > 0.0)) {
      agg.excluded = true;
      ++rep.excluded_zero;
      rep.warnings.push_back("budget " + std::to_string(budget) + " excluded: aggregate " + rep.column + " is zero");
    } else {
      points.push_back({static_cast<double>(budget), agg.value});
    }
    rep.aggregates.push_back(agg);
  }
  rep.fit = fit_rate_slope(points);
  rep.fit.excluded = rep.excluded_zero;
  return rep;
}

nlohmann::json SlopeReport::to_json() const {
  nlohmann::json o;
  o["column"] = column;
  o["statistic"] = statistic == Statistic::median ? "median" : "mean";
  o["slope"] = fit.slope;
  o["intercept"] = fit.intercept;
  o["max_residual"] = fit.max_residual;
  o["excluded_zero"] = excluded_zero;
  nlohmann::json aggs = nlohmann::json::array();
  for (const auto& a : aggregates) {
    aggs.push_back({{"budget", a.budget}, {"value", a.value}, {"samples", a.samples}, {"excluded", a.excluded}});
  }
  o["aggregates"] = aggs;
  o["warnings"] = warnings;
  return o;
}

std::string SlopeReport::summary() const {
  std::ostringstream os;
  os << "column=" << column << " statistic=" << (statistic == Statistic::median ? "median" : "mean")
     << " slope=" << num(fit.slope) << " intercept=" << num(fit.intercept)
     << " max_residual=" << num(fit.max_residual) << " excluded_zero=" << excluded_zero << '\n';
  for (const auto& a : aggregates) {
    os << "  budget=" << a.budget << " value=" << num(a.value) << " n=" << a.samples
       << (a.excluded ? " (excluded)" : "") << '\n';
  }
  for (const auto& w : warnings) os << "warning: " << w << '\n';
  return os.str();
}

}  // namespace signcd

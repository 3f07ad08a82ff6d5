// Acceptance suite: one PASS/FAIL line per criterion. Arguments select a
// subset of criteria by number; no arguments runs all of them.

#include "signcd/harness.hpp"
#include "support/reference.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

using namespace signcd;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

bool within(double v, double lo, double hi) { return v >= lo && v <= hi; }

ExperimentConfig config(const std::string& name) {
  return load_experiment_config(std::string(SIGNCD_CONFIG_DIR) + "/" + name);
}

// Sweeps are shared between criteria, so each config runs at most once.
const RunTable& sweep(const std::string& name) {
  static std::map<std::string, RunTable> cache;
  auto it = cache.find(name);
  if (it == cache.end()) {
    const auto start = std::chrono::steady_clock::now();
    RunTable t = run_experiment(config(name));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::fprintf(stderr, "  [%s: %zu rows, %zu errors, %.1f s]\n", name.c_str(), t.rows.size(), t.error_count(), secs);
    it = cache.emplace(name, std::move(t)).first;
  }
  return it->second;
}

double slope_of(const std::string& name, const char* column) {
  const RunTable& t = sweep(name);
  if (t.error_count() > 0) throw std::runtime_error(name + " has failed cells");
  return slope_report(t, Statistic::median, column).fit.slope;
}

double median_at(const std::string& name, const char* column, std::int64_t budget) {
  const auto rep = slope_report(sweep(name), Statistic::median, column);
  for (const auto& a : rep.aggregates) {
    if (a.budget == budget) return a.value;
  }
  throw std::runtime_error("budget " + std::to_string(budget) + " not in " + name);
}

// --- criteria ---------------------------------------------------------------

Verdict adaptive_risk_k2() {
  const double s = slope_of("adaptive_k2.cfg", "excess_risk");
  return {within(s, -1.2, -0.8), fmt("k=2 median excess-risk slope %.3f, band [-1.2, -0.8]", s)};
}

Verdict adaptive_point_error() {
  const double s2 = slope_of("adaptive_k2.cfg", "point_error");
  const double s3 = slope_of("adaptive_k3.cfg", "point_error");
  return {within(s2, -0.65, -0.35) && within(s3, -0.35, -0.15),
          fmt("median point-error slope k=2 %.3f in [-0.65, -0.35]; k=3 %.3f in [-0.35, -0.15]", s2, s3)};
}

Verdict adaptivity() {
  const auto c2 = config("adaptive_k2.cfg");
  const auto c3 = config("adaptive_k3.cfg");
  const bool same_learner = c2.learner == c3.learner && c2.learner_config.c_delta == c3.learner_config.c_delta &&
                            c2.learner_config.confidence == c3.learner_config.confidence &&
                            c2.learner_config.orientation == c3.learner_config.orientation &&
                            c2.learner == LearnerKind::adaptive;
  const double r2 = slope_of("adaptive_k2.cfg", "excess_risk");
  const double p2 = slope_of("adaptive_k2.cfg", "point_error");
  const double r3 = slope_of("adaptive_k3.cfg", "excess_risk");
  const double p3 = slope_of("adaptive_k3.cfg", "point_error");
  const bool ok = same_learner && within(r2, -1.2, -0.8) && within(p2, -0.65, -0.35) &&
                  within(r3, -0.95, -0.55) && within(p3, -0.35, -0.15);
  return {ok, fmt("one learner config; k=2 risk %.3f point %.3f; k=3 risk %.3f in [-0.95, -0.55] point %.3f", r2,
                  p2, r3, p3)};
}

Verdict bz_rate() {
  const double s = slope_of("bz_k2.cfg", "excess_risk");
  const double bz = median_at("bz_k2.cfg", "excess_risk", 1 << 14);
  const double ad = median_at("adaptive_k2.cfg", "excess_risk", 1 << 14);
  const double ratio = std::max(ad / bz, bz / ad);
  return {within(s, -1.25, -0.8) && ratio <= 20.0,
          fmt("BZ slope %.3f in [-1.25, -0.8]; median risk at 2^14 adaptive %.3g vs BZ %.3g, ratio %.2f <= 20", s, ad,
              bz, ratio)};
}

Verdict optimizer_rate_quadratic() {
  const double s = slope_of("rssgd_quadratic_d5.cfg", "f_error");
  return {within(s, -1.25, -0.7), fmt("d=5 quadratic median f_error slope %.3f, band [-1.25, -0.7]", s)};
}

Verdict optimizer_rate_power() {
  const double s = slope_of("rssgd_power_d3.cfg", "f_error");
  return {within(s, -0.95, -0.55), fmt("d=3 k=3 separable-power median f_error slope %.3f, band [-0.95, -0.55]", s)};
}

Verdict quantized_exponential() {
  const RunTable& t = sweep("rssgd_quantized_d3.cfg");
  if (t.error_count() > 0) return {false, "quantized sweep has failed cells"};
  const auto rep = slope_report(t, Statistic::median, "f_error");
  std::vector<double> xs, ys;
  for (const auto& a : rep.aggregates) {
    if (a.excluded) continue;
    xs.push_back(static_cast<double>(a.budget));
    ys.push_back(std::log(a.value));
  }
  double worst_final = 0.0;
  for (const auto& r : t.rows) {
    if (r.budget == 100000) worst_final = std::max(worst_final, *r.f_error);
  }
  if (xs.size() < 3) return {false, "fewer than three nonzero checkpoints"};
  const RateFit fit = fit_line(xs, ys);
  const double range = *std::max_element(ys.begin(), ys.end()) - *std::min_element(ys.begin(), ys.end());
  const bool ok = fit.slope < 0 && fit.max_residual < 0.2 * range && worst_final <= 1e-8;
  return {ok, fmt("ln f_error vs T slope %.3g per query over %zu checkpoints (%zu zero medians excluded), "
                  "max residual %.2f vs 20%% of range %.2f; worst f_error at T=1e5 %.3g <= 1e-8",
                  fit.slope, xs.size(), rep.excluded_zero, fit.max_residual, 0.2 * range, worst_final)};
}

Verdict bisection_exactness() {
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> u(0, 1);
  int failures = 0, runs = 0;
  for (int i = 0; i < 100; ++i) {
    const double lo = -5 + 4 * u(gen);
    const double hi = lo + 0.5 + 4 * u(gen);
    const double t = lo + (hi - lo) * u(gen);
    const auto orient = i % 2 ? Orientation::positive_left : Orientation::positive_right;
    // k = 1 with cap 1/2: labels are deterministic away from t.
    const auto p = make_tnc_problem(make_interval(lo, hi), t, 1, 1, 0.5, orient);
    for (std::int64_t budget = 1; budget <= 30; ++budget) {
      LabelOracle o(p, RngStream(static_cast<std::uint64_t>(i * 100 + budget)));
      const double est = bisect_noiseless(o, p.interval, budget, orient);
      failures += std::abs(est - t) > (hi - lo) * std::ldexp(1.0, -static_cast<int>(budget + 1));
      failures += o.queries_used() > budget;
      ++runs;
    }
  }
  return {failures == 0, fmt("%d runs, %d failures", runs, failures)};
}

// Compact re-runs of the library's invariants, each against an independent
// computation.
Verdict property_suites() {
  std::vector<std::string> broken;
  auto check = [&](bool ok, const std::string& what) {
    if (!ok) broken.push_back(what);
  };
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> u(0, 1);

  // TNC sandwich on a grid.
  for (const auto& [k, mu, cap] : {std::tuple{2.0, 1.0, 0.4}, {3.0, 4.0, 0.3}, {1.5, 0.7, 0.45}}) {
    const auto p = make_tnc_problem(make_interval(0, 1), 0.37, k, mu, cap);
    bool ok = true;
    for (int i = 0; i <= 10000; ++i) {
      const double x = i / 10000.0;
      const double margin = std::abs(eta_at(p, x) - 0.5);
      const double power = mu * std::pow(std::abs(x - 0.37), k - 1);
      if (power <= cap) ok &= std::abs(margin - power) <= 1e-12;
      ok &= std::abs(eta_at(p, x) - ref::eta(x, 0.37, k, mu, cap)) <= 1e-15;
    }
    check(ok, "TNC sandwich");
  }

  // UC, LkSS, finite differences, on one function per family.
  Eigen::MatrixXd design(15, 3);
  for (Eigen::Index i = 0; i < design.size(); ++i) design.data()[i] = 2 * u(gen) - 1;
  Eigen::VectorXd target(15);
  for (Eigen::Index i = 0; i < target.size(); ++i) target[i] = 2 * u(gen) - 1;
  Eigen::Matrix3d a3{{2, 0.5, 0.2}, {0.5, 1.5, 0.3}, {0.2, 0.3, 1}};
  const std::vector<UcFunction> fns{
      make_quadratic(Box::cube(3, -1, 1), a3, Eigen::Vector3d(0.3, -0.2, 0.1)),
      make_separable_power(Box::cube(3, -1, 1), Eigen::Vector3d(1, 2, 0.5), 3, Eigen::Vector3d(0.3, -0.2, 0.1)),
      make_ridge(Box::cube(3, -2, 2), design, target)};
  for (const auto& fn : fns) {
    const std::string family(to_string(fn.family()));
    auto point = [&] {
      Point x(static_cast<Eigen::Index>(fn.dim()));
      for (std::size_t j = 0; j < fn.dim(); ++j) {
        const auto& s = fn.domain().side(j);
        x[static_cast<Eigen::Index>(j)] = s.lo + (s.hi - s.lo) * u(gen);
      }
      return x;
    };
    const double k = fn.exponent();
    bool uc = true, lkss = true, fd = true;
    int interior = 0;
    for (int s = 0; s < 1000; ++s) {
      const Point x = point(), y = point();
      const double lhs = fn.value(y);
      const double rhs = fn.value(x) + fn.gradient(x).dot(y - x) + 0.5 * fn.lambda() * std::pow((x - y).norm(), k);
      uc &= lhs >= rhs - 1e-12 * (1 + std::abs(lhs));

      const auto j = static_cast<std::size_t>(s % static_cast<int>(fn.dim()));
      const auto i = static_cast<Eigen::Index>(j);
      const double alpha = fn.directional_min(x, j);
      const auto& side = fn.domain().side(j);
      if (x[i] + alpha > side.lo && x[i] + alpha < side.hi) {
        ++interior;
        const double g = std::abs(fn.grad_coord(x, j));
        const double dist = std::pow(std::abs(alpha), k - 1);
        lkss &= 0.5 * fn.lambda() * dist <= g + 1e-12 && g <= fn.big_lambda() * dist + 1e-12;
      }
      const double h = 1e-6;
      if (x[i] - h > side.lo && x[i] + h < side.hi) {
        Point xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        const double num = (fn.value(xp) - fn.value(xm)) / (2 * h);
        const double g = fn.grad_coord(x, j);
        fd &= std::abs(num - g) <= 1e-4 * std::max(std::abs(g), 1e-3);
      }
    }
    check(uc, family + " uniform convexity");
    check(lkss && interior >= 300, family + " local strong smoothness");
    check(fd, family + " finite differences");
  }

  // Ridge residual cache after 100 single-coordinate updates.
  {
    const auto& fn = fns[2];
    RidgeState state(fn, fn.domain().center());
    for (int s = 0; s < 100; ++s) {
      state.update_coord(static_cast<std::size_t>(s % 3), -2 + 4 * u(gen));
    }
    check((state.residual() - state.fresh_residual()).cwiseAbs().maxCoeff() <= 1e-10, "ridge residual cache");
  }

  // Oracle calibration: 3-sigma binomial bands at 1e5 draws.
  constexpr std::size_t kDraws = 100000;
  {
    const auto p = make_tnc_problem(make_interval(0, 1), 0.37, 2, 1, 0.4);
    LabelOracle o(p, RngStream(10));
    for (double x : {0.1, 0.37, 0.5, 0.9}) {
      std::size_t plus = 0;
      for (std::size_t n = 0; n < kDraws; ++n) plus += o.query(x) == Label::plus;
      const double want = ref::eta(x, 0.37, 2, 1, 0.4);
      check(std::abs(static_cast<double>(plus) / kDraws - want) <= ref::band3(want, kDraws) + 1e-12,
            fmt("label calibration at x=%.2f", x));
    }
    const auto& fn = fns[0];
    for (const SignMode& mode : {SignMode{AdditiveNoise{GaussianNoise{1.0}}}, SignMode{AdditiveNoise{UniformNoise{2.0}}},
                                 SignMode{DirectBernoulli{1.0, 0.4}}}) {
      SignOracle so(fn, mode, RngStream(11));
      for (double g : {-0.8, 0.0, 0.3}) {
        std::size_t plus = 0;
        for (std::size_t n = 0; n < kDraws; ++n) plus += so.sample_derivative(g) == Label::plus;
        double want = 0.0;
        if (const auto* add = std::get_if<AdditiveNoise>(&mode)) {
          want = std::holds_alternative<GaussianNoise>(add->dist)
                     ? ref::normal_cdf(g)
                     : std::clamp(0.5 + g / (2 * std::get<UniformNoise>(add->dist).halfwidth), 0.0, 1.0);
        } else {
          want = std::clamp(0.5 + g, 0.1, 0.9);
        }
        check(std::abs(static_cast<double>(plus) / kDraws - want) <= ref::band3(want, kDraws) + 1e-12,
              "sign calibration " + describe(mode) + fmt(" g=%.1f", g));
      }
    }
  }

  // Budget exactness.
  {
    const auto p = make_tnc_problem(make_interval(0, 1), 0.37, 2, 1, 0.4);
    bool ok = true;
    for (std::int64_t budget : {4, 100, 4096, 30000}) {
      LabelOracle o(p, RngStream(static_cast<std::uint64_t>(budget)));
      RngStream rng(1);
      LearnerConfig c;
      c.budget = budget;
      adaptive_learner(o, p.interval, c, rng);
      const auto sched = adaptive_schedule(budget, c.c_delta);
      ok &= o.queries_used() == sched.epochs * sched.per_epoch;
      for (auto kind : {LearnerKind::passive, LearnerKind::bz, LearnerKind::bisect}) {
        LabelOracle q(p, RngStream(2));
        run_learner(kind, q, p.interval, c, rng);
        ok &= q.queries_used() <= budget;
      }
    }
    SignOracle so(fns[0], AdditiveNoise{}, RngStream(12));
    OptimizerConfig oc;
    oc.budget = 20000;
    const auto r = rssgd(fns[0], so, oc, fns[0].domain().center());
    const auto sched = optimizer_schedule(oc, 3);
    ok &= r.queries_used <= oc.budget && r.queries_used <= sched.epochs * sched.per_epoch;
    check(ok, "budget exactness");
  }

  // Determinism: parallel and serial tables agree byte for byte.
  for (const char* name : {"adaptive_k2.cfg", "rssgd_quantized_d3.cfg"}) {
    auto c = config(name);
    c.replications = 4;
    c.budgets.resize(3);
    check(run_experiment(c, 1).to_csv(false) == run_experiment(c, 8).to_csv(false),
          std::string("parallel = serial for ") + name);
  }

  std::string detail = broken.empty() ? "all property checks hold" : "broken:";
  for (const auto& b : broken) detail += " [" + b + "]";
  return {broken.empty(), detail};
}

Verdict schedule_arithmetic() {
  const auto a = adaptive_schedule(4096, 2.0);
  OptimizerConfig oc;
  oc.budget = 10000;
  const auto o = optimizer_schedule(oc, 2);
  return {a.epochs == 3 && a.per_epoch == 1365 && o.epochs == 170 && o.per_epoch == 58,
          fmt("adaptive T=4096: E=%lld N=%lld; optimizer d=2 T=1e4: E=%lld N=%lld",
              static_cast<long long>(a.epochs), static_cast<long long>(a.per_epoch),
              static_cast<long long>(o.epochs), static_cast<long long>(o.per_epoch))};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Verdict()>> criteria{
      adaptive_risk_k2,         adaptive_point_error, adaptivity,          bz_rate,
      optimizer_rate_quadratic, optimizer_rate_power, quantized_exponential, bisection_exactness,
      property_suites,          schedule_arithmetic};

  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!selected.empty() && selected.count(id) == 0) continue;
    Verdict v;
    try {
      v = criteria[i]();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += !v.pass;
    std::printf("%s criterion %d: %s\n", v.pass ? "PASS" : "FAIL", id, v.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}

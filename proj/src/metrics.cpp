#include "signcd/metrics.hpp"

#include "signcd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace signcd {

double excess_risk(const TncProblem& p, double estimate) {
  if (!p.interval.contains(estimate)) throw OutOfDomain("estimate outside problem interval");
  const double dist = std::abs(estimate - p.t);
  if (dist == 0.0) return 0.0;
  if (p.k == 1.0) return 2.0 * std::min(p.mu, p.cap) * dist;
  const double knee = p.clamp_distance();
  if (dist <= knee) return 2.0 * p.mu * std::pow(dist, p.k) / p.k;
  return 2.0 * p.mu * std::pow(knee, p.k) / p.k + 2.0 * p.cap * (dist - knee);
}

namespace {

double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm,
                    double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol, int max_depth) {
  if (a == b) return 0.0;
  if (b < a) return -adaptive_simpson(f, b, a, tol, max_depth);
  const double fa = f(a);
  const double fb = f(b);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

double excess_risk_quadrature(const TncProblem& p, double estimate, double tol) {
  if (!p.interval.contains(estimate)) throw OutOfDomain("estimate outside problem interval");
  const double a = std::min(estimate, p.t);
  const double b = std::max(estimate, p.t);
  return adaptive_simpson([&p](double x) { return std::abs(2.0 * eta_at(p, x) - 1.0); }, a, b, tol);
}

ErrorRecord error_record(const TncProblem& problem, double estimate, const RunMetadata& meta) {
  ErrorRecord r;
  r.point_error = std::abs(estimate - problem.t);
  r.excess_risk = excess_risk(problem, estimate);
  r.queries_used = meta.queries_used;
  r.seed = meta.seed;
  r.budget = meta.budget;
  return r;
}

ErrorRecord error_record(const UcFunction& fn, const Point& estimate, const RunMetadata& meta) {
  if (static_cast<std::size_t>(estimate.size()) != fn.dim()) {
    throw InvalidArgument("estimate dimension does not match the function");
  }
  if (!fn.domain().contains(estimate)) throw OutOfDomain("estimate outside the domain box");
  ErrorRecord r;
  r.point_error = (estimate - fn.minimizer()).norm();
  r.f_error = std::max(0.0, fn.error(estimate));
  r.queries_used = meta.queries_used;
  r.seed = meta.seed;
  r.budget = meta.budget;
  return r;
}

RateFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidArgument("fit_line: x and y lengths differ");
  const std::size_t n = x.size();
  if (n < 2) throw InvalidArgument("insufficient points for a rate fit (need at least 2)");
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw InvalidArgument("insufficient points for a rate fit (all abscissae equal)");
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (std::size_t i = 0; i < n; ++i) {
    fit.max_residual = std::max(fit.max_residual, std::abs(y[i] - (fit.intercept + fit.slope * x[i])));
  }
  fit.used = n;
  return fit;
}

RateFit fit_rate_slope(std::span<const RatePoint> points) {
  std::vector<double> lx;
  std::vector<double> ly;
  std::size_t excluded = 0;
  for (const auto& p : points) {
    if (!(p.budget >= 2.0)) throw InvalidArgument("rate fit budgets must be at least 2");
    if (!(p.error > 0.0) || !std::isfinite(p.error)) {
      ++excluded;
      continue;
    }
    lx.push_back(std::log(p.budget));
    ly.push_back(std::log(p.error));
  }
  if (lx.size() < 2) {
    throw InvalidArgument("insufficient points for a rate fit: " + std::to_string(lx.size()) + " usable, " +
                          std::to_string(excluded) + " excluded as zero");
  }
  RateFit fit = fit_line(lx, ly);
  fit.excluded = excluded;
  return fit;
}

}  // namespace signcd

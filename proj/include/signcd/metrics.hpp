#pragma once

#include "signcd/problems.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>

namespace signcd {

// Risk gap between the cut at `estimate` and the Bayes cut t: the integral of
// |2 eta - 1| between them, in closed form (power part up to the clamp
// distance, constant 2*cap beyond it).
double excess_risk(const TncProblem& problem, double estimate);

// Same quantity by adaptive Simpson quadrature of |2 eta - 1|.
double excess_risk_quadrature(const TncProblem& problem, double estimate, double tol = 1e-10);

// Adaptive Simpson with absolute tolerance and a recursion depth cap.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth = 50);

struct RunMetadata {
  std::int64_t queries_used = 0;
  std::uint64_t seed = 0;
  std::int64_t budget = 0;
};

struct ErrorRecord {
  double point_error = 0.0;
  std::optional<double> excess_risk;  // threshold problems only
  std::optional<double> f_error;      // test functions only
  std::int64_t queries_used = 0;
  std::uint64_t seed = 0;
  std::int64_t budget = 0;
};

ErrorRecord error_record(const TncProblem& problem, double estimate, const RunMetadata& meta);
ErrorRecord error_record(const UcFunction& fn, const Point& estimate, const RunMetadata& meta);

struct RatePoint {
  double budget = 0.0;
  double error = 0.0;
};

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;
  std::size_t used = 0;
  std::size_t excluded = 0;  // points dropped for a zero (or non-finite) error
};

// Least squares of ln(error) on ln(budget). Requires budget >= 2 for every
// point and at least two usable points with distinct budgets.
RateFit fit_rate_slope(std::span<const RatePoint> points);

// Least squares of y on x, used for linear-in-T fits of log errors.
RateFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace signcd

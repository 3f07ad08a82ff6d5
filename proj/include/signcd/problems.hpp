#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

namespace signcd {

using Point = Eigen::VectorXd;

// Closed interval [lo, hi] with hi > lo. Degenerate intervals (hi == lo) are
// only produced internally by clipping and are never accepted from callers.
struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  [[nodiscard]] double width() const { return hi - lo; }
  [[nodiscard]] double midpoint() const { return lo + 0.5 * (hi - lo); }
  [[nodiscard]] bool contains(double x) const { return x >= lo && x <= hi; }
  [[nodiscard]] double clip(double x) const { return x < lo ? lo : (x > hi ? hi : x); }
  [[nodiscard]] bool contains(const Interval& other) const {
    return other.lo >= lo && other.hi <= hi;
  }

  bool operator==(const Interval&) const = default;
};

Interval make_interval(double lo, double hi);

// Which side of the threshold carries the "+" label.
enum class Orientation { positive_right, positive_left };

std::string_view to_string(Orientation o);
Orientation parse_orientation(std::string_view s);

// One-dimensional threshold instance satisfying a two-sided Tsybakov noise
// condition with exponent k:
//
//   eta(x) = 1/2 + s(x) * min(mu * |x - t|^(k-1), cap)
//
// where s is +1 on the positive side of t, -1 on the other side and 0 at t.
// Upper and lower TNC constants coincide (M = mu) and cap plays the role of
// the radius eps0 of the region in which the condition is required to hold.
struct TncProblem {
  Interval interval;
  double t = 0.5;
  double k = 2.0;
  double mu = 1.0;
  double cap = 0.4;
  Orientation orientation = Orientation::positive_right;

  // Distance from t at which the clamp engages; +inf when it never does.
  [[nodiscard]] double clamp_distance() const;
};

inline constexpr double kMinTncExponent = 1.0;
inline constexpr double kMaxExponent = 8.0;
inline constexpr double kMinUcExponent = 2.0;

TncProblem make_tnc_problem(Interval interval, double t, double k, double mu, double cap,
                            Orientation orientation = Orientation::positive_right);

// P(Y = + | X = x). Throws OutOfDomain for x outside the problem interval.
double eta_at(const TncProblem& problem, double x);

// Axis-aligned box, one interval per coordinate.
class Box {
 public:
  Box() = default;
  explicit Box(std::vector<Interval> sides);
  static Box cube(std::size_t dim, double lo, double hi);

  [[nodiscard]] std::size_t dim() const { return sides_.size(); }
  [[nodiscard]] const Interval& side(std::size_t j) const { return sides_.at(j); }
  [[nodiscard]] const std::vector<Interval>& sides() const { return sides_; }
  [[nodiscard]] bool contains(const Point& x) const;
  [[nodiscard]] Point clip(const Point& x) const;
  [[nodiscard]] Point center() const;
  [[nodiscard]] double diameter() const;

 private:
  std::vector<Interval> sides_;
};

enum class Family { separable_power, quadratic, ridge };

std::string_view to_string(Family f);
Family parse_family(std::string_view s);

struct SeparablePowerParams {
  Eigen::VectorXd coeffs;  // c_j > 0
  double k = 2.0;
};

struct QuadraticParams {
  Eigen::MatrixXd A;  // symmetric positive definite
};

struct RidgeParams {
  Eigen::MatrixXd A;  // n x d design
  Eigen::VectorXd b;  // n targets
  Eigen::VectorXd column_sq_norms;
  Eigen::MatrixXd hessian;  // A^T A + I
};

class RidgeState;

// The restriction alpha -> f(x + alpha e_j) of a test function, stored in a
// form whose derivative costs O(1) per evaluation.
class CoordinateSlice {
 public:
  // f'(alpha) along the slice.
  [[nodiscard]] double derivative(double alpha) const;
  // Exact minimizer along the slice, clipped to alpha_range().
  [[nodiscard]] double minimizer() const;
  // {alpha : x + alpha e_j in box}.
  [[nodiscard]] const Interval& alpha_range() const { return range_; }
  [[nodiscard]] std::size_t coordinate() const { return coord_; }

 private:
  friend class UcFunction;

  enum class Kind { power, linear } kind_ = Kind::linear;
  std::size_t coord_ = 0;
  Interval range_;
  // power: derivative = scale * |offset + alpha|^(k-1) * sign(offset + alpha)
  double offset_ = 0.0;
  double scale_ = 0.0;
  double k_ = 2.0;
  // linear: derivative = slope0 + curvature * alpha
  double slope0_ = 0.0;
  double curvature_ = 1.0;
};

// d-dimensional uniformly convex test function with analytic gradient,
// exact coordinate minimizers and declared convexity metadata.
//
//   separable-power: sum_j c_j |x_j - x*_j|^k
//   quadratic:       1/2 (x - x*)^T A (x - x*)
//   ridge:           1/2 |Ax - b|^2 + 1/2 |x|^2
//
// lambda is the uniform-convexity modulus and big_lambda the local k-strong
// smoothness constant around coordinate minima; both are derived from the
// family parameters at construction.
class UcFunction {
 public:
  [[nodiscard]] Family family() const;
  [[nodiscard]] std::size_t dim() const { return domain_.dim(); }
  [[nodiscard]] const Box& domain() const { return domain_; }
  [[nodiscard]] double exponent() const { return k_; }
  [[nodiscard]] double lambda() const { return lambda_; }
  [[nodiscard]] double big_lambda() const { return big_lambda_; }
  [[nodiscard]] std::optional<double> lipschitz() const { return lipschitz_; }
  [[nodiscard]] std::optional<double> smoothness() const { return smoothness_; }
  [[nodiscard]] const Point& minimizer() const { return minimizer_; }
  [[nodiscard]] double min_value() const { return min_value_; }

  [[nodiscard]] const SeparablePowerParams* separable_power() const;
  [[nodiscard]] const QuadraticParams* quadratic() const;
  [[nodiscard]] const RidgeParams* ridge() const;

  // Throw InvalidArgument on dimension mismatch and OutOfDomain outside the box.
  [[nodiscard]] double value(const Point& x) const;
  [[nodiscard]] double grad_coord(const Point& x, std::size_t j) const;
  [[nodiscard]] Point gradient(const Point& x) const;
  [[nodiscard]] double directional_min(const Point& x, std::size_t j) const;

  // f(x) - f(x*), evaluated from the displacement x - x* so no cancellation
  // occurs near the optimum.
  [[nodiscard]] double error(const Point& x) const;

  [[nodiscard]] CoordinateSlice slice(const Point& x, std::size_t j) const;
  // Ridge only: O(n) slice using the cached residual.
  [[nodiscard]] CoordinateSlice slice(const RidgeState& state, std::size_t j) const;

 private:
  friend UcFunction make_separable_power(Box, Eigen::VectorXd, double, Point);
  friend UcFunction make_quadratic(Box, Eigen::MatrixXd, Point);
  friend UcFunction make_ridge(Box, Eigen::MatrixXd, Eigen::VectorXd);

  UcFunction() = default;
  void check_point(const Point& x) const;
  void check_index(std::size_t j) const;

  Box domain_;
  std::variant<SeparablePowerParams, QuadraticParams, RidgeParams> params_;
  Point minimizer_;
  double min_value_ = 0.0;
  double k_ = 2.0;
  double lambda_ = 0.0;
  double big_lambda_ = 0.0;
  std::optional<double> lipschitz_;
  std::optional<double> smoothness_;
};

UcFunction make_separable_power(Box domain, Eigen::VectorXd coeffs, double k, Point minimizer);
UcFunction make_quadratic(Box domain, Eigen::MatrixXd A, Point minimizer);
// The minimizer is obtained by solving (A^T A + I) x = A^T b.
UcFunction make_ridge(Box domain, Eigen::MatrixXd A, Eigen::VectorXd b);

struct RidgeData {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
};

// Plain-text format: "n d", then n rows of d numbers, then one row of n numbers for b.
RidgeData read_ridge_data(std::istream& in);

// Free-function spellings of the member operations.
inline double f_eval(const UcFunction& fn, const Point& x) { return fn.value(x); }
inline double grad_coord(const UcFunction& fn, const Point& x, std::size_t j) {
  return fn.grad_coord(x, j);
}
inline double directional_min(const UcFunction& fn, const Point& x, std::size_t j) {
  return fn.directional_min(x, j);
}

// Point plus cached residual r = Ax - b for the ridge family. Single-coordinate
// updates cost O(n).
class RidgeState {
 public:
  RidgeState(const UcFunction& fn, Point x);

  void update_coord(std::size_t j, double value);
  [[nodiscard]] double grad_coord(std::size_t j) const;
  [[nodiscard]] const Point& point() const { return x_; }
  [[nodiscard]] const Eigen::VectorXd& residual() const { return residual_; }
  // Residual recomputed from scratch; used to audit drift.
  [[nodiscard]] Eigen::VectorXd fresh_residual() const;

 private:
  const RidgeParams* params_;
  Point x_;
  Eigen::VectorXd residual_;
};

}  // namespace signcd

#include "signcd/problems.hpp"

#include "signcd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <sstream>
#include <string>

namespace signcd {

namespace {

std::string fmt_num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

double signum(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

Interval make_interval(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo)) {
    throw InvalidArgument("interval requires finite lo < hi, got [" + fmt_num(lo) + ", " +
                          fmt_num(hi) + "]");
  }
  return Interval{lo, hi};
}

std::string_view to_string(Orientation o) {
  return o == Orientation::positive_right ? "positive-right" : "positive-left";
}

Orientation parse_orientation(std::string_view s) {
  if (s == "positive-right") return Orientation::positive_right;
  if (s == "positive-left") return Orientation::positive_left;
  throw InvalidArgument("unknown orientation '" + std::string(s) + "'");
}

double TncProblem::clamp_distance() const {
  if (k == 1.0) return mu > cap ? 0.0 : std::numeric_limits<double>::infinity();
  return std::pow(cap / mu, 1.0 / (k - 1.0));
}

TncProblem make_tnc_problem(Interval interval, double t, double k, double mu, double cap,
                            Orientation orientation) {
  interval = make_interval(interval.lo, interval.hi);
  if (!std::isfinite(t) || !interval.contains(t)) {
    throw InvalidArgument("threshold " + fmt_num(t) + " outside interval");
  }
  if (!(k >= kMinTncExponent && k <= kMaxExponent)) {
    throw InvalidArgument("TNC exponent k must lie in [1, 8], got " + fmt_num(k));
  }
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw InvalidArgument("mu must be positive, got " + fmt_num(mu));
  }
  if (!(cap > 0.0 && cap <= 0.5)) {
    throw InvalidArgument("cap must lie in (0, 1/2], got " + fmt_num(cap));
  }
  return TncProblem{interval, t, k, mu, cap, orientation};
}

double eta_at(const TncProblem& p, double x) {
  if (!p.interval.contains(x)) {
    throw OutOfDomain("query point " + fmt_num(x) + " outside problem interval");
  }
  if (x == p.t) return 0.5;
  const double u = std::abs(x - p.t);
  const double margin = std::min(p.mu * std::pow(u, p.k - 1.0), p.cap);
  const bool right = x > p.t;
  const bool positive = (p.orientation == Orientation::positive_right) == right;
  return positive ? 0.5 + margin : 0.5 - margin;
}

// ---------------------------------------------------------------------------

Box::Box(std::vector<Interval> sides) : sides_(std::move(sides)) {
  if (sides_.empty()) throw InvalidArgument("box needs at least one coordinate");
  for (auto& s : sides_) s = make_interval(s.lo, s.hi);
}

Box Box::cube(std::size_t dim, double lo, double hi) {
  return Box(std::vector<Interval>(dim, make_interval(lo, hi)));
}

bool Box::contains(const Point& x) const {
  if (static_cast<std::size_t>(x.size()) != dim()) return false;
  for (std::size_t j = 0; j < dim(); ++j) {
    if (!sides_[j].contains(x[static_cast<Eigen::Index>(j)])) return false;
  }
  return true;
}

Point Box::clip(const Point& x) const {
  Point out = x;
  for (std::size_t j = 0; j < dim(); ++j) {
    const auto i = static_cast<Eigen::Index>(j);
    out[i] = sides_[j].clip(x[i]);
  }
  return out;
}

Point Box::center() const {
  Point c(static_cast<Eigen::Index>(dim()));
  for (std::size_t j = 0; j < dim(); ++j) c[static_cast<Eigen::Index>(j)] = sides_[j].midpoint();
  return c;
}

double Box::diameter() const {
  double s = 0.0;
  for (const auto& side : sides_) s += side.width() * side.width();
  return std::sqrt(s);
}

std::string_view to_string(Family f) {
  switch (f) {
    case Family::separable_power: return "separable-power";
    case Family::quadratic: return "quadratic";
    case Family::ridge: return "ridge";
  }
  return "?";
}

Family parse_family(std::string_view s) {
  if (s == "separable-power") return Family::separable_power;
  if (s == "quadratic") return Family::quadratic;
  if (s == "ridge") return Family::ridge;
  throw InvalidArgument("unknown function family '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------

double CoordinateSlice::derivative(double alpha) const {
  if (kind_ == Kind::linear) return slope0_ + curvature_ * alpha;
  const double u = offset_ + alpha;
  if (u == 0.0) return 0.0;
  return scale_ * std::pow(std::abs(u), k_ - 1.0) * signum(u);
}

double CoordinateSlice::minimizer() const {
  const double raw = kind_ == Kind::linear ? -slope0_ / curvature_ : -offset_;
  return range_.clip(raw);
}

// ---------------------------------------------------------------------------

Family UcFunction::family() const {
  switch (params_.index()) {
    case 0: return Family::separable_power;
    case 1: return Family::quadratic;
    default: return Family::ridge;
  }
}

const SeparablePowerParams* UcFunction::separable_power() const {
  return std::get_if<SeparablePowerParams>(&params_);
}
const QuadraticParams* UcFunction::quadratic() const { return std::get_if<QuadraticParams>(&params_); }
const RidgeParams* UcFunction::ridge() const { return std::get_if<RidgeParams>(&params_); }

void UcFunction::check_point(const Point& x) const {
  if (static_cast<std::size_t>(x.size()) != dim()) {
    throw InvalidArgument("point has dimension " + std::to_string(x.size()) + ", function has " +
                          std::to_string(dim()));
  }
  if (!domain_.contains(x)) throw OutOfDomain("point outside the function's domain box");
}

void UcFunction::check_index(std::size_t j) const {
  if (j >= dim()) {
    throw InvalidArgument("coordinate index " + std::to_string(j) + " out of range for dimension " +
                          std::to_string(dim()));
  }
}

double UcFunction::value(const Point& x) const {
  check_point(x);
  if (const auto* sp = separable_power()) {
    return (sp->coeffs.array() * (x - minimizer_).array().abs().pow(sp->k)).sum();
  }
  if (const auto* q = quadratic()) {
    const Point w = x - minimizer_;
    return 0.5 * w.dot(q->A * w);
  }
  const auto& r = *ridge();
  return 0.5 * (r.A * x - r.b).squaredNorm() + 0.5 * x.squaredNorm();
}

double UcFunction::grad_coord(const Point& x, std::size_t j) const {
  check_point(x);
  check_index(j);
  const auto i = static_cast<Eigen::Index>(j);
  if (const auto* sp = separable_power()) {
    const double u = x[i] - minimizer_[i];
    if (u == 0.0) return 0.0;
    return sp->coeffs[i] * sp->k * std::pow(std::abs(u), sp->k - 1.0) * signum(u);
  }
  if (const auto* q = quadratic()) return q->A.row(i).dot(x - minimizer_);
  const auto& r = *ridge();
  return r.A.col(i).dot(r.A * x - r.b) + x[i];
}

Point UcFunction::gradient(const Point& x) const {
  check_point(x);
  if (separable_power() != nullptr) {
    Point g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) g[i] = grad_coord(x, static_cast<std::size_t>(i));
    return g;
  }
  if (const auto* q = quadratic()) return q->A * (x - minimizer_);
  const auto& r = *ridge();
  return r.A.transpose() * (r.A * x - r.b) + x;
}

double UcFunction::directional_min(const Point& x, std::size_t j) const {
  return slice(x, j).minimizer();
}

double UcFunction::error(const Point& x) const {
  if (static_cast<std::size_t>(x.size()) != dim()) {
    throw InvalidArgument("point dimension does not match function");
  }
  const Point w = x - minimizer_;
  if (const auto* sp = separable_power()) return (sp->coeffs.array() * w.array().abs().pow(sp->k)).sum();
  if (const auto* q = quadratic()) return 0.5 * w.dot(q->A * w);
  return 0.5 * w.dot(ridge()->hessian * w);
}

CoordinateSlice UcFunction::slice(const Point& x, std::size_t j) const {
  check_point(x);
  check_index(j);
  const auto i = static_cast<Eigen::Index>(j);
  CoordinateSlice s;
  s.coord_ = j;
  s.range_ = Interval{domain_.side(j).lo - x[i], domain_.side(j).hi - x[i]};
  if (const auto* sp = separable_power()) {
    s.kind_ = CoordinateSlice::Kind::power;
    s.offset_ = x[i] - minimizer_[i];
    s.scale_ = sp->coeffs[i] * sp->k;
    s.k_ = sp->k;
  } else if (const auto* q = quadratic()) {
    s.slope0_ = q->A.row(i).dot(x - minimizer_);
    s.curvature_ = q->A(i, i);
  } else {
    const auto& r = *ridge();
    s.slope0_ = r.A.col(i).dot(r.A * x - r.b) + x[i];
    s.curvature_ = r.column_sq_norms[i] + 1.0;
  }
  return s;
}

CoordinateSlice UcFunction::slice(const RidgeState& state, std::size_t j) const {
  const auto* r = ridge();
  if (r == nullptr) throw InvalidArgument("residual-cached slice requires the ridge family");
  check_index(j);
  const auto i = static_cast<Eigen::Index>(j);
  const Point& x = state.point();
  CoordinateSlice s;
  s.coord_ = j;
  s.range_ = Interval{domain_.side(j).lo - x[i], domain_.side(j).hi - x[i]};
  s.slope0_ = state.grad_coord(j);
  s.curvature_ = r->column_sq_norms[i] + 1.0;
  return s;
}

// ---------------------------------------------------------------------------

namespace {

void require_dim(const Box& domain, Eigen::Index n, const char* what) {
  if (static_cast<std::size_t>(n) != domain.dim()) {
    throw InvalidArgument(std::string(what) + " has dimension " + std::to_string(n) +
                          ", domain has " + std::to_string(domain.dim()));
  }
}

void require_inside(const Box& domain, const Point& x) {
  if (!domain.contains(x)) throw InvalidArgument("minimizer must lie inside the domain box");
}

}  // namespace

UcFunction make_separable_power(Box domain, Eigen::VectorXd coeffs, double k, Point minimizer) {
  if (domain.dim() == 0) throw InvalidArgument("domain box is empty");
  require_dim(domain, coeffs.size(), "coefficient vector");
  require_dim(domain, minimizer.size(), "minimizer");
  require_inside(domain, minimizer);
  if (!(k >= kMinUcExponent && k <= kMaxExponent)) {
    throw InvalidArgument("uniform-convexity exponent must lie in [2, 8], got " + fmt_num(k));
  }
  if (!(coeffs.array() > 0.0).all() || !coeffs.allFinite()) {
    throw InvalidArgument("separable-power coefficients must be positive");
  }
  UcFunction fn;
  const double d = static_cast<double>(domain.dim());
  const double c_min = coeffs.minCoeff();
  const double c_max = coeffs.maxCoeff();
  fn.domain_ = std::move(domain);
  fn.k_ = k;
  // Bregman divergence of |.|^k dominates |b - a|^k / (2^(k-1) - 1) for k >= 2,
  // and sum_j |w_j|^k >= d^(1 - k/2) |w|_2^k.
  fn.lambda_ = 2.0 * c_min / (std::pow(2.0, k - 1.0) - 1.0) * std::pow(d, 1.0 - k / 2.0);
  fn.big_lambda_ = k * c_max;
  if (k == 2.0) fn.smoothness_ = 2.0 * c_max;
  fn.minimizer_ = std::move(minimizer);
  fn.params_ = SeparablePowerParams{std::move(coeffs), k};
  return fn;
}

UcFunction make_quadratic(Box domain, Eigen::MatrixXd A, Point minimizer) {
  if (domain.dim() == 0) throw InvalidArgument("domain box is empty");
  require_dim(domain, A.rows(), "matrix");
  require_dim(domain, A.cols(), "matrix");
  require_dim(domain, minimizer.size(), "minimizer");
  require_inside(domain, minimizer);
  if (!A.allFinite() || (A - A.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + A.cwiseAbs().maxCoeff())) {
    throw InvalidArgument("quadratic matrix must be finite and symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(A, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success || !(eig.eigenvalues().minCoeff() > 0.0)) {
    throw InvalidArgument("quadratic matrix must be positive definite");
  }
  UcFunction fn;
  fn.domain_ = std::move(domain);
  fn.k_ = 2.0;
  fn.lambda_ = eig.eigenvalues().minCoeff();
  fn.big_lambda_ = A.diagonal().maxCoeff();
  fn.smoothness_ = eig.eigenvalues().maxCoeff();
  fn.minimizer_ = std::move(minimizer);
  fn.params_ = QuadraticParams{std::move(A)};
  return fn;
}

UcFunction make_ridge(Box domain, Eigen::MatrixXd A, Eigen::VectorXd b) {
  if (domain.dim() == 0) throw InvalidArgument("domain box is empty");
  require_dim(domain, A.cols(), "design matrix");
  if (A.rows() < 1 || b.size() != A.rows()) {
    throw InvalidArgument("ridge target length must equal the number of design rows");
  }
  if (!A.allFinite() || !b.allFinite()) throw InvalidArgument("ridge data must be finite");

  RidgeParams p;
  p.hessian = A.transpose() * A;
  p.hessian.diagonal().array() += 1.0;
  p.column_sq_norms = A.colwise().squaredNorm().transpose();
  const Eigen::VectorXd rhs = A.transpose() * b;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(p.hessian);
  Point xstar = ldlt.solve(rhs);
  const double resid = (p.hessian * xstar - rhs).norm();
  if (ldlt.info() != Eigen::Success || resid > 1e-10 * std::max(1.0, rhs.norm())) {
    throw InvalidArgument("ridge normal equations could not be solved to tolerance");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(p.hessian, Eigen::EigenvaluesOnly);

  UcFunction fn;
  fn.domain_ = std::move(domain);
  fn.k_ = 2.0;
  fn.lambda_ = eig.eigenvalues().minCoeff();
  fn.big_lambda_ = p.hessian.diagonal().maxCoeff();
  fn.smoothness_ = eig.eigenvalues().maxCoeff();
  fn.min_value_ = 0.5 * (A * xstar - b).squaredNorm() + 0.5 * xstar.squaredNorm();
  fn.minimizer_ = std::move(xstar);
  p.A = std::move(A);
  p.b = std::move(b);
  fn.params_ = std::move(p);
  return fn;
}

RidgeData read_ridge_data(std::istream& in) {
  long n = 0;
  long d = 0;
  if (!(in >> n >> d) || n < 1 || d < 1) {
    throw InvalidArgument("ridge data: header must be two positive integers 'n d'");
  }
  RidgeData out{Eigen::MatrixXd(n, d), Eigen::VectorXd(n)};
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < d; ++j) {
      if (!(in >> out.A(i, j))) throw InvalidArgument("ridge data: truncated matrix at row " + std::to_string(i + 1));
    }
  }
  for (long i = 0; i < n; ++i) {
    if (!(in >> out.b[i])) throw InvalidArgument("ridge data: truncated target row");
  }
  return out;
}

// ---------------------------------------------------------------------------

RidgeState::RidgeState(const UcFunction& fn, Point x) : params_(fn.ridge()), x_(std::move(x)) {
  if (params_ == nullptr) throw InvalidArgument("RidgeState requires the ridge family");
  if (static_cast<std::size_t>(x_.size()) != fn.dim()) throw InvalidArgument("point dimension mismatch");
  residual_ = fresh_residual();
}

void RidgeState::update_coord(std::size_t j, double value) {
  const auto i = static_cast<Eigen::Index>(j);
  const double delta = value - x_[i];
  if (delta == 0.0) return;
  residual_.noalias() += delta * params_->A.col(i);
  x_[i] = value;
}

double RidgeState::grad_coord(std::size_t j) const {
  const auto i = static_cast<Eigen::Index>(j);
  return params_->A.col(i).dot(residual_) + x_[i];
}

Eigen::VectorXd RidgeState::fresh_residual() const { return params_->A * x_ - params_->b; }

}  // namespace signcd

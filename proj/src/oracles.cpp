#include "signcd/oracles.hpp"

#include "signcd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace signcd {

QueryCounter::QueryCounter(std::optional<std::int64_t> budget) : budget_(budget) {
  if (budget_ && *budget_ < 0) throw InvalidArgument("budget must be non-negative");
}

void QueryCounter::charge() {
  if (budget_ && used_ >= *budget_) {
    throw BudgetExhausted("query budget of " + std::to_string(*budget_) + " exhausted");
  }
  ++used_;
}

// ---------------------------------------------------------------------------

LabelOracle::LabelOracle(const TncProblem& problem, RngStream rng, std::optional<std::int64_t> budget)
    : problem_(&problem), rng_(rng), counter_(budget) {}

Label LabelOracle::query(double x) {
  if (!problem_->interval.contains(x)) throw OutOfDomain("label query outside problem interval");
  counter_.charge();
  return rng_.uniform() < eta_at(*problem_, x) ? Label::plus : Label::minus;
}

BudgetedLabelSource::BudgetedLabelSource(LabelSource& inner, std::int64_t budget)
    : inner_(&inner), start_(inner.queries_used()), budget_(budget) {
  if (budget < 0) throw InvalidArgument("budget must be non-negative");
}

Label BudgetedLabelSource::query(double x) {
  if (remaining() <= 0) {
    throw BudgetExhausted("query budget of " + std::to_string(budget_) + " exhausted");
  }
  return inner_->query(x);
}

std::int64_t BudgetedLabelSource::remaining() const {
  return budget_ - (inner_->queries_used() - start_);
}

BudgetedLabelSource with_budget(LabelSource& oracle, std::int64_t budget) {
  return BudgetedLabelSource(oracle, budget);
}

// ---------------------------------------------------------------------------

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

void validate(const SignMode& mode) {
  std::visit(overloaded{
                 [](const AdditiveNoise& a) {
                   std::visit(overloaded{
                                  [](const GaussianNoise& g) {
                                    if (!(g.sigma > 0.0) || !std::isfinite(g.sigma))
                                      throw InvalidArgument("gaussian sigma must be positive");
                                  },
                                  [](const UniformNoise& u) {
                                    if (!(u.halfwidth > 0.0) || !std::isfinite(u.halfwidth))
                                      throw InvalidArgument("uniform halfwidth must be positive");
                                  },
                              },
                              a.dist);
                 },
                 [](const DirectBernoulli& b) {
                   if (!(b.slope > 0.0) || !std::isfinite(b.slope))
                     throw InvalidArgument("direct-bernoulli slope must be positive");
                   if (!(b.cap > 0.0 && b.cap <= 0.5))
                     throw InvalidArgument("direct-bernoulli cap must lie in (0, 1/2]");
                 },
                 [](const ExactSign&) {},
                 [](const QuantizedSign& q) {
                   if (q.decimals < 0 || q.decimals > 15)
                     throw InvalidArgument("quantized decimals must lie in [0, 15]");
                 },
             },
             mode);
}

std::string describe(const SignMode& mode) {
  std::ostringstream os;
  std::visit(overloaded{
                 [&](const AdditiveNoise& a) {
                   if (const auto* g = std::get_if<GaussianNoise>(&a.dist)) {
                     os << "additive-noise(gaussian, sigma=" << g->sigma << ")";
                   } else {
                     os << "additive-noise(uniform, halfwidth=" << std::get<UniformNoise>(a.dist).halfwidth
                        << ")";
                   }
                 },
                 [&](const DirectBernoulli& b) {
                   os << "direct-bernoulli(slope=" << b.slope << ", cap=" << b.cap << ")";
                 },
                 [&](const ExactSign&) { os << "exact"; },
                 [&](const QuantizedSign& q) { os << "quantized(decimals=" << q.decimals << ")"; },
             },
             mode);
  return os.str();
}

double plus_probability(const SignMode& mode, double g) {
  return std::visit(
      overloaded{
          [g](const AdditiveNoise& a) -> double {
            if (const auto* gn = std::get_if<GaussianNoise>(&a.dist)) return std_normal_cdf(g / gn->sigma);
            const double h = std::get<UniformNoise>(a.dist).halfwidth;
            return std::clamp((h + g) / (2.0 * h), 0.0, 1.0);
          },
          [g](const DirectBernoulli& b) -> double {
            return std::clamp(0.5 + b.slope * g, 0.5 - b.cap, 0.5 + b.cap);
          },
          [g](const auto&) -> double { return g > 0.0 ? 1.0 : (g < 0.0 ? 0.0 : 0.5); },
      },
      mode);
}

SignOracle::SignOracle(const UcFunction& fn, SignMode mode, RngStream rng,
                       std::optional<std::int64_t> budget)
    : fn_(&fn), mode_(mode), rng_(rng), counter_(budget) {
  validate(mode_);
}

Label SignOracle::sample(const Point& x, std::size_t j) {
  if (static_cast<std::size_t>(x.size()) != fn_->dim()) throw InvalidArgument("point dimension mismatch");
  if (!fn_->domain().contains(x)) throw OutOfDomain("sign query outside the domain box");
  const double g = fn_->grad_coord(x, j);
  return sample_derivative(g);
}

Label SignOracle::sample_derivative(double g) {
  counter_.charge();
  return draw(g);
}

Label SignOracle::coin() { return rng_.coin() ? Label::plus : Label::minus; }

Label SignOracle::draw(double g) {
  auto sign_or_coin = [this](double v) {
    if (v > 0.0) return Label::plus;
    if (v < 0.0) return Label::minus;
    return coin();
  };
  return std::visit(
      overloaded{
          [&](const AdditiveNoise& a) {
            double z = 0.0;
            if (const auto* gn = std::get_if<GaussianNoise>(&a.dist)) {
              z = gn->sigma * normal_(rng_);
            } else {
              const double h = std::get<UniformNoise>(a.dist).halfwidth;
              z = rng_.uniform(-h, h);
            }
            return sign_or_coin(g + z);
          },
          [&](const DirectBernoulli& b) {
            const double p = std::clamp(0.5 + b.slope * g, 0.5 - b.cap, 0.5 + b.cap);
            return rng_.uniform() < p ? Label::plus : Label::minus;
          },
          [&](const ExactSign&) { return sign_or_coin(g); },
          [&](const QuantizedSign& qs) {
            const double scale = std::pow(10.0, qs.decimals);
            const double q = std::copysign(std::round(std::abs(g) * scale) / scale, g);
            return sign_or_coin(q == 0.0 ? g : q);
          },
      },
      mode_);
}

BudgetedSignOracle::BudgetedSignOracle(SignOracle& inner, std::int64_t budget)
    : inner_(&inner), start_(inner.queries_used()), budget_(budget) {
  if (budget < 0) throw InvalidArgument("budget must be non-negative");
}

void BudgetedSignOracle::check() const {
  if (remaining() <= 0) {
    throw BudgetExhausted("query budget of " + std::to_string(budget_) + " exhausted");
  }
}

Label BudgetedSignOracle::sample(const Point& x, std::size_t j) {
  check();
  return inner_->sample(x, j);
}

Label BudgetedSignOracle::sample_derivative(double g) {
  check();
  return inner_->sample_derivative(g);
}

std::int64_t BudgetedSignOracle::remaining() const {
  return budget_ - (inner_->queries_used() - start_);
}

BudgetedSignOracle with_budget(SignOracle& oracle, std::int64_t budget) {
  return BudgetedSignOracle(oracle, budget);
}

}  // namespace signcd

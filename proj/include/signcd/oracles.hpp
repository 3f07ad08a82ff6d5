#pragma once

#include "signcd/problems.hpp"
#include "signcd/rng.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <variant>

namespace signcd {

enum class Label : std::int8_t { minus = -1, plus = 1 };

inline int to_int(Label l) { return static_cast<int>(l); }
inline char to_char(Label l) { return l == Label::plus ? '+' : '-'; }

// Shared query accounting: count plus an optional hard cap.
class QueryCounter {
 public:
  explicit QueryCounter(std::optional<std::int64_t> budget = std::nullopt);

  // Records one query, throwing BudgetExhausted if the cap is already reached.
  void charge();
  [[nodiscard]] std::int64_t used() const { return used_; }
  [[nodiscard]] std::optional<std::int64_t> budget() const { return budget_; }

 private:
  std::int64_t used_ = 0;
  std::optional<std::int64_t> budget_;
};

// Anything a one-dimensional learner can query for labels.
class LabelSource {
 public:
  virtual ~LabelSource() = default;
  virtual Label query(double x) = 0;
  [[nodiscard]] virtual Interval domain() const = 0;
  [[nodiscard]] virtual std::int64_t queries_used() const = 0;
};

// Label oracle for a TncProblem: + with probability eta(x), independently
// across calls.
class LabelOracle final : public LabelSource {
 public:
  LabelOracle(const TncProblem& problem, RngStream rng,
              std::optional<std::int64_t> budget = std::nullopt);

  Label query(double x) override;
  [[nodiscard]] Interval domain() const override { return problem_->interval; }
  [[nodiscard]] std::int64_t queries_used() const override { return counter_.used(); }
  [[nodiscard]] std::optional<std::int64_t> budget() const { return counter_.budget(); }
  [[nodiscard]] const TncProblem& problem() const { return *problem_; }

 private:
  const TncProblem* problem_;
  RngStream rng_;
  QueryCounter counter_;
};

inline Label label_sample(LabelOracle& oracle, double x) { return oracle.query(x); }

// View over another label source that allows at most `budget` further
// queries. Shares the inner RNG and counter.
class BudgetedLabelSource final : public LabelSource {
 public:
  BudgetedLabelSource(LabelSource& inner, std::int64_t budget);

  Label query(double x) override;
  [[nodiscard]] Interval domain() const override { return inner_->domain(); }
  [[nodiscard]] std::int64_t queries_used() const override { return inner_->queries_used(); }
  [[nodiscard]] std::int64_t remaining() const;

 private:
  LabelSource* inner_;
  std::int64_t start_;
  std::int64_t budget_;
};

BudgetedLabelSource with_budget(LabelSource& oracle, std::int64_t budget);

// --- gradient-sign oracles -------------------------------------------------

struct GaussianNoise {
  double sigma = 1.0;
};
struct UniformNoise {
  double halfwidth = 1.0;
};
// sign(g + z) with z symmetric about 0 and positive density at 0.
struct AdditiveNoise {
  std::variant<GaussianNoise, UniformNoise> dist = GaussianNoise{};
};
// + with probability clamp(1/2 + slope * g, 1/2 - cap, 1/2 + cap).
struct DirectBernoulli {
  double slope = 1.0;
  double cap = 0.5;
};
// sign(g).
struct ExactSign {};
// sign of g rounded to `decimals` places; a value that rounds to zero keeps
// the sign of g, so the output never disagrees with sign(g).
struct QuantizedSign {
  int decimals = 3;
};

using SignMode = std::variant<AdditiveNoise, DirectBernoulli, ExactSign, QuantizedSign>;

void validate(const SignMode& mode);
std::string describe(const SignMode& mode);

// Analytic P(+) given the true coordinate derivative g.
double plus_probability(const SignMode& mode, double g);

class SignOracle {
 public:
  SignOracle(const UcFunction& fn, SignMode mode, RngStream rng,
             std::optional<std::int64_t> budget = std::nullopt);

  // Noisy sign of [grad f(x)]_j. Throws OutOfDomain / BudgetExhausted.
  Label sample(const Point& x, std::size_t j);
  // Same draw when the caller already holds the coordinate derivative (line
  // searches evaluate it from a CoordinateSlice). Charges the budget.
  Label sample_derivative(double g);

  [[nodiscard]] std::int64_t queries_used() const { return counter_.used(); }
  [[nodiscard]] std::optional<std::int64_t> budget() const { return counter_.budget(); }
  [[nodiscard]] const UcFunction& function() const { return *fn_; }
  [[nodiscard]] const SignMode& mode() const { return mode_; }

 private:
  Label draw(double g);
  Label coin();

  const UcFunction* fn_;
  SignMode mode_;
  RngStream rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  QueryCounter counter_;
};

inline Label sign_sample(SignOracle& oracle, const Point& x, std::size_t j) {
  return oracle.sample(x, j);
}

// with_budget for sign oracles: at most `budget` further queries.
class BudgetedSignOracle {
 public:
  BudgetedSignOracle(SignOracle& inner, std::int64_t budget);

  Label sample(const Point& x, std::size_t j);
  Label sample_derivative(double g);
  [[nodiscard]] std::int64_t queries_used() const { return inner_->queries_used(); }
  [[nodiscard]] std::int64_t remaining() const;
  [[nodiscard]] SignOracle& inner() { return *inner_; }

 private:
  void check() const;

  SignOracle* inner_;
  std::int64_t start_;
  std::int64_t budget_;
};

BudgetedSignOracle with_budget(SignOracle& oracle, std::int64_t budget);

}  // namespace signcd

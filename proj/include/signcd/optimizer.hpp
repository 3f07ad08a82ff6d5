#pragma once

#include "signcd/learners.hpp"
#include "signcd/oracles.hpp"
#include "signcd/problems.hpp"

#include <cstdint>
#include <string_view>
#include <vector>

namespace signcd {

enum class EpochRule { paper_default, explicit_count };

std::string_view to_string(EpochRule r);

struct OptimizerConfig {
  std::int64_t budget = 1;
  EpochRule epoch_rule = EpochRule::paper_default;
  std::int64_t epochs = 0;  // used by explicit_count
  LearnerKind line_search = LearnerKind::adaptive;
  // Template for each line search; its budget is replaced by the per-epoch share.
  LearnerConfig learner;
  std::uint64_t seed = 0;
};

struct OptimizerSchedule {
  std::int64_t epochs = 1;
  std::int64_t per_epoch = 0;
};

// paper_default: E = ceil(d (ln T)^2); N = floor(T / E). Throws when T < E.
OptimizerSchedule optimizer_schedule(const OptimizerConfig& config, std::size_t dim);

struct OptEpochRecord {
  std::size_t coordinate = 0;
  double step = 0.0;
  double f_value = 0.0;
  double f_error = 0.0;
};

struct OptRunResult {
  Point x_final;
  double f_error = 0.0;
  std::int64_t queries_used = 0;
  std::int64_t epochs = 0;
  std::int64_t per_epoch = 0;
  std::vector<OptEpochRecord> trace;
};

// The coordinate line {alpha : x + alpha e_j in box} seen as a threshold
// problem: the label at alpha is a sign-oracle draw of f'(alpha). Convexity
// makes f' increasing, so "+" lies right of the coordinate minimum.
class LineLabelSource final : public LabelSource {
 public:
  LineLabelSource(SignOracle& oracle, CoordinateSlice slice);

  Label query(double alpha) override;
  [[nodiscard]] Interval domain() const override { return slice_.alpha_range(); }
  [[nodiscard]] std::int64_t queries_used() const override { return oracle_->queries_used(); }
  [[nodiscard]] const CoordinateSlice& slice() const { return slice_; }

 private:
  SignOracle* oracle_;
  CoordinateSlice slice_;
};

LineLabelSource line_label_oracle(SignOracle& oracle, const Point& x, std::size_t j);

// Randomized stochastic-sign coordinate descent. Each epoch draws a coordinate
// uniformly, line-searches it with the configured 1-D learner on the
// per-epoch budget and moves to the estimate. Returns the last iterate.
OptRunResult rssgd(const UcFunction& fn, SignOracle& oracle, const OptimizerConfig& config, const Point& x0);

}  // namespace signcd

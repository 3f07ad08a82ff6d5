#include "signcd/optimizer.hpp"

#include "signcd/errors.hpp"

#include <cmath>
#include <optional>
#include <string>

namespace signcd {

std::string_view to_string(EpochRule r) {
  return r == EpochRule::paper_default ? "paper-default" : "explicit";
}

OptimizerSchedule optimizer_schedule(const OptimizerConfig& config, std::size_t dim) {
  if (config.budget < 1) throw InvalidArgument("optimizer budget must be positive");
  if (dim == 0) throw InvalidArgument("dimension must be positive");
  OptimizerSchedule s;
  if (config.epoch_rule == EpochRule::paper_default) {
    const double log_t = std::log(static_cast<double>(config.budget));
    s.epochs = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(std::ceil(static_cast<double>(dim) * log_t * log_t)));
  } else {
    if (config.epochs < 1) throw InvalidArgument("explicit epoch count must be at least 1");
    s.epochs = config.epochs;
  }
  if (config.budget < s.epochs) {
    throw InvalidArgument("budget " + std::to_string(config.budget) + " is smaller than the " +
                          std::to_string(s.epochs) +
                          " epochs of the schedule; raise the budget or use an explicit epoch count");
  }
  s.per_epoch = config.budget / s.epochs;
  return s;
}

LineLabelSource::LineLabelSource(SignOracle& oracle, CoordinateSlice slice)
    : oracle_(&oracle), slice_(slice) {}

Label LineLabelSource::query(double alpha) {
  if (!slice_.alpha_range().contains(alpha)) throw OutOfDomain("line query outside the feasible segment");
  return oracle_->sample_derivative(slice_.derivative(alpha));
}

LineLabelSource line_label_oracle(SignOracle& oracle, const Point& x, std::size_t j) {
  return LineLabelSource(oracle, oracle.function().slice(x, j));
}

OptRunResult rssgd(const UcFunction& fn, SignOracle& oracle, const OptimizerConfig& config, const Point& x0) {
  if (&oracle.function() != &fn) throw InvalidArgument("sign oracle is bound to a different function");
  if (static_cast<std::size_t>(x0.size()) != fn.dim()) throw InvalidArgument("x0 dimension mismatch");
  if (!fn.domain().contains(x0)) throw OutOfDomain("x0 outside the domain box");
  validate(config.learner);
  if (config.learner.orientation == OrientationMode::positive_left) {
    throw InvalidArgument("line searches are positive-right by construction");
  }
  const OptimizerSchedule sched = optimizer_schedule(config, fn.dim());

  RngStream base(config.seed);
  RngStream coord_rng = base.split(static_cast<std::uint64_t>(StreamRole::coordinate));
  RngStream learner_rng = base.split(static_cast<std::uint64_t>(StreamRole::learner));

  LearnerConfig line_cfg = config.learner;
  line_cfg.budget = sched.per_epoch;

  std::optional<RidgeState> ridge;
  if (fn.ridge() != nullptr) ridge.emplace(fn, x0);
  Point x = x0;

  OptRunResult result;
  result.epochs = sched.epochs;
  result.per_epoch = sched.per_epoch;
  result.trace.reserve(static_cast<std::size_t>(sched.epochs));
  const std::int64_t start = oracle.queries_used();

  for (std::int64_t e = 0; e < sched.epochs; ++e) {
    const auto j = static_cast<std::size_t>(coord_rng.index(fn.dim()));
    const CoordinateSlice slice = ridge ? fn.slice(*ridge, j) : fn.slice(x, j);
    LineLabelSource line(oracle, slice);
    const ThresholdEstimate step = run_learner(config.line_search, line, slice.alpha_range(), line_cfg, learner_rng);

    const auto i = static_cast<Eigen::Index>(j);
    const double next = fn.domain().side(j).clip(x[i] + step.point);
    if (ridge) ridge->update_coord(j, next);
    x[i] = next;

    const double err = fn.error(x);
    result.trace.push_back({j, step.point, fn.min_value() + err, err});
  }

  result.x_final = x;
  result.f_error = fn.error(x);
  result.queries_used = oracle.queries_used() - start;
  return result;
}

}  // namespace signcd

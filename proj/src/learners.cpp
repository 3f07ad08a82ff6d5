#include "signcd/learners.hpp"

#include "signcd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace signcd {

std::string_view to_string(LearnerKind k) {
  switch (k) {
    case LearnerKind::passive: return "passive";
    case LearnerKind::bz: return "bz";
    case LearnerKind::adaptive: return "adaptive";
    case LearnerKind::bisect: return "bisect";
  }
  return "?";
}

LearnerKind parse_learner_kind(std::string_view s) {
  if (s == "passive") return LearnerKind::passive;
  if (s == "bz") return LearnerKind::bz;
  if (s == "adaptive") return LearnerKind::adaptive;
  if (s == "bisect") return LearnerKind::bisect;
  throw InvalidArgument("unknown learner '" + std::string(s) + "'");
}

std::string_view to_string(OrientationMode m) {
  switch (m) {
    case OrientationMode::positive_right: return "positive-right";
    case OrientationMode::positive_left: return "positive-left";
    case OrientationMode::automatic: return "auto";
  }
  return "?";
}

OrientationMode parse_orientation_mode(std::string_view s) {
  if (s == "auto") return OrientationMode::automatic;
  return parse_orientation(s) == Orientation::positive_right ? OrientationMode::positive_right
                                                             : OrientationMode::positive_left;
}

void validate(const LearnerConfig& c) {
  if (c.budget < 0) throw InvalidArgument("learner budget must be non-negative");
  if (!(c.confidence > 0.0 && c.confidence < 1.0)) throw InvalidArgument("confidence must lie in (0, 1)");
  if (!(c.c_delta * c.c_delta > 2.0) || !std::isfinite(c.c_delta)) {
    throw InvalidArgument("c_delta must satisfy c_delta^2 > 2");
  }
  if (c.grid_size < 0) throw InvalidArgument("grid_size must be non-negative");
  if (!(c.bz_k >= kMinTncExponent && c.bz_k <= kMaxExponent)) throw InvalidArgument("bz_k must lie in [1, 8]");
  if (!(c.bz_mu > 0.0)) throw InvalidArgument("bz_mu must be positive");
}

namespace {

void require_search(const LabelSource& source, Interval search) {
  if (!(search.width() > 0.0)) throw InvalidArgument("search interval has zero length");
  if (!source.domain().contains(search)) throw InvalidArgument("search interval exceeds the oracle's domain");
}

Orientation resolve(OrientationMode m) {
  return m == OrientationMode::positive_left ? Orientation::positive_left : Orientation::positive_right;
}

}  // namespace

double erm_threshold(std::span<const LabeledSample> samples, Interval search, Orientation orientation) {
  std::vector<LabeledSample> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.x < b.x; });

  // For positive-right, a cut c errs on "+" samples left of c and "-" samples
  // right of c. Positive-left swaps the roles.
  const Label left_wrong = orientation == Orientation::positive_right ? Label::plus : Label::minus;
  std::int64_t right_wrong = 0;
  for (const auto& s : sorted) right_wrong += s.label != left_wrong;

  std::int64_t best_err = right_wrong;  // cut at search.lo
  double best_cut = search.lo;
  std::int64_t errors = right_wrong;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    errors += sorted[i].label == left_wrong ? 1 : -1;
    const double cut = i + 1 < sorted.size() ? 0.5 * (sorted[i].x + sorted[i + 1].x) : search.hi;
    if (errors < best_err) {
      best_err = errors;
      best_cut = cut;
    }
  }
  return best_cut;
}

Orientation estimate_orientation(std::span<const LabeledSample> samples, Interval search) {
  const double mid = search.midpoint();
  double plus_left = 0;
  double n_left = 0;
  double plus_right = 0;
  double n_right = 0;
  for (const auto& s : samples) {
    const double p = s.label == Label::plus ? 1.0 : 0.0;
    if (s.x < mid) {
      plus_left += p;
      n_left += 1;
    } else {
      plus_right += p;
      n_right += 1;
    }
  }
  const double rate_left = n_left > 0 ? plus_left / n_left : 0.5;
  const double rate_right = n_right > 0 ? plus_right / n_right : 0.5;
  return rate_right >= rate_left ? Orientation::positive_right : Orientation::positive_left;
}

PassiveResult passive_erm_run(LabelSource& source, Interval search, std::int64_t n,
                              OrientationMode orientation, RngStream& rng) {
  require_search(source, search);
  if (n < 1) throw InvalidArgument("passive ERM needs at least one sample");
  std::vector<LabeledSample> samples;
  samples.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    const double x = search.clip(rng.uniform(search.lo, search.hi));
    samples.push_back({x, source.query(x)});
  }
  PassiveResult out;
  if (orientation == OrientationMode::automatic) {
    const auto head = std::min<std::size_t>(20, samples.size());
    out.orientation = estimate_orientation(std::span(samples).first(head), search);
  } else {
    out.orientation = resolve(orientation);
  }
  out.threshold = erm_threshold(samples, search, out.orientation);
  return out;
}

EpochSchedule adaptive_schedule(std::int64_t budget, double c_delta) {
  EpochSchedule s;
  if (budget >= 4) {
    const double t = static_cast<double>(budget);
    const double inner = 2.0 * t / (c_delta * c_delta * std::log2(t));
    const double e = std::floor(std::log2(std::sqrt(inner)));
    s.epochs = std::max<std::int64_t>(1, static_cast<std::int64_t>(e));
  }
  s.per_epoch = budget / s.epochs;
  return s;
}

std::int64_t bz_grid_size(const LearnerConfig& c, double width) {
  constexpr std::int64_t kMaxGrid = 1 << 16;
  if (c.grid_size > 0) return c.grid_size;
  if (c.bz_k == 1.0) return kMaxGrid;
  // Resolution at which the TNC margin mu * delta^(k-1) is resolvable with
  // ~T queries, delta^(2k-2) ~ log T / (mu^2 T), refined by kGridRefine. At
  // the unrefined resolution the posterior settles on one cell almost surely
  // and the error is just the distance from t to that cell's midpoint.
  constexpr double kGridRefine = 4.0;
  const double t = std::max<double>(2.0, static_cast<double>(c.budget));
  const double delta = std::pow(std::log(t) / (c.bz_mu * c.bz_mu * t), 1.0 / (2.0 * c.bz_k - 2.0));
  const double m = std::ceil(kGridRefine * width / delta);
  return std::clamp<std::int64_t>(static_cast<std::int64_t>(std::min(m, 1e9)), 2, kMaxGrid);
}

ThresholdEstimate bz_learner(LabelSource& source, Interval search, const LearnerConfig& config) {
  validate(config);
  require_search(source, search);
  if (config.orientation == OrientationMode::automatic) {
    throw InvalidArgument("bz learner needs a known orientation");
  }
  const std::int64_t cells = bz_grid_size(config, search.width());
  if (cells < 2) throw InvalidArgument("bz grid needs at least two cells");
  const auto m = static_cast<std::size_t>(cells);
  const double delta = search.width() / static_cast<double>(cells);
  const double gamma = std::min(0.5, config.bz_mu * std::pow(delta, config.bz_k - 1.0));
  const bool right = resolve(config.orientation) == Orientation::positive_right;

  std::vector<double> post(m, 1.0 / static_cast<double>(m));

  // Cell containing the posterior median and the continuous median position
  // in cell units.
  auto median = [&](double& position) {
    double cum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (cum + post[i] >= 0.5 || i + 1 == m) {
        position = static_cast<double>(i) + (post[i] > 0.0 ? (0.5 - cum) / post[i] : 0.5);
        return i;
      }
      cum += post[i];
    }
    return m - 1;
  };

  BudgetedLabelSource budgeted(source, config.budget);
  const std::int64_t start = source.queries_used();
  for (std::int64_t q = 0; q < config.budget; ++q) {
    double position = 0.0;
    median(position);
    const auto b = static_cast<std::size_t>(
        std::clamp<double>(std::round(position), 1.0, static_cast<double>(m - 1)));
    const double x = search.clip(search.lo + static_cast<double>(b) * delta);
    const Label label = budgeted.query(x);
    // "+" under positive-right means x lies right of the threshold.
    const bool threshold_left = (label == Label::plus) == right;
    const double up = 1.0 + gamma;
    const double down = 1.0 - gamma;
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      post[i] *= (i < b) == threshold_left ? up : down;
      total += post[i];
    }
    for (auto& p : post) p /= total;
  }

  double position = 0.0;
  const std::size_t cell = median(position);
  ThresholdEstimate est;
  est.point = search.clip(search.lo + (static_cast<double>(cell) + 0.5) * delta);
  est.queries_used = source.queries_used() - start;
  est.epochs = 1;
  return est;
}

ThresholdEstimate adaptive_learner(LabelSource& source, Interval search, const LearnerConfig& config,
                                   RngStream& rng) {
  validate(config);
  require_search(source, search);
  const EpochSchedule sched = adaptive_schedule(config.budget, config.c_delta);
  if (sched.per_epoch < 1) throw InvalidArgument("adaptive learner needs a positive budget");

  BudgetedLabelSource budgeted(source, config.budget);
  const std::int64_t start = source.queries_used();
  ThresholdEstimate est;
  est.epochs = sched.epochs;
  est.trace.reserve(static_cast<std::size_t>(sched.epochs));

  double center = search.midpoint();
  double radius = search.width();
  OrientationMode orientation = config.orientation;
  for (std::int64_t e = 0; e < sched.epochs; ++e) {
    const Interval ball{std::max(search.lo, center - radius), std::min(search.hi, center + radius)};
    const PassiveResult r = passive_erm_run(budgeted, ball, sched.per_epoch, orientation, rng);
    // Orientation is settled once, in the widest ball.
    orientation = r.orientation == Orientation::positive_right ? OrientationMode::positive_right
                                                               : OrientationMode::positive_left;
    est.trace.push_back({center, radius, r.threshold});
    center = r.threshold;
    radius *= 0.5;
  }
  est.point = center;
  est.queries_used = source.queries_used() - start;
  return est;
}

double bisect_noiseless(LabelSource& source, Interval search, std::int64_t budget, Orientation orientation) {
  require_search(source, search);
  if (budget < 0) throw InvalidArgument("budget must be non-negative");
  BudgetedLabelSource budgeted(source, budget);
  double lo = search.lo;
  double hi = search.hi;
  const bool right = orientation == Orientation::positive_right;
  for (std::int64_t q = 0; q < budget; ++q) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;  // interval exhausted in double precision
    const bool threshold_left = (budgeted.query(mid) == Label::plus) == right;
    (threshold_left ? hi : lo) = mid;
  }
  return lo + 0.5 * (hi - lo);
}

ThresholdEstimate run_learner(LearnerKind kind, LabelSource& source, Interval search,
                              const LearnerConfig& config, RngStream& rng) {
  if (!(search.width() > 0.0)) return ThresholdEstimate{search.lo, 0, 0, {}};
  switch (kind) {
    case LearnerKind::passive: {
      validate(config);
      const std::int64_t start = source.queries_used();
      ThresholdEstimate est;
      est.point = passive_erm(source, search, config.budget, config.orientation, rng);
      est.queries_used = source.queries_used() - start;
      est.epochs = 1;
      return est;
    }
    case LearnerKind::bz: return bz_learner(source, search, config);
    case LearnerKind::adaptive: return adaptive_learner(source, search, config, rng);
    case LearnerKind::bisect: {
      validate(config);
      if (config.orientation == OrientationMode::automatic) {
        throw InvalidArgument("bisection needs a known orientation");
      }
      const std::int64_t start = source.queries_used();
      ThresholdEstimate est;
      est.point = bisect_noiseless(source, search, config.budget, resolve(config.orientation));
      est.queries_used = source.queries_used() - start;
      est.epochs = 1;
      return est;
    }
  }
  throw InvalidArgument("unknown learner kind");
}

}  // namespace signcd

#pragma once

#include "signcd/oracles.hpp"
#include "signcd/problems.hpp"
#include "signcd/rng.hpp"

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace signcd {

enum class LearnerKind { passive, bz, adaptive, bisect };

std::string_view to_string(LearnerKind k);
LearnerKind parse_learner_kind(std::string_view s);

enum class OrientationMode { positive_right, positive_left, automatic };

std::string_view to_string(OrientationMode m);
OrientationMode parse_orientation_mode(std::string_view s);

struct LearnerConfig {
  std::int64_t budget = 1;
  double confidence = 0.05;
  // Per-epoch deviation constant; must satisfy c_delta^2 > 2.
  double c_delta = 2.0;
  OrientationMode orientation = OrientationMode::positive_right;
  // BZ only. 0 selects the grid from the budget and (bz_k, bz_mu).
  std::int64_t grid_size = 0;
  double bz_k = 2.0;
  double bz_mu = 1.0;
};

void validate(const LearnerConfig& config);

struct EpochRecord {
  double center = 0.0;
  double radius = 0.0;
  double estimate = 0.0;
};

struct ThresholdEstimate {
  double point = 0.0;
  std::int64_t queries_used = 0;
  std::int64_t epochs = 0;
  std::vector<EpochRecord> trace;
};

struct LabeledSample {
  double x = 0.0;
  Label label = Label::minus;
};

// Empirical-risk-minimizing cut over {lo, hi} and the midpoints of
// consecutive sorted sample positions. Ties go to the leftmost cut.
double erm_threshold(std::span<const LabeledSample> samples, Interval search, Orientation orientation);

// Majority vote: positive-right when the right half of `search` shows at least
// the "+" rate of the left half.
Orientation estimate_orientation(std::span<const LabeledSample> samples, Interval search);

struct PassiveResult {
  double threshold = 0.0;
  Orientation orientation = Orientation::positive_right;
};

// Draws n points uniformly on `search`, labels each, returns the ERM cut.
// With automatic orientation the first min(20, n) samples decide it.
PassiveResult passive_erm_run(LabelSource& source, Interval search, std::int64_t n,
                              OrientationMode orientation, RngStream& rng);

inline double passive_erm(LabelSource& source, Interval search, std::int64_t n,
                          OrientationMode orientation, RngStream& rng) {
  return passive_erm_run(source, search, n, orientation, rng).threshold;
}

struct EpochSchedule {
  std::int64_t epochs = 1;
  std::int64_t per_epoch = 0;
};

// E = max(1, floor(log2 sqrt(2T / (c^2 log2 T)))), N = floor(T / E).
EpochSchedule adaptive_schedule(std::int64_t budget, double c_delta);

// Grid size used by bz_learner for an interval of the given width.
std::int64_t bz_grid_size(const LearnerConfig& config, double width);

// Probabilistic bisection on a uniform grid with known TNC parameters.
ThresholdEstimate bz_learner(LabelSource& source, Interval search, const LearnerConfig& config);

// Epoch-based learner: passive ERM in balls of halving radius around the
// previous estimate, with equal budget per epoch. Needs no TNC parameters.
ThresholdEstimate adaptive_learner(LabelSource& source, Interval search, const LearnerConfig& config,
                                   RngStream& rng);

// Classic bisection for noiseless labels; error <= |search| 2^-(T+1).
double bisect_noiseless(LabelSource& source, Interval search, std::int64_t budget,
                        Orientation orientation = Orientation::positive_right);

// Dispatch by kind. Zero-width searches return their single point with no
// queries spent.
ThresholdEstimate run_learner(LearnerKind kind, LabelSource& source, Interval search,
                              const LearnerConfig& config, RngStream& rng);

}  // namespace signcd

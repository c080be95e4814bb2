/*
 * kfsieve — content-aware keyframe selection for posed RGB-D streams
 *
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#include "kfsieve/controller.hpp"

#include <algorithm>
#include <cmath>

#include "kfsieve/errors.hpp"

namespace kfsieve {

std::string to_string(Decision d) {
  switch (d) {
    case Decision::Select: return "Select";
    case Decision::Skip: return "Skip";
    case Decision::ForcedSelect: return "ForcedSelect";
  }
  throw ValidationError("to_string: unknown decision");
}

WindowStats window_stats(std::span<const double> errors) {
  if (errors.empty()) throw ValidationError("window_stats: empty window");
  const auto n = static_cast<double>(errors.size());
  double mean = 0.0;
  for (double e : errors) mean += e;
  mean /= n;
  double var = 0.0;
  for (double e : errors) var += (e - mean) * (e - mean);
  var /= n;
  return WindowStats{mean, std::sqrt(var)};
}

ThresholdController::ThresholdController(const SelectorConfig& cfg) : cfg_(cfg) {
  validate_config(cfg_);
  ring_.resize(static_cast<std::size_t>(cfg_.window_size));
  reset();
}

void ThresholdController::reset() {
  next_ = 0;
  count_ = 0;
  theta_ = cfg_.init_threshold;
  decay_pending_ = false;
}

ObserveResult ThresholdController::observe(double error) {
  if (!std::isfinite(error) || error < 0.0) {
    throw ValidationError("observe: error must be finite and >= 0");
  }

  ring_[next_] = error;
  next_ = (next_ + 1) % ring_.size();
  ++count_;

  ObserveResult result;
  const auto window = static_cast<std::uint64_t>(cfg_.window_size);
  if (count_ >= window) {
    const WindowStats stats = window_stats(ring_);
    theta_ = std::max(cfg_.base_threshold, stats.mean + cfg_.sensitivity * stats.stddev);
    result.mu = stats.mean;
    result.sigma = stats.stddev;
  } else {
    // Warm-up: t is the stream position of the frame under comparison,
    // i.e. one past the number of errors seen so far.
    const double t = static_cast<double>(count_ + 1);
    const double w = static_cast<double>(cfg_.window_size);
    theta_ = cfg_.base_threshold * (t / w) + cfg_.init_threshold * (1.0 - t / w);
  }

  double effective = theta_;
  if (cfg_.decay_mode == DecayMode::Multiplier && decay_pending_) {
    effective = cfg_.decay * theta_;
  }
  decay_pending_ = false;

  const bool select = error > effective;
  result.decision = select ? Decision::Select : Decision::Skip;
  result.theta_effective = effective;

  if (select) {
    if (cfg_.decay_mode == DecayMode::Literal) {
      // Verbatim post-selection decay; the next observe recomputes theta
      // before any comparison, so this write never changes a decision.
      theta_ = cfg_.decay * theta_;
    } else {
      decay_pending_ = true;
    }
  }
  return result;
}

}  // namespace kfsieve

/*
 * kfsieve — content-aware keyframe selection for posed RGB-D streams
 *
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "kfsieve/config.hpp"

namespace kfsieve {

enum class Decision { Select, Skip, ForcedSelect };

std::string to_string(Decision d);

struct WindowStats {
  double mean = 0.0;
  double stddev = 0.0;  // population (divisor = window length)
};

/// Mean and population standard deviation of one full window.
WindowStats window_stats(std::span<const double> errors);

struct ObserveResult {
  Decision decision = Decision::Skip;
  double theta_effective = 0.0;
  // Present only when the window was full (adaptive branch).
  std::optional<double> mu;
  std::optional<double> sigma;
};

/// The momentum-aware threshold state machine. Strictly sequential:
/// observations must arrive in frame order, one owner at a time.
///
/// Per observation: the error enters the history; with a full window of W
/// errors the threshold becomes max(theta_0, mu + k*sigma), otherwise the
/// warm-up interpolation theta_0*(t/W) + theta_init*(1 - t/W) with t =
/// observations + 1. The comparison is strict (error > threshold selects;
/// ties skip). Decay on selection follows the configured DecayMode.
class ThresholdController {
 public:
  explicit ThresholdController(const SelectorConfig& cfg);

  /// Feed the next error; throws ValidationError if it is negative or
  /// non-finite (the history is not modified in that case).
  ObserveResult observe(double error);

  /// Back to the initial state (empty history, theta = init_threshold).
  void reset();

  double theta() const { return theta_; }
  bool decay_pending() const { return decay_pending_; }
  std::uint64_t observations() const { return count_; }
  const SelectorConfig& config() const { return cfg_; }

 private:
  SelectorConfig cfg_;
  std::vector<double> ring_;  // last W errors, chronological via next_
  std::size_t next_ = 0;
  std::uint64_t count_ = 0;
  double theta_ = 0.0;
  bool decay_pending_ = false;
};

}  // namespace kfsieve

/*
 * kfsieve — content-aware keyframe selection for posed RGB-D streams
 *
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#pragma once

#include <span>
#include <string>
#include <vector>

#include "kfsieve/pipeline.hpp"

namespace kfsieve {

enum class StrategyKind { Adaptive, UniformEveryN, FixedThreshold };

/// A selection strategy to run over a sequence. `config` is the full
/// selector config for Adaptive and the metric config (weights, ssim
/// parameters, degeneracy floor) for the two baselines, so all strategies
/// score frames on the same error scale.
struct StrategySpec {
  StrategyKind kind = StrategyKind::Adaptive;
  SelectorConfig config;
  int stride = 1;      // UniformEveryN
  double theta = 0.0;  // FixedThreshold; may be +inf

  static StrategySpec adaptive(const SelectorConfig& cfg);
  static StrategySpec uniform_every_n(int stride, const SelectorConfig& metric_cfg);
  static StrategySpec fixed_threshold(double theta, const SelectorConfig& metric_cfg);

  /// Stable display name: "adaptive", "uniform-3", "fixed-0.1".
  std::string name() const;
};

/// Desk-scale stand-ins for reconstruction quality: how much redundancy the
/// strategy kept out (mean skipped error) and the worst unrepresented
/// change it allowed (max error of any skipped frame vs. its keyframe).
struct StrategyProxies {
  double mean_skipped_error = 0.0;
  double max_inter_keyframe_error = 0.0;
};

struct StrategyRun {
  std::string name;
  SelectionResult result;
  StrategyProxies proxies;
};

struct ComparisonReport {
  std::vector<StrategyRun> runs;
};

/// Run one strategy over the sequence. Every strategy emits a full trace:
/// the baselines score each frame against their last selected keyframe just
/// like the adaptive pipeline, but gate by stride / fixed theta. Uniform
/// selections are stride-driven, recorded as ForcedSelect with
/// theta_effective = 0 (no gate exists for them).
SelectionResult run_strategy(std::span<const Frame> frames, const StrategySpec& strategy);

/// Run every strategy on the same frames and derive the proxies.
ComparisonReport compare(std::span<const Frame> frames,
                         const std::vector<StrategySpec>& strategies);

struct ReportMeta {
  SelectorConfig config;  // the configuration the run was launched with
  std::string input;      // human-readable input identifier (path, "synthetic", ...)
  std::string tool_version;
};

enum class ReportFormat { Json, Csv };

/// Serialize a report. JSON: stable field order, UTF-8, LF, trailing
/// newline; byte-identical for identical inputs. CSV: header
/// `strategy,frame,timestamp,e_photo,e_ssim,e_t,theta,decision`, one row
/// per frame per strategy.
std::string emit_report(const ComparisonReport& report, const ReportMeta& meta,
                        ReportFormat format);

/// Parse a JSON report back. Accepts exactly what emit_report(Json)
/// produces; throws ValidationError on malformed input.
struct ParsedReport {
  ComparisonReport report;
  ReportMeta meta;
};
ParsedReport parse_report_json(const std::string& text);

}  // namespace kfsieve

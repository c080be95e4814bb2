/*
 * kfsieve — content-aware keyframe selection for posed RGB-D streams
 *
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "kfsieve/controller.hpp"
#include "kfsieve/metrics.hpp"
#include "kfsieve/types.hpp"

namespace kfsieve {

/// One row of the per-frame diagnostic trace. Emitted for every frame,
/// including skips. mu/sigma are absent while the momentum window is
/// filling and on forced selections.
struct TraceRow {
  int frame_index = 0;
  double timestamp = 0.0;
  double e_photo = 0.0;
  double e_ssim = 0.0;
  double e_t = 0.0;
  double theta_effective = 0.0;
  std::optional<double> mu;
  std::optional<double> sigma;
  double valid_fraction = 0.0;
  Decision decision = Decision::Skip;
  int keyframe_ref = 0;  // index of the keyframe this row was compared against
};

struct SelectionResult {
  std::vector<int> keyframes;   // strictly increasing; always starts with frame 0
  std::vector<TraceRow> trace;  // one row per frame, frame order
  double kfcr = 0.0;            // 100 * (1 - |K|/n)
  SelectorConfig config;
};

/// Percentage of frames discarded. Pre: 1 <= n_selected <= n_total.
double compute_kfcr(std::uint64_t n_total, std::uint64_t n_selected);

/// Run the full selection loop over an in-memory sequence. The first frame
/// is always admitted (ForcedSelect); every later frame is scored against
/// the last keyframe and gated by the momentum controller. Scores whose
/// warp coverage is degenerate force a selection and bypass the controller
/// history. Throws on an empty sequence or a mid-stream dimension mismatch.
SelectionResult select(std::span<const Frame> frames, const SelectorConfig& cfg);

/// Pull-based variant with bounded memory: only the in-flight frame, the
/// last keyframe, and the controller state are retained. The sink receives
/// each frame's TraceRow before the next frame is pulled. Decisions are
/// identical to select() on the same sequence by construction (both run
/// this loop).
struct StreamSummary {
  std::uint64_t frames_processed = 0;
  std::vector<int> keyframes;
  double kfcr = 0.0;
  SelectorConfig config;
};

using FrameProvider = std::function<std::optional<Frame>()>;
using TraceSink = std::function<void(const TraceRow&)>;

StreamSummary select_streaming(const FrameProvider& provider, const TraceSink& sink,
                               const SelectorConfig& cfg);

}  // namespace kfsieve

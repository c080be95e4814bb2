/*
 * kfsieve — content-aware keyframe selection for posed RGB-D streams
 *
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#include "kfsieve/pipeline.hpp"

#include <string>
#include <utility>

#include "kfsieve/errors.hpp"

namespace kfsieve {

double compute_kfcr(std::uint64_t n_total, std::uint64_t n_selected) {
  if (n_total == 0) throw ValidationError("compute_kfcr: empty sequence");
  if (n_selected < 1 || n_selected > n_total) {
    throw ValidationError("compute_kfcr: selected count out of range");
  }
  return 100.0 * (1.0 - static_cast<double>(n_selected) / static_cast<double>(n_total));
}

StreamSummary select_streaming(const FrameProvider& provider, const TraceSink& sink,
                               const SelectorConfig& cfg) {
  StreamSummary summary;
  summary.config = validate_config(cfg);
  ThresholdController controller(summary.config);

  std::optional<Frame> last_kf;
  std::optional<int> previous_index;
  while (true) {
    std::optional<Frame> frame = provider();
    if (!frame) break;
    if (previous_index && frame->index() <= *previous_index) {
      throw ValidationError("select: frame indices must be strictly increasing");
    }
    previous_index = frame->index();

    TraceRow row;
    row.frame_index = frame->index();
    row.timestamp = frame->timestamp();

    if (!last_kf) {
      // Stream opener: admitted unconditionally, no comparison exists yet.
      row.decision = Decision::ForcedSelect;
      row.theta_effective = 0.0;
      row.valid_fraction = 1.0;
      row.keyframe_ref = frame->index();
    } else {
      if (!frame->intrinsics().same_dims(last_kf->intrinsics())) {
        throw ValidationError("select: frame " + std::to_string(frame->index()) +
                              " dimensions differ from the stream");
      }
      row.keyframe_ref = last_kf->index();
      const ErrorScore score = hybrid_error(*frame, *last_kf, summary.config);
      row.e_photo = score.e_photo;
      row.e_ssim = score.e_ssim;
      row.e_t = score.e_t;
      row.valid_fraction = score.valid_fraction;
      if (score.degenerate) {
        // Overlap collapsed: admit the frame to re-anchor the reference,
        // and keep the unreliable error out of the momentum statistics.
        row.decision = Decision::ForcedSelect;
        row.theta_effective = 0.0;
      } else {
        const ObserveResult obs = controller.observe(score.e_t);
        row.decision = obs.decision;
        row.theta_effective = obs.theta_effective;
        row.mu = obs.mu;
        row.sigma = obs.sigma;
      }
    }

    if (row.decision != Decision::Skip) {
      summary.keyframes.push_back(frame->index());
      last_kf = std::move(*frame);
    }
    ++summary.frames_processed;
    sink(row);
  }

  if (summary.frames_processed == 0) throw ValidationError("select: empty sequence");
  summary.kfcr = compute_kfcr(summary.frames_processed,
                              static_cast<std::uint64_t>(summary.keyframes.size()));
  return summary;
}

SelectionResult select(std::span<const Frame> frames, const SelectorConfig& cfg) {
  if (frames.empty()) throw ValidationError("select: empty sequence");

  SelectionResult out;
  std::size_t pos = 0;
  const FrameProvider provider = [&frames, &pos]() -> std::optional<Frame> {
    if (pos == frames.size()) return std::nullopt;
    return frames[pos++];
  };
  const TraceSink sink = [&out](const TraceRow& row) { out.trace.push_back(row); };

  StreamSummary summary = select_streaming(provider, sink, cfg);
  out.keyframes = std::move(summary.keyframes);
  out.kfcr = summary.kfcr;
  out.config = summary.config;
  return out;
}

}  // namespace kfsieve

/*
 * kfsieve — content-aware keyframe selection for posed RGB-D streams
 *
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#pragma once

#include <filesystem>
#include <string>

namespace kfsieve {

/// Local-statistics parameters for the structural dissimilarity term.
/// Constants assume intensities with dynamic range 1.0.
struct SsimParams {
  int window = 11;      // odd, >= 3
  double sigma = 1.5;   // Gaussian std in pixels
  double c1 = 1e-4;     // (0.01)^2
  double c2 = 9e-4;     // (0.03)^2
};

/// How the post-selection threshold decay is applied.
///
/// Literal: theta <- gamma*theta right after a selection, exactly as the
/// selection loop writes it. The adaptive/warm-up recomputation overwrites
/// it on the next observation, so it never changes a later decision; kept
/// for ablations.
///
/// Multiplier (default): the decay multiplies the freshly computed
/// threshold for exactly the one comparison that follows a selection — a
/// one-frame refractory window on the gate itself.
enum class DecayMode { Literal, Multiplier };

std::string to_string(DecayMode mode);
DecayMode decay_mode_from_string(const std::string& name);

/// All selector knobs. Flat on purpose: the on-disk config format mirrors
/// these field names one-to-one (ssim_* for the nested block).
struct SelectorConfig {
  double alpha = 0.7;            // photometric weight
  double beta = 0.3;             // structural weight
  int window_size = 5;           // W, momentum window length
  double sensitivity = 1.5;      // k, control-limit width
  double decay = 0.95;           // gamma in (0,1]; 1 disables decay
  double base_threshold = 0.05;  // theta_0, floor of the adaptive gate
  double init_threshold = 0.20;  // theta_init, warm-up start value
  DecayMode decay_mode = DecayMode::Multiplier;
  SsimParams ssim;
  double min_valid_fraction = 0.05;  // warp coverage below this is degenerate
};

/// Stock configuration; passes validate_config.
SelectorConfig default_config();

/// Returns cfg unchanged iff every invariant holds; otherwise throws
/// ValidationError naming the first violated field.
SelectorConfig validate_config(const SelectorConfig& cfg);

/// Parse a flat `key = value` document (# comments) and apply it on top
/// of `base`. Unknown keys are an error. The result is validated.
SelectorConfig load_config_file(const std::filesystem::path& path,
                                const SelectorConfig& base = default_config());

/// Same, but from an in-memory document (used by tests and the CLI).
SelectorConfig parse_config_text(const std::string& text,
                                 const SelectorConfig& base = default_config());

}  // namespace kfsieve

/*
 * kfsieve — content-aware keyframe selection for posed RGB-D streams
 *
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#pragma once

#include "kfsieve/config.hpp"
#include "kfsieve/types.hpp"
#include "kfsieve/warp.hpp"

namespace kfsieve {

/// Mean absolute intensity difference over mask-true pixels, averaging the
/// three channels per pixel. Deterministic row-major summation.
/// Throws ValidationError on dimension mismatch or an empty mask.
double photometric_error(const ImageRgb& current, const ImageRgb& warped, const Mask& mask);

/// Structural dissimilarity 1 - mean SSIM over mask-true window centers.
/// Both images are reduced to luminance (0.299 R + 0.587 G + 0.114 B);
/// local statistics use a Gaussian window whose weights are renormalized
/// over the in-bounds, mask-true pixels of each window, so pixels outside
/// the mask never contribute (the mask behaves exactly like the image
/// border). Result is clamped to [0,2].
/// Throws ValidationError on dimension mismatch or an empty mask.
double ssim_error(const ImageRgb& current, const ImageRgb& warped, const Mask& mask,
                  const SsimParams& params);

/// Weighted fusion of the two error terms.
double combine(double e_photo, double e_ssim, double alpha, double beta);

/// Full comparison of a frame against the current keyframe: warp, then the
/// photometric and structural terms over the warp's validity mask, then the
/// weighted combination. valid_fraction records the mask coverage; the
/// score is flagged degenerate when coverage < cfg.min_valid_fraction (the
/// error fields are still filled whenever the mask is non-empty, and are
/// zero when it is empty).
ErrorScore hybrid_error(const Frame& current, const Frame& keyframe,
                        const SelectorConfig& cfg);

}  // namespace kfsieve

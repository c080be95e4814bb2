/*
 * kfsieve — content-aware keyframe selection for posed RGB-D streams
 *
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#pragma once

#include "kfsieve/types.hpp"

namespace kfsieve {

/// A keyframe reprojected into another camera view.
/// Invariants: warped is 0 outside the mask and in [0,1] on it; zbuffer is
/// finite and positive exactly where the mask is true (+inf elsewhere).
struct WarpResult {
  ImageRgb warped;   // \hat I_k
  Mask mask;         // M: 1 where at least one source pixel splatted
  DepthMap zbuffer;  // winning splat depth in the target camera, meters
};

/// Forward-warp the keyframe into the view given by target_pose /
/// target_intrinsics. Every source pixel with valid depth is back-projected
/// with the keyframe intrinsics, moved through the relative pose
/// (T_wc_target)^-1 * T_wc_keyframe, projected with the target intrinsics,
/// and splatted onto the nearest integer pixel. Collisions keep the smaller
/// depth; exact depth ties keep the smaller source linear index. Points
/// with z <= 0 in the target camera are discarded.
///
/// Throws ValidationError if target dimensions differ from the keyframe's.
WarpResult warp_frame(const Frame& keyframe, const Pose& target_pose,
                      const Intrinsics& target_intrinsics);

/// Fraction of mask pixels set, in [0,1].
double mask_coverage(const WarpResult& result);

}  // namespace kfsieve

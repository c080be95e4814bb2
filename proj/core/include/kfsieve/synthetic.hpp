/*
 * kfsieve — content-aware keyframe selection for posed RGB-D streams
 *
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "kfsieve/types.hpp"

namespace kfsieve {

enum class Texture { Checkerboard, GradientNoise };

std::string to_string(Texture t);
Texture texture_from_string(const std::string& name);

/// Piecewise-constant camera velocity, applied as a body-frame increment
/// per inter-frame step.
struct MotionSegment {
  int frames = 0;                                         // number of steps
  Eigen::Vector3d linear_velocity = Eigen::Vector3d::Zero();   // m/frame
  Eigen::Vector3d angular_velocity = Eigen::Vector3d::Zero();  // rad/frame, axis-angle
};

/// Recipe for a synthetic sequence: a textured fronto-parallel plane at
/// z = plane_depth in the world frame, observed by a pinhole camera that
/// starts at the identity and integrates the motion profile. Steps beyond
/// the profile are static. Depth maps and poses are analytic; identical
/// spec => bit-identical frames.
struct SyntheticSpec {
  int width = 64;
  int height = 64;
  int frame_count = 1;
  Texture texture = Texture::GradientNoise;
  double plane_depth = 2.0;       // meters
  double focal_length = 0.0;      // pixels; 0 = auto (width)
  std::vector<MotionSegment> motion;
  std::uint64_t seed = 0;
};

/// Validated camera intrinsics the generator will use for `spec`.
Intrinsics synthetic_intrinsics(const SyntheticSpec& spec);

/// Exact pose of frame `index` (integrated motion profile).
Pose synthetic_pose(const SyntheticSpec& spec, int index);

/// Render a single frame. Pure function of (spec, index).
Frame synthetic_frame(const SyntheticSpec& spec, int index);

/// Render the whole sequence.
std::vector<Frame> generate_synthetic(const SyntheticSpec& spec);

}  // namespace kfsieve

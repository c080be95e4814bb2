/*
 * kfsieve — content-aware keyframe selection for posed RGB-D streams
 *
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#pragma once

#include <cmath>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "kfsieve/image.hpp"

namespace kfsieve {

/// Pinhole camera parameters. No distortion model.
class Intrinsics {
 public:
  Intrinsics(double fx, double fy, double cx, double cy, int width, int height);

  double fx() const { return fx_; }
  double fy() const { return fy_; }
  double cx() const { return cx_; }
  double cy() const { return cy_; }
  int width() const { return width_; }
  int height() const { return height_; }

  bool same_dims(const Intrinsics& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

 private:
  double fx_, fy_, cx_, cy_;
  int width_, height_;
};

/// Rigid camera pose, camera-to-world convention (T_wc): `apply` maps
/// camera-frame points into the world frame. Construction rejects
/// non-orthonormal or reflected rotations (tolerance 1e-6).
class Pose {
 public:
  Pose();  // identity
  Pose(const Eigen::Matrix3d& rotation, const Eigen::Vector3d& translation);

  static Pose identity() { return Pose(); }

  const Eigen::Matrix3d& rotation() const { return rotation_; }
  const Eigen::Vector3d& translation() const { return translation_; }

  Pose inverse() const;
  /// Composition: (a.compose(b)).apply(p) == a.apply(b.apply(p)).
  Pose compose(const Pose& rhs) const;
  Eigen::Vector3d apply(const Eigen::Vector3d& p) const {
    return rotation_ * p + translation_;
  }

 private:
  Eigen::Matrix3d rotation_;
  Eigen::Vector3d translation_;
};

/// One timestamped RGB-D observation with pose and intrinsics. Immutable;
/// pixel buffers are shared between copies. Construction enforces that
/// image dimensions match the intrinsics, rgb lies in [0,1], and depth
/// holds no negative finite values (0 / non-finite mark invalid pixels).
class Frame {
 public:
  Frame(int index, double timestamp, ImageRgb rgb, DepthMap depth, Pose pose,
        Intrinsics intrinsics);

  int index() const { return index_; }
  double timestamp() const { return timestamp_; }
  const ImageRgb& rgb() const { return rgb_; }
  const DepthMap& depth() const { return depth_; }
  const Pose& pose() const { return pose_; }
  const Intrinsics& intrinsics() const { return intrinsics_; }

 private:
  int index_;
  double timestamp_;
  ImageRgb rgb_;
  DepthMap depth_;
  Pose pose_;
  Intrinsics intrinsics_;
};

inline bool depth_valid(float d) {
  return std::isfinite(d) && d > 0.0f;
}

/// Error triple for one frame-vs-keyframe comparison, plus the warp
/// coverage that produced it. `degenerate` is set when coverage fell
/// below the configured minimum (or the mask was empty); the pipeline
/// decides what to do with such scores.
struct ErrorScore {
  double e_photo = 0.0;        // mean absolute intensity difference, [0,1]
  double e_ssim = 0.0;         // structural dissimilarity, [0,2]
  double e_t = 0.0;            // alpha*e_photo + beta*e_ssim
  double valid_fraction = 0.0; // |M| / (width*height)
  bool degenerate = false;
};

}  // namespace kfsieve

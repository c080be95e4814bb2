/*
 * kfsieve — content-aware keyframe selection for posed RGB-D streams
 *
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#include "kfsieve/types.hpp"

#include <cmath>
#include <string>

#include "kfsieve/errors.hpp"

namespace kfsieve {

namespace {
constexpr double kRotationTolerance = 1e-6;
}

Intrinsics::Intrinsics(double fx, double fy, double cx, double cy, int width, int height)
    : fx_(fx), fy_(fy), cx_(cx), cy_(cy), width_(width), height_(height) {
  if (!(std::isfinite(fx) && fx > 0.0)) throw ValidationError("intrinsics: fx must be > 0");
  if (!(std::isfinite(fy) && fy > 0.0)) throw ValidationError("intrinsics: fy must be > 0");
  if (width < 2) throw ValidationError("intrinsics: width must be >= 2");
  if (height < 2) throw ValidationError("intrinsics: height must be >= 2");
  if (!(std::isfinite(cx) && cx >= 0.0 && cx < width)) {
    throw ValidationError("intrinsics: cx must lie in [0, width)");
  }
  if (!(std::isfinite(cy) && cy >= 0.0 && cy < height)) {
    throw ValidationError("intrinsics: cy must lie in [0, height)");
  }
}

Pose::Pose() : rotation_(Eigen::Matrix3d::Identity()), translation_(Eigen::Vector3d::Zero()) {}

Pose::Pose(const Eigen::Matrix3d& rotation, const Eigen::Vector3d& translation)
    : rotation_(rotation), translation_(translation) {
  if (!rotation.allFinite() || !translation.allFinite()) {
    throw ValidationError("pose: entries must be finite");
  }
  const double orth = (rotation.transpose() * rotation - Eigen::Matrix3d::Identity())
                          .cwiseAbs()
                          .maxCoeff();
  if (!(orth <= kRotationTolerance)) {
    throw ValidationError("pose: rotation is not orthonormal");
  }
  if (!(std::abs(rotation.determinant() - 1.0) <= kRotationTolerance)) {
    throw ValidationError("pose: rotation determinant must be +1");
  }
}

Pose Pose::inverse() const {
  const Eigen::Matrix3d rt = rotation_.transpose();
  Pose out;
  out.rotation_ = rt;
  out.translation_ = -(rt * translation_);
  return out;
}

Pose Pose::compose(const Pose& rhs) const {
  Pose out;
  out.rotation_ = rotation_ * rhs.rotation_;
  out.translation_ = rotation_ * rhs.translation_ + translation_;
  return out;
}

Frame::Frame(int index, double timestamp, ImageRgb rgb, DepthMap depth, Pose pose,
             Intrinsics intrinsics)
    : index_(index),
      timestamp_(timestamp),
      rgb_(std::move(rgb)),
      depth_(std::move(depth)),
      pose_(pose),
      intrinsics_(intrinsics) {
  if (index < 0) throw ValidationError("frame: index must be >= 0");
  if (!std::isfinite(timestamp)) throw ValidationError("frame: timestamp must be finite");
  if (rgb_.width() != intrinsics_.width() || rgb_.height() != intrinsics_.height()) {
    throw ValidationError("frame: rgb dimensions disagree with intrinsics");
  }
  if (depth_.width() != intrinsics_.width() || depth_.height() != intrinsics_.height()) {
    throw ValidationError("frame: depth dimensions disagree with intrinsics");
  }
  for (float v : rgb_.samples()) {
    if (!(v >= 0.0f && v <= 1.0f)) {
      throw ValidationError("frame: rgb values must lie in [0,1]");
    }
  }
  for (float d : depth_.samples()) {
    if (std::isfinite(d) && d < 0.0f) {
      throw ValidationError("frame: finite depth values must be positive (0 marks invalid)");
    }
  }
}

}  // namespace kfsieve

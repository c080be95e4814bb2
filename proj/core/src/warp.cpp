/*
 * kfsieve — content-aware keyframe selection for posed RGB-D streams
 *
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#include "kfsieve/warp.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "kfsieve/errors.hpp"

namespace kfsieve {

WarpResult warp_frame(const Frame& keyframe, const Pose& target_pose,
                      const Intrinsics& target_intrinsics) {
  const Intrinsics& src = keyframe.intrinsics();
  if (!src.same_dims(target_intrinsics)) {
    throw ValidationError("warp_frame: target dimensions differ from keyframe");
  }

  const int width = src.width();
  const int height = src.height();
  const std::size_t n = static_cast<std::size_t>(width) * height;

  std::vector<float> warped(n * 3, 0.0f);
  std::vector<std::uint8_t> mask(n, 0);
  std::vector<double> zbuf(n, std::numeric_limits<double>::infinity());

  // Relative transform: keyframe camera -> target camera.
  const Pose rel = target_pose.inverse().compose(keyframe.pose());
  const Eigen::Matrix3d& R = rel.rotation();
  const Eigen::Vector3d& t = rel.translation();

  const double inv_fx = 1.0 / src.fx();
  const double inv_fy = 1.0 / src.fy();

  const auto depth = keyframe.depth().samples();
  const auto rgb = keyframe.rgb().samples();

  // Scan order is the tie-breaker: with strict < replacement, the smaller
  // source linear index wins an exact depth tie.
  for (int v = 0; v < height; ++v) {
    for (int u = 0; u < width; ++u) {
      const std::size_t src_idx = static_cast<std::size_t>(v) * width + u;
      const float d = depth[src_idx];
      if (!depth_valid(d)) continue;

      const double dz = static_cast<double>(d);
      const Eigen::Vector3d point_src((u - src.cx()) * inv_fx * dz,
                                      (v - src.cy()) * inv_fy * dz, dz);
      const Eigen::Vector3d point_tgt = R * point_src + t;
      if (!(point_tgt.z() > 0.0)) continue;

      const double uu =
          target_intrinsics.fx() * (point_tgt.x() / point_tgt.z()) + target_intrinsics.cx();
      const double vv =
          target_intrinsics.fy() * (point_tgt.y() / point_tgt.z()) + target_intrinsics.cy();
      const long ut = std::lround(uu);
      const long vt = std::lround(vv);
      if (ut < 0 || ut >= width || vt < 0 || vt >= height) continue;

      const std::size_t tgt_idx = static_cast<std::size_t>(vt) * width + ut;
      if (point_tgt.z() < zbuf[tgt_idx]) {
        zbuf[tgt_idx] = point_tgt.z();
        mask[tgt_idx] = 1;
        warped[tgt_idx * 3 + 0] = rgb[src_idx * 3 + 0];
        warped[tgt_idx * 3 + 1] = rgb[src_idx * 3 + 1];
        warped[tgt_idx * 3 + 2] = rgb[src_idx * 3 + 2];
      }
    }
  }

  std::vector<float> zbuf_out(n);
  for (std::size_t i = 0; i < n; ++i) {
    zbuf_out[i] = static_cast<float>(zbuf[i]);
  }

  return WarpResult{ImageRgb(width, height, std::move(warped)),
                    Mask(width, height, std::move(mask)),
                    DepthMap(width, height, std::move(zbuf_out))};
}

double mask_coverage(const WarpResult& result) {
  const auto m = result.mask.samples();
  std::size_t count = 0;
  for (std::uint8_t bit : m) count += bit ? 1 : 0;
  return static_cast<double>(count) / static_cast<double>(m.size());
}

}  // namespace kfsieve

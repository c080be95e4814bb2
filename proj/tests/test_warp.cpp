/*
 * kfsieve — content-aware keyframe selection for posed RGB-D streams
 *
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#include <doctest.h>

#include <Eigen/Geometry>
#include <cmath>
#include <random>
#include <vector>

#include "kfsieve/errors.hpp"
#include "kfsieve/warp.hpp"
#include "support/oracles.hpp"
#include "support/test_util.hpp"

using namespace kfsieve;

namespace {

// Distinct per-pixel colors so splat provenance is visible in the output.
ImageRgb indexed_image(int width, int height) {
  std::vector<float> samples(static_cast<std::size_t>(width) * height * 3);
  const float denom = static_cast<float>(width * height);
  for (int i = 0; i < width * height; ++i) {
    samples[3 * i + 0] = i / denom;
    samples[3 * i + 1] = (i + 0.25f) / denom;
    samples[3 * i + 2] = (i + 0.5f) / denom;
  }
  return ImageRgb(width, height, std::move(samples));
}

}  // namespace

TEST_CASE("identity relative pose reproduces the keyframe bit for bit") {
  const auto intr = testutil::centered_intrinsics(16, 12, 40.0);
  std::mt19937_64 rng(101);
  const auto rgb = testutil::random_image(rng, 16, 12);
  const auto frame = testutil::simple_frame(0, rgb, testutil::constant_depth(16, 12, 2.5f),
                                            Pose::identity(), intr);

  const WarpResult result = warp_frame(frame, Pose::identity(), intr);

  REQUIRE(result.warped.same_dims(rgb));
  for (std::size_t i = 0; i < rgb.samples().size(); ++i) {
    CHECK(result.warped.samples()[i] == rgb.samples()[i]);
  }
  for (std::uint8_t m : result.mask.samples()) CHECK(m == 1);
  for (float z : result.zbuffer.samples()) CHECK(z == 2.5f);
  CHECK(mask_coverage(result) == 1.0);
}

TEST_CASE("identity warp is exact for a shared nonzero pose too") {
  // Same camera pose on both sides: T_rel collapses to identity no matter
  // where the rig sits in the world.
  const auto intr = testutil::centered_intrinsics(8, 8, 20.0);
  const Eigen::Matrix3d r =
      Eigen::AngleAxisd(0.7, Eigen::Vector3d(1.0, -2.0, 0.5).normalized()).toRotationMatrix();
  const Pose pose(r, Eigen::Vector3d(3.0, -1.0, 2.0));
  std::mt19937_64 rng(7);
  const auto frame = testutil::simple_frame(0, testutil::random_image(rng, 8, 8),
                                            testutil::constant_depth(8, 8, 1.5f), pose, intr);

  const WarpResult result = warp_frame(frame, pose, intr);
  for (std::size_t i = 0; i < frame.rgb().samples().size(); ++i) {
    CHECK(result.warped.samples()[i] == frame.rgb().samples()[i]);
  }
  CHECK(mask_coverage(result) == 1.0);
}

TEST_CASE("lateral translation shifts a pixel by fx * tx / z") {
  // 64x64, fx=fy=100, principal point at (32,32). The source pixel (32,32)
  // sits on the optical axis at depth 2.0; moving the target camera +0.2 m
  // along x puts the point at camera x=-0.2, so u = 100*(-0.2/2.0)+32 = 22.
  const Intrinsics intr(100.0, 100.0, 32.0, 32.0, 64, 64);
  const auto rgb = indexed_image(64, 64);
  const auto frame = testutil::simple_frame(0, rgb, testutil::constant_depth(64, 64, 2.0f),
                                            Pose::identity(), intr);
  const Pose target(Eigen::Matrix3d::Identity(), Eigen::Vector3d(0.2, 0.0, 0.0));

  const WarpResult result = warp_frame(frame, target, intr);

  const int x = 22, y = 32;
  REQUIRE(result.mask.at(x, y) == 1);
  CHECK(result.warped.at(x, y, 0) == rgb.at(32, 32, 0));
  CHECK(result.warped.at(x, y, 1) == rgb.at(32, 32, 1));
  CHECK(result.warped.at(x, y, 2) == rgb.at(32, 32, 2));
  CHECK(result.zbuffer.at(x, y) == doctest::Approx(2.0).epsilon(1e-12));

  // The whole visible strip shifts: source (42,10) lands at (32,10).
  REQUIRE(result.mask.at(32, 10) == 1);
  CHECK(result.warped.at(32, 10, 0) == rgb.at(42, 10, 0));
}

TEST_CASE("z-buffer keeps the nearest source point") {
  // A 2x2 source whose four pixels all project to target (0,0): with
  // fx=fy=10 and cx=cy=0.5 the normalized coordinates are +/-0.05, and the
  // target camera (fx=fy=1, cx=cy=0.4) rounds all of them to zero. The
  // projected position is depth-independent, so depth only decides the
  // winner.
  const Intrinsics src(10.0, 10.0, 0.5, 0.5, 2, 2);
  const Intrinsics tgt(1.0, 1.0, 0.4, 0.4, 2, 2);
  const auto rgb = indexed_image(2, 2);

  SUBCASE("strictly smaller depth wins regardless of scan order") {
    // Pixel (1,0) (linear index 1) is nearest.
    const DepthMap depth(2, 2, std::vector<float>{3.0f, 1.0f, 2.0f, 4.0f});
    const auto frame = testutil::simple_frame(0, rgb, depth, Pose::identity(), src);
    const WarpResult result = warp_frame(frame, Pose::identity(), tgt);

    REQUIRE(result.mask.at(0, 0) == 1);
    CHECK(result.warped.at(0, 0, 0) == rgb.at(1, 0, 0));
    CHECK(result.zbuffer.at(0, 0) == 1.0f);
    // Only one target pixel received anything.
    CHECK(mask_coverage(result) == 0.25);
  }

  SUBCASE("exact depth tie goes to the smaller source index") {
    const DepthMap depth(2, 2, std::vector<float>{2.0f, 2.0f, 2.0f, 2.0f});
    const auto frame = testutil::simple_frame(0, rgb, depth, Pose::identity(), src);
    const WarpResult result = warp_frame(frame, Pose::identity(), tgt);

    REQUIRE(result.mask.at(0, 0) == 1);
    CHECK(result.warped.at(0, 0, 0) == rgb.at(0, 0, 0));
  }
}

TEST_CASE("points behind the target camera contribute nothing") {
  const auto intr = testutil::centered_intrinsics(8, 8, 20.0);
  const auto frame = testutil::simple_frame(0, testutil::constant_image(8, 8, 0.5f),
                                            testutil::constant_depth(8, 8, 2.0f),
                                            Pose::identity(), intr);
  // Target camera 5 m ahead: the plane at z=2 ends up at z=-3 behind it.
  const Pose target(Eigen::Matrix3d::Identity(), Eigen::Vector3d(0.0, 0.0, 5.0));

  const WarpResult result = warp_frame(frame, target, intr);
  CHECK(mask_coverage(result) == 0.0);
  for (std::uint8_t m : result.mask.samples()) CHECK(m == 0);
  for (float c : result.warped.samples()) CHECK(c == 0.0f);
}

TEST_CASE("invalid depth pixels are skipped") {
  const auto intr = testutil::centered_intrinsics(4, 4, 10.0);
  std::vector<float> depth(16, 2.0f);
  depth[0] = 0.0f;                                          // sentinel invalid
  depth[5] = std::numeric_limits<float>::quiet_NaN();       // sensor dropout
  depth[10] = std::numeric_limits<float>::infinity();
  const auto frame =
      testutil::simple_frame(0, testutil::constant_image(4, 4, 0.5f),
                             DepthMap(4, 4, std::move(depth)), Pose::identity(), intr);

  const WarpResult result = warp_frame(frame, Pose::identity(), intr);
  // Identity warp: pixels map to themselves, so the mask holes sit exactly
  // at the invalid source pixels.
  CHECK(result.mask.at(0, 0) == 0);
  CHECK(result.mask.at(1, 1) == 0);
  CHECK(result.mask.at(2, 2) == 0);
  CHECK(result.warped.at(0, 0, 0) == 0.0f);
  CHECK(mask_coverage(result) == doctest::Approx(13.0 / 16.0).epsilon(1e-12));
}

TEST_CASE("coverage of an exactly half-valid frame is one half") {
  const auto intr = testutil::centered_intrinsics(4, 4, 10.0);
  std::vector<float> depth(16, 0.0f);
  for (int i = 0; i < 8; ++i) depth[i] = 2.0f;  // top two rows valid
  const auto frame =
      testutil::simple_frame(0, testutil::constant_image(4, 4, 0.5f),
                             DepthMap(4, 4, std::move(depth)), Pose::identity(), intr);
  CHECK(mask_coverage(warp_frame(frame, Pose::identity(), intr)) == 0.5);
}

TEST_CASE("warp agrees with a scalar reference projector") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<float> depth_dist(0.5f, 4.0f);

  for (int trial = 0; trial < 30; ++trial) {
    const int width = 4 + static_cast<int>(rng() % 13);   // 4..16
    const int height = 4 + static_cast<int>(rng() % 13);
    const auto intr = testutil::centered_intrinsics(width, height, 0.8 * width);

    std::vector<float> depth(static_cast<std::size_t>(width) * height);
    for (float& d : depth) d = depth_dist(rng);
    if (trial % 3 == 0) depth[rng() % depth.size()] = 0.0f;  // occasional dropout

    const Eigen::Vector3d axis =
        Eigen::Vector3d(unit(rng), unit(rng), unit(rng)).normalized();
    const Pose kf_pose(Eigen::AngleAxisd(0.3 * unit(rng), axis).toRotationMatrix(),
                       Eigen::Vector3d(unit(rng), unit(rng), unit(rng)) * 0.2);
    const Eigen::Vector3d axis2 =
        Eigen::Vector3d(unit(rng), unit(rng), unit(rng)).normalized();
    const Pose tgt_pose(Eigen::AngleAxisd(0.3 * unit(rng), axis2).toRotationMatrix(),
                        Eigen::Vector3d(unit(rng), unit(rng), unit(rng)) * 0.2);

    const auto frame = testutil::simple_frame(0, testutil::random_image(rng, width, height),
                                              DepthMap(width, height, std::move(depth)),
                                              kf_pose, intr);

    const WarpResult got = warp_frame(frame, tgt_pose, intr);
    const oracle::WarpReference want = oracle::reference_warp(frame, tgt_pose, intr);

    for (std::size_t i = 0; i < want.mask.size(); ++i) {
      REQUIRE(got.mask.samples()[i] == want.mask[i]);
      if (want.mask[i]) {
        // Same winning source pixel implies bitwise-equal colors.
        REQUIRE(got.warped.samples()[i * 3 + 0] == want.color[i * 3 + 0]);
        REQUIRE(got.warped.samples()[i * 3 + 1] == want.color[i * 3 + 1]);
        REQUIRE(got.warped.samples()[i * 3 + 2] == want.color[i * 3 + 2]);
        // The stored z-buffer is the float rounding of the winning depth.
        REQUIRE(got.zbuffer.samples()[i] ==
                doctest::Approx(want.depth[i]).epsilon(1e-6));
        REQUIRE(got.zbuffer.samples()[i] > 0.0f);
      } else {
        REQUIRE(got.warped.samples()[i * 3] == 0.0f);
      }
    }
  }
}

TEST_CASE("dimension mismatch is rejected") {
  const auto intr = testutil::centered_intrinsics(8, 8, 20.0);
  const auto frame = testutil::simple_frame(0, testutil::constant_image(8, 8, 0.5f),
                                            testutil::constant_depth(8, 8, 2.0f),
                                            Pose::identity(), intr);
  const auto other = testutil::centered_intrinsics(8, 6, 20.0);
  CHECK_THROWS_AS(warp_frame(frame, Pose::identity(), other), ValidationError);
}

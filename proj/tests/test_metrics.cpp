/*
 * kfsieve — content-aware keyframe selection for posed RGB-D streams
 *
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "kfsieve/errors.hpp"
#include "kfsieve/metrics.hpp"
#include "kfsieve/synthetic.hpp"
#include "support/oracles.hpp"
#include "support/test_util.hpp"

using namespace kfsieve;

namespace {

ImageRgb replicated(int width, int height, std::vector<float> gray) {
  std::vector<float> samples(gray.size() * 3);
  for (std::size_t i = 0; i < gray.size(); ++i) {
    samples[3 * i] = samples[3 * i + 1] = samples[3 * i + 2] = gray[i];
  }
  return ImageRgb(width, height, std::move(samples));
}

}  // namespace

TEST_CASE("photometric error of identical images is zero") {
  std::mt19937_64 rng(5);
  const auto img = testutil::random_image(rng, 9, 7);
  const auto mask = testutil::random_mask(rng, 9, 7, 0.6);
  CHECK(photometric_error(img, img, mask) == 0.0);
}

TEST_CASE("photometric error hand arithmetic") {
  const auto current = testutil::constant_image(2, 2, 0.5f);
  const auto warped = replicated(2, 2, {0.1f, 0.9f, 0.5f, 0.5f});

  SUBCASE("full mask averages all four pixels") {
    const double e = photometric_error(current, warped, testutil::full_mask(2, 2));
    CHECK(e == doctest::Approx(0.2).epsilon(1e-6));
  }

  SUBCASE("mask restricted to the differing pixels") {
    const Mask mask(2, 2, std::vector<std::uint8_t>{1, 1, 0, 0});
    const double e = photometric_error(current, warped, mask);
    CHECK(e == doctest::Approx(0.4).epsilon(1e-6));
  }

  SUBCASE("empty mask is an error") {
    const Mask empty(2, 2, std::vector<std::uint8_t>{0, 0, 0, 0});
    CHECK_THROWS_AS(photometric_error(current, warped, empty), ValidationError);
  }
}

TEST_CASE("photometric error matches the naive oracle on random data") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const int w = 3 + static_cast<int>(rng() % 14);
    const int h = 3 + static_cast<int>(rng() % 14);
    const auto a = testutil::random_image(rng, w, h);
    const auto b = testutil::random_image(rng, w, h);
    const auto mask = testutil::random_mask(rng, w, h, 0.7);
    const double got = photometric_error(a, b, mask);
    CHECK(got == doctest::Approx(oracle::photometric(a, b, mask)).epsilon(1e-12));
    CHECK(got >= 0.0);
    CHECK(got <= 1.0);
  }
}

TEST_CASE("structural dissimilarity of identical images is zero") {
  std::mt19937_64 rng(17);
  const auto img = testutil::random_image(rng, 16, 16);
  const auto mask = testutil::random_mask(rng, 16, 16, 0.8);
  CHECK(ssim_error(img, img, mask, SsimParams{}) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("constant images reduce to the luminance-only closed form") {
  // With zero variance everywhere the structure term is exactly 1 and
  // S = (2ab + c1) / (a^2 + b^2 + c1).
  const auto a = testutil::constant_image(16, 16, 0.2f);
  const auto b = testutil::constant_image(16, 16, 0.8f);
  const SsimParams params;
  const double s = (2.0 * 0.2 * 0.8 + params.c1) / (0.2 * 0.2 + 0.8 * 0.8 + params.c1);
  const double e = ssim_error(a, b, testutil::full_mask(16, 16), params);
  CHECK(e == doctest::Approx(1.0 - s).epsilon(1e-4));
  CHECK(e == doctest::Approx(0.52934).epsilon(1e-3));
}

TEST_CASE("windowed ssim matches the quadruple-loop oracle") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 25; ++trial) {
    const int w = 5 + static_cast<int>(rng() % 28);  // 5..32
    const int h = 5 + static_cast<int>(rng() % 28);
    const auto cur = testutil::random_image(rng, w, h);
    const auto wrp = testutil::random_image(rng, w, h);
    const auto mask = (trial % 2 == 0) ? testutil::full_mask(w, h)
                                       : testutil::random_mask(rng, w, h, 0.75);
    SsimParams params;
    params.window = (trial % 3 == 0) ? 7 : 11;
    params.sigma = 1.0 + 0.1 * (trial % 10);

    const double got = ssim_error(cur, wrp, mask, params);
    const double want = oracle::ssim_dissimilarity(cur, wrp, mask, params);
    CHECK(got == doctest::Approx(want).epsilon(1e-6));
    CHECK(got >= 0.0);
    CHECK(got <= 2.0);
  }
}

TEST_CASE("pixels outside the mask cannot influence either metric") {
  std::mt19937_64 rng(7);
  const int w = 12, h = 12;
  const auto cur = testutil::random_image(rng, w, h);
  const auto wrp = testutil::random_image(rng, w, h);
  const auto mask = testutil::random_mask(rng, w, h, 0.5);

  // Clobber every mask-false pixel of the warped image.
  std::vector<float> tampered(wrp.samples().begin(), wrp.samples().end());
  for (int i = 0; i < w * h; ++i) {
    if (!mask.samples()[i]) {
      tampered[3 * i] = 1.0f;
      tampered[3 * i + 1] = 0.0f;
      tampered[3 * i + 2] = 1.0f;
    }
  }
  const ImageRgb wrp2(w, h, std::move(tampered));

  CHECK(photometric_error(cur, wrp, mask) == photometric_error(cur, wrp2, mask));
  CHECK(ssim_error(cur, wrp, mask, SsimParams{}) ==
        ssim_error(cur, wrp2, mask, SsimParams{}));
}

TEST_CASE("ssim parameter validation") {
  const auto img = testutil::constant_image(8, 8, 0.5f);
  const auto mask = testutil::full_mask(8, 8);
  SsimParams params;
  params.window = 4;
  CHECK_THROWS_AS(ssim_error(img, img, mask, params), ValidationError);
  const Mask empty(8, 8, std::vector<std::uint8_t>(64, 0));
  CHECK_THROWS_AS(ssim_error(img, img, empty, SsimParams{}), ValidationError);
}

TEST_CASE("combine is the exact weighted sum") {
  CHECK(combine(0.2, 0.5, 0.7, 0.3) == doctest::Approx(0.29).epsilon(1e-12));
  CHECK(combine(0.0, 0.0, 0.7, 0.3) == 0.0);
  CHECK(combine(0.37, 1.22, 1.0, 0.0) == 0.37);
  CHECK_THROWS_AS(combine(-0.1, 0.0, 0.7, 0.3), ValidationError);
  CHECK_THROWS_AS(combine(std::numeric_limits<double>::quiet_NaN(), 0.0, 0.7, 0.3),
                  ValidationError);
}

TEST_CASE("hybrid error of a frame against itself is zero with full coverage") {
  std::mt19937_64 rng(41);
  const auto intr = testutil::centered_intrinsics(24, 24, 30.0);
  const auto frame = testutil::simple_frame(0, testutil::random_image(rng, 24, 24),
                                            testutil::constant_depth(24, 24, 2.0f),
                                            Pose::identity(), intr);
  const ErrorScore score = hybrid_error(frame, frame, default_config());
  CHECK(score.e_photo == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(score.e_ssim == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(score.e_t == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(score.valid_fraction == 1.0);
  CHECK_FALSE(score.degenerate);
}

TEST_CASE("all-invalid keyframe depth degenerates the score") {
  const auto intr = testutil::centered_intrinsics(8, 8, 20.0);
  const auto current = testutil::simple_frame(1, testutil::constant_image(8, 8, 0.5f),
                                              testutil::constant_depth(8, 8, 2.0f),
                                              Pose::identity(), intr);
  const auto keyframe = testutil::simple_frame(0, testutil::constant_image(8, 8, 0.5f),
                                               testutil::constant_depth(8, 8, 0.0f),
                                               Pose::identity(), intr);
  const ErrorScore score = hybrid_error(current, keyframe, default_config());
  CHECK(score.degenerate);
  CHECK(score.valid_fraction == 0.0);
  CHECK(score.e_t == 0.0);
}

TEST_CASE("sparse but nonzero coverage is flagged against the configured floor") {
  // One valid depth pixel out of 64 -> coverage ~1.6%, under the 5% floor.
  const auto intr = testutil::centered_intrinsics(8, 8, 20.0);
  std::vector<float> depth(64, 0.0f);
  depth[27] = 2.0f;
  std::mt19937_64 rng(3);
  const auto rgb = testutil::random_image(rng, 8, 8);
  const auto keyframe =
      testutil::simple_frame(0, rgb, DepthMap(8, 8, std::move(depth)), Pose::identity(), intr);
  const auto current = testutil::simple_frame(1, rgb, testutil::constant_depth(8, 8, 2.0f),
                                              Pose::identity(), intr);

  SelectorConfig cfg = default_config();
  const ErrorScore low = hybrid_error(current, keyframe, cfg);
  CHECK(low.degenerate);
  CHECK(low.valid_fraction == doctest::Approx(1.0 / 64.0).epsilon(1e-12));
  // The score itself is still measured over the surviving pixel.
  CHECK(std::isfinite(low.e_t));

  cfg.min_valid_fraction = 0.01;  // below the actual coverage: not degenerate
  CHECK_FALSE(hybrid_error(current, keyframe, cfg).degenerate);
}

TEST_CASE("error grows monotonically with subpixel misalignment") {
  // With exact planar depth the warp reconstructs integer-pixel shifts
  // perfectly (the error collapses back to ~0 there), so the monotone
  // regime is the subpixel one: each step of 0.096 px pushes the splat
  // further from the resample position.
  SyntheticSpec spec;
  spec.width = 48;
  spec.height = 48;
  spec.frame_count = 6;
  spec.texture = Texture::GradientNoise;
  spec.plane_depth = 2.0;
  spec.seed = 12;
  // shift per frame = fx * vx / z = 48 * 0.004 / 2 = 0.096 px; five frames
  // stay below half a pixel.
  spec.motion.push_back({6, Eigen::Vector3d(0.004, 0.0, 0.0), Eigen::Vector3d::Zero()});
  const auto frames = generate_synthetic(spec);
  const auto cfg = default_config();

  double previous = 0.0;
  for (int i = 1; i < spec.frame_count; ++i) {
    const ErrorScore score = hybrid_error(frames[i], frames[0], cfg);
    CHECK_FALSE(score.degenerate);
    CHECK(score.e_t > previous);
    previous = score.e_t;
  }
}

TEST_CASE("integer-pixel translation with exact depth reconstructs the view") {
  // Complementary fact to the subpixel sweep: a motion whose accumulated
  // shift is exactly 3 px lands every splat on a pixel center, so the
  // warped keyframe reproduces the current frame.
  SyntheticSpec spec;
  spec.width = 48;
  spec.height = 48;
  spec.frame_count = 2;
  spec.texture = Texture::GradientNoise;
  spec.plane_depth = 2.0;
  spec.seed = 12;
  // 48 * 0.125 / 2 = 3 px exactly.
  spec.motion.push_back({2, Eigen::Vector3d(0.125, 0.0, 0.0), Eigen::Vector3d::Zero()});
  const auto frames = generate_synthetic(spec);
  const ErrorScore score = hybrid_error(frames[1], frames[0], default_config());
  CHECK(score.e_t == doctest::Approx(0.0).epsilon(1e-6));
  // The three vacated border columns are mask-false.
  CHECK(score.valid_fraction == doctest::Approx(45.0 / 48.0).epsilon(1e-12));
}

TEST_CASE("dimension mismatches are rejected") {
  std::mt19937_64 rng(1);
  const auto a = testutil::random_image(rng, 8, 8);
  const auto b = testutil::random_image(rng, 8, 6);
  CHECK_THROWS_AS(photometric_error(a, b, testutil::full_mask(8, 8)), ValidationError);
  CHECK_THROWS_AS(photometric_error(a, a, testutil::full_mask(8, 6)), ValidationError);
  CHECK_THROWS_AS(ssim_error(a, b, testutil::full_mask(8, 8), SsimParams{}),
                  ValidationError);

  const auto intr8 = testutil::centered_intrinsics(8, 8, 20.0);
  const auto intr6 = testutil::centered_intrinsics(8, 6, 20.0);
  const auto f8 = testutil::simple_frame(0, a, testutil::constant_depth(8, 8, 2.0f),
                                         Pose::identity(), intr8);
  const auto f6 = testutil::simple_frame(1, b, testutil::constant_depth(8, 6, 2.0f),
                                         Pose::identity(), intr6);
  CHECK_THROWS_AS(hybrid_error(f6, f8, default_config()), ValidationError);
}

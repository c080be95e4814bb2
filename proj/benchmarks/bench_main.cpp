/*
 * kfsieve — content-aware keyframe selection for posed RGB-D streams
 *
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "kfsieve/config.hpp"
#include "kfsieve/controller.hpp"
#include "kfsieve/metrics.hpp"
#include "kfsieve/pipeline.hpp"
#include "kfsieve/synthetic.hpp"
#include "kfsieve/warp.hpp"

namespace {

using namespace kfsieve;

// VGA two-frame fixture with a small lateral motion; shared by the
// per-stage benchmarks so their numbers are comparable.
struct Fixture {
  SyntheticSpec spec;
  Frame keyframe;
  Frame current;

  Fixture() : spec(make_spec()), keyframe(synthetic_frame(spec, 0)),
              current(synthetic_frame(spec, 1)) {}

  static SyntheticSpec make_spec() {
    SyntheticSpec s;
    s.width = 640;
    s.height = 480;
    s.frame_count = 2;
    s.texture = Texture::GradientNoise;
    s.plane_depth = 2.0;
    s.seed = 7;
    s.motion.push_back({2, Eigen::Vector3d(0.02, 0.0, 0.0), Eigen::Vector3d::Zero()});
    return s;
  }
};

const Fixture& fixture() {
  static Fixture f;
  return f;
}

void bm_warp_vga(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) {
    auto result = warp_frame(f.keyframe, f.current.pose(), f.current.intrinsics());
    benchmark::DoNotOptimize(result.mask);
  }
}
BENCHMARK(bm_warp_vga)->Unit(benchmark::kMillisecond);

void bm_ssim_vga(benchmark::State& state) {
  const auto& f = fixture();
  const auto warped = warp_frame(f.keyframe, f.current.pose(), f.current.intrinsics());
  const SsimParams params;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        ssim_error(f.current.rgb(), warped.warped, warped.mask, params));
  }
}
BENCHMARK(bm_ssim_vga)->Unit(benchmark::kMillisecond);

void bm_photometric_vga(benchmark::State& state) {
  const auto& f = fixture();
  const auto warped = warp_frame(f.keyframe, f.current.pose(), f.current.intrinsics());
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        photometric_error(f.current.rgb(), warped.warped, warped.mask));
  }
}
BENCHMARK(bm_photometric_vga)->Unit(benchmark::kMillisecond);

void bm_hybrid_error_vga(benchmark::State& state) {
  const auto& f = fixture();
  const auto cfg = default_config();
  for (auto _ : state) {
    benchmark::DoNotOptimize(hybrid_error(f.current, f.keyframe, cfg));
  }
}
BENCHMARK(bm_hybrid_error_vga)->Unit(benchmark::kMillisecond);

void bm_controller_observe(benchmark::State& state) {
  ThresholdController controller(default_config());
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(0.0, 0.3);
  std::vector<double> errors(4096);
  for (double& e : errors) e = dist(rng);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(controller.observe(errors[i++ & 4095]));
  }
}
BENCHMARK(bm_controller_observe);

void bm_select_qvga_sequence(benchmark::State& state) {
  SyntheticSpec spec;
  spec.width = 320;
  spec.height = 240;
  spec.frame_count = 30;
  spec.texture = Texture::GradientNoise;
  spec.plane_depth = 2.0;
  spec.seed = 3;
  spec.motion.push_back({30, Eigen::Vector3d(0.03, 0.0, 0.0), Eigen::Vector3d::Zero()});
  const auto frames = generate_synthetic(spec);
  const auto cfg = default_config();
  for (auto _ : state) {
    benchmark::DoNotOptimize(select(frames, cfg));
  }
  state.SetItemsProcessed(state.iterations() * spec.frame_count);
}
BENCHMARK(bm_select_qvga_sequence)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

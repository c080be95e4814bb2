/*
 * kfsieve — content-aware keyframe selection for posed RGB-D streams
 *
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#include "kfsieve/synthetic.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Geometry>

#include "kfsieve/errors.hpp"

namespace kfsieve {

namespace {

constexpr double kFrameRate = 30.0;
constexpr double kCheckerCell = 0.25;  // meters

void validate_spec(const SyntheticSpec& spec) {
  if (spec.width < 1 || spec.height < 1) {
    throw ValidationError("synthetic: resolution must be positive");
  }
  if (spec.frame_count < 1) throw ValidationError("synthetic: frame_count must be >= 1");
  if (!(std::isfinite(spec.plane_depth) && spec.plane_depth > 0.0)) {
    throw ValidationError("synthetic: plane_depth must be positive");
  }
  if (!(std::isfinite(spec.focal_length) && spec.focal_length >= 0.0)) {
    throw ValidationError("synthetic: focal_length must be >= 0");
  }
  for (const MotionSegment& seg : spec.motion) {
    if (seg.frames < 0) throw ValidationError("synthetic: segment frame span must be >= 0");
    if (!seg.linear_velocity.allFinite() || !seg.angular_velocity.allFinite()) {
      throw ValidationError("synthetic: segment velocities must be finite");
    }
  }
}

// splitmix64, keyed; the lattice hash behind the value noise.
std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double lattice(std::uint64_t seed, std::int64_t ix, std::int64_t iy, std::uint64_t salt) {
  std::uint64_t h = mix(seed ^ 0x8f0c2a6b91d34e55ULL);
  h = mix(h ^ static_cast<std::uint64_t>(ix));
  h = mix(h ^ static_cast<std::uint64_t>(iy));
  h = mix(h ^ salt);
  return static_cast<double>(h >> 11) * (1.0 / 9007199254740992.0);  // [0,1)
}

double smoothstep(double t) { return t * t * (3.0 - 2.0 * t); }

// Periodic-free value noise on a unit lattice, smoothstep-interpolated.
double value_noise(std::uint64_t seed, double x, double y, std::uint64_t salt) {
  const double fx = std::floor(x);
  const double fy = std::floor(y);
  const auto ix = static_cast<std::int64_t>(fx);
  const auto iy = static_cast<std::int64_t>(fy);
  const double tx = smoothstep(x - fx);
  const double ty = smoothstep(y - fy);
  const double v00 = lattice(seed, ix, iy, salt);
  const double v10 = lattice(seed, ix + 1, iy, salt);
  const double v01 = lattice(seed, ix, iy + 1, salt);
  const double v11 = lattice(seed, ix + 1, iy + 1, salt);
  const double a = v00 + (v10 - v00) * tx;
  const double b = v01 + (v11 - v01) * tx;
  return a + (b - a) * ty;
}

// Three-octave fractal noise mapped into [0.15, 0.85].
double gradient_noise_intensity(std::uint64_t seed, double x, double y, int channel) {
  const auto salt = static_cast<std::uint64_t>(channel + 1) * 0x51d0f1e2c3b4a596ULL;
  double acc = 0.0;
  double amp = 0.5;
  double freq = 2.0;  // base cell 0.5 m
  double norm = 0.0;
  for (int octave = 0; octave < 3; ++octave) {
    acc += amp * value_noise(seed, x * freq, y * freq, salt + octave);
    norm += amp;
    amp *= 0.5;
    freq *= 2.0;
  }
  return 0.15 + 0.70 * (acc / norm);
}

void plane_color(const SyntheticSpec& spec, double x, double y, float rgb[3]) {
  if (spec.texture == Texture::Checkerboard) {
    const auto cx = static_cast<std::int64_t>(std::floor(x / kCheckerCell));
    const auto cy = static_cast<std::int64_t>(std::floor(y / kCheckerCell));
    const float v = ((cx + cy) & 1) ? 0.1f : 0.9f;
    rgb[0] = rgb[1] = rgb[2] = v;
    return;
  }
  for (int c = 0; c < 3; ++c) {
    rgb[c] = static_cast<float>(
        std::clamp(gradient_noise_intensity(spec.seed, x, y, c), 0.0, 1.0));
  }
}

Pose motion_increment(const MotionSegment& seg) {
  const double angle = seg.angular_velocity.norm();
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  if (angle > 0.0) {
    rotation = Eigen::AngleAxisd(angle, seg.angular_velocity / angle).toRotationMatrix();
  }
  return Pose(rotation, seg.linear_velocity);
}

}  // namespace

std::string to_string(Texture t) {
  switch (t) {
    case Texture::Checkerboard: return "checkerboard";
    case Texture::GradientNoise: return "gradient-noise";
  }
  throw ValidationError("to_string: unknown texture");
}

Texture texture_from_string(const std::string& name) {
  if (name == "checkerboard") return Texture::Checkerboard;
  if (name == "gradient-noise") return Texture::GradientNoise;
  throw ValidationError("unknown texture '" + name + "'");
}

Intrinsics synthetic_intrinsics(const SyntheticSpec& spec) {
  validate_spec(spec);
  const double f = spec.focal_length > 0.0 ? spec.focal_length : static_cast<double>(spec.width);
  return Intrinsics(f, f, spec.width / 2.0, spec.height / 2.0, spec.width, spec.height);
}

Pose synthetic_pose(const SyntheticSpec& spec, int index) {
  validate_spec(spec);
  if (index < 0 || index >= spec.frame_count) {
    throw ValidationError("synthetic: frame index out of range");
  }
  // Body-frame integration; steps beyond the motion profile are static.
  Pose pose;
  int step = 0;
  for (const MotionSegment& seg : spec.motion) {
    if (step >= index) break;
    const Pose inc = motion_increment(seg);
    for (int i = 0; i < seg.frames && step < index; ++i, ++step) {
      pose = pose.compose(inc);
    }
  }
  return pose;
}

Frame synthetic_frame(const SyntheticSpec& spec, int index) {
  const Intrinsics k = synthetic_intrinsics(spec);
  const Pose pose = synthetic_pose(spec, index);
  const Eigen::Matrix3d& rot = pose.rotation();
  const Eigen::Vector3d& origin = pose.translation();

  const std::size_t pixels = static_cast<std::size_t>(spec.width) * spec.height;
  std::vector<float> rgb(pixels * 3, 0.0f);
  std::vector<float> depth(pixels, 0.0f);

  for (int v = 0; v < spec.height; ++v) {
    for (int u = 0; u < spec.width; ++u) {
      const Eigen::Vector3d dir_cam((u - k.cx()) / k.fx(), (v - k.cy()) / k.fy(), 1.0);
      const Eigen::Vector3d dir = rot * dir_cam;
      if (!(dir.z() > 1e-12)) continue;  // ray parallel to or away from the plane
      const double s = (spec.plane_depth - origin.z()) / dir.z();
      if (!(s > 0.0)) continue;
      const Eigen::Vector3d hit = origin + s * dir;
      const std::size_t i = static_cast<std::size_t>(v) * spec.width + u;
      plane_color(spec, hit.x(), hit.y(), &rgb[i * 3]);
      // Camera-frame z of the hit equals s because dir_cam.z == 1.
      depth[i] = static_cast<float>(s);
    }
  }

  return Frame(index, index / kFrameRate,
               ImageRgb(spec.width, spec.height, std::move(rgb)),
               DepthMap(spec.width, spec.height, std::move(depth)), pose, k);
}

std::vector<Frame> generate_synthetic(const SyntheticSpec& spec) {
  validate_spec(spec);
  std::vector<Frame> frames;
  frames.reserve(static_cast<std::size_t>(spec.frame_count));
  for (int i = 0; i < spec.frame_count; ++i) {
    frames.push_back(synthetic_frame(spec, i));
  }
  return frames;
}

}  // namespace kfsieve

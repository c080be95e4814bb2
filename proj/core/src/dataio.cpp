/*
 * kfsieve — content-aware keyframe selection for posed RGB-D streams
 *
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#include "kfsieve/dataio.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <utility>

#include <Eigen/Geometry>
#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "kfsieve/errors.hpp"
#include "kfsieve/kvfile.hpp"

namespace kfsieve {

namespace {

namespace fs = std::filesystem;

struct ListEntry {
  double timestamp;
  std::string path;
};

struct TrajectoryEntry {
  double timestamp;
  Eigen::Vector3d translation;
  Eigen::Quaterniond rotation;  // normalized
};

std::vector<std::string> tokenize(const std::string& line) {
  std::istringstream stream(line);
  std::vector<std::string> tokens;
  std::string token;
  while (stream >> token) tokens.push_back(token);
  return tokens;
}

std::string strip_comment(const std::string& line) {
  const auto hash = line.find('#');
  return hash == std::string::npos ? line : line.substr(0, hash);
}

double parse_double_token(const std::string& token, const std::string& origin, int line) {
  errno = 0;
  char* end = nullptr;
  const double value = std::strtod(token.c_str(), &end);
  if (end != token.c_str() + token.size() || token.empty() || errno == ERANGE ||
      !std::isfinite(value)) {
    throw ValidationError(origin + ":" + std::to_string(line) + ": bad number '" + token + "'");
  }
  return value;
}

std::vector<std::string> read_lines(const fs::path& path) {
  std::ifstream stream(path);
  if (!stream) throw IoError("cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(stream, line)) lines.push_back(line);
  return lines;
}

std::vector<ListEntry> parse_list_file(const fs::path& path) {
  const std::string origin = path.filename().string();
  std::vector<ListEntry> entries;
  int line_no = 0;
  for (const std::string& raw : read_lines(path)) {
    ++line_no;
    const std::vector<std::string> tokens = tokenize(strip_comment(raw));
    if (tokens.empty()) continue;
    if (tokens.size() != 2) {
      throw ValidationError(origin + ":" + std::to_string(line_no) +
                            ": expected 'timestamp path'");
    }
    entries.push_back({parse_double_token(tokens[0], origin, line_no), tokens[1]});
  }
  std::stable_sort(entries.begin(), entries.end(),
                   [](const ListEntry& a, const ListEntry& b) { return a.timestamp < b.timestamp; });
  return entries;
}

std::vector<TrajectoryEntry> parse_trajectory_file(const fs::path& path, QuaternionOrder order) {
  const std::string origin = path.filename().string();
  std::vector<TrajectoryEntry> entries;
  int line_no = 0;
  for (const std::string& raw : read_lines(path)) {
    ++line_no;
    const std::vector<std::string> tokens = tokenize(strip_comment(raw));
    if (tokens.empty()) continue;
    if (tokens.size() != 8) {
      throw ValidationError(origin + ":" + std::to_string(line_no) +
                            ": expected 'timestamp tx ty tz + quaternion'");
    }
    double v[8];
    for (int i = 0; i < 8; ++i) v[i] = parse_double_token(tokens[i], origin, line_no);
    double qx, qy, qz, qw;
    if (order == QuaternionOrder::Xyzw) {
      qx = v[4]; qy = v[5]; qz = v[6]; qw = v[7];
    } else {
      qw = v[4]; qx = v[5]; qy = v[6]; qz = v[7];
    }
    Eigen::Quaterniond q(qw, qx, qy, qz);
    if (q.norm() < 1e-12) {
      throw ValidationError(origin + ":" + std::to_string(line_no) + ": zero quaternion");
    }
    q.normalize();
    entries.push_back({v[0], Eigen::Vector3d(v[1], v[2], v[3]), q});
  }
  std::stable_sort(entries.begin(), entries.end(),
                   [](const TrajectoryEntry& a, const TrajectoryEntry& b) {
                     return a.timestamp < b.timestamp;
                   });
  return entries;
}

/// Globally greedy one-to-one matching by |dt| on two timestamp lists
/// (both sorted ascending). Candidates are ranked by (|dt|, a-timestamp,
/// b-timestamp), which depends only on values, never on file order.
/// Returns, per a-entry, the matched b index or -1.
std::vector<int> associate(const std::vector<double>& a, const std::vector<double>& b,
                           double max_delta) {
  struct Candidate {
    double dt;
    double a_ts;
    double b_ts;
    std::size_t ai;
    std::size_t bi;
  };
  std::vector<Candidate> candidates;
  for (std::size_t ai = 0; ai < a.size(); ++ai) {
    const auto lo = std::lower_bound(b.begin(), b.end(), a[ai] - max_delta);
    const auto hi = std::upper_bound(b.begin(), b.end(), a[ai] + max_delta);
    for (auto it = lo; it != hi; ++it) {
      const auto bi = static_cast<std::size_t>(it - b.begin());
      candidates.push_back({std::abs(*it - a[ai]), a[ai], *it, ai, bi});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& x, const Candidate& y) {
    if (x.dt != y.dt) return x.dt < y.dt;
    if (x.a_ts != y.a_ts) return x.a_ts < y.a_ts;
    return x.b_ts < y.b_ts;
  });

  std::vector<int> match(a.size(), -1);
  std::vector<char> a_used(a.size(), 0), b_used(b.size(), 0);
  for (const Candidate& c : candidates) {
    if (a_used[c.ai] || b_used[c.bi]) continue;
    a_used[c.ai] = 1;
    b_used[c.bi] = 1;
    match[c.ai] = static_cast<int>(c.bi);
  }
  return match;
}

ImageRgb decode_rgb(const fs::path& path) {
  const cv::Mat mat = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
  if (mat.empty()) throw IoError("cannot read image " + path.string());
  if (mat.type() != CV_8UC3) {
    throw ValidationError("rgb image must be 8-bit 3-channel: " + path.string());
  }
  std::vector<float> samples(static_cast<std::size_t>(mat.rows) * mat.cols * 3);
  constexpr float kScale = 1.0f / 255.0f;
  for (int y = 0; y < mat.rows; ++y) {
    for (int x = 0; x < mat.cols; ++x) {
      const cv::Vec3b bgr = mat.at<cv::Vec3b>(y, x);
      const std::size_t i = (static_cast<std::size_t>(y) * mat.cols + x) * 3;
      samples[i + 0] = bgr[2] * kScale;
      samples[i + 1] = bgr[1] * kScale;
      samples[i + 2] = bgr[0] * kScale;
    }
  }
  return ImageRgb(mat.cols, mat.rows, std::move(samples));
}

DepthMap decode_depth(const fs::path& path, double depth_scale) {
  const cv::Mat mat = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
  if (mat.empty()) throw IoError("cannot read image " + path.string());
  if (mat.type() != CV_16UC1) {
    throw ValidationError("depth image must be 16-bit single-channel: " + path.string());
  }
  std::vector<float> samples(static_cast<std::size_t>(mat.rows) * mat.cols);
  const double inv_scale = 1.0 / depth_scale;
  for (int y = 0; y < mat.rows; ++y) {
    for (int x = 0; x < mat.cols; ++x) {
      samples[static_cast<std::size_t>(y) * mat.cols + x] =
          static_cast<float>(mat.at<std::uint16_t>(y, x) * inv_scale);
    }
  }
  return DepthMap(mat.cols, mat.rows, std::move(samples));
}

std::string format_timestamp(double ts) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", ts);
  return buf;
}

std::string format_full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

SequenceIntrinsics load_intrinsics_file(const fs::path& path) {
  const std::vector<KvEntry> entries = parse_kv_file(path);
  const std::string origin = path.filename().string();

  auto find = [&](const std::string& key) -> const KvEntry* {
    for (const KvEntry& e : entries) {
      if (e.key == key) return &e;
    }
    return nullptr;
  };
  auto require = [&](const std::string& key) -> const KvEntry& {
    const KvEntry* e = find(key);
    if (!e) throw ValidationError(origin + ": missing key '" + key + "'");
    return *e;
  };

  const double fx = kv_double(require("fx"), origin);
  const double fy = kv_double(require("fy"), origin);
  const double cx = kv_double(require("cx"), origin);
  const double cy = kv_double(require("cy"), origin);
  const int width = static_cast<int>(kv_int(require("width"), origin));
  const int height = static_cast<int>(kv_int(require("height"), origin));
  double depth_scale = 5000.0;
  if (const KvEntry* e = find("depth_scale")) depth_scale = kv_double(*e, origin);
  if (!(depth_scale > 0.0)) throw ValidationError(origin + ": depth_scale must be positive");

  for (const KvEntry& e : entries) {
    static const char* known[] = {"fx", "fy", "cx", "cy", "width", "height", "depth_scale"};
    if (std::find_if(std::begin(known), std::end(known),
                     [&](const char* k) { return e.key == k; }) == std::end(known)) {
      throw ValidationError(origin + ":" + std::to_string(e.line) + ": unknown key '" +
                            e.key + "'");
    }
  }

  return SequenceIntrinsics{Intrinsics(fx, fy, cx, cy, width, height), depth_scale};
}

std::vector<Frame> load_sequence(const fs::path& root, const LoadOptions& options) {
  if (!(options.max_time_delta > 0.0)) {
    throw ValidationError("load_sequence: max_time_delta must be positive");
  }

  const SequenceIntrinsics seq = load_intrinsics_file(root / "intrinsics.txt");
  const std::vector<ListEntry> rgb = parse_list_file(root / "rgb.txt");
  const std::vector<ListEntry> depth = parse_list_file(root / "depth.txt");
  const std::vector<TrajectoryEntry> traj =
      parse_trajectory_file(root / "groundtruth.txt", options.quaternion_order);

  std::vector<double> rgb_ts(rgb.size()), depth_ts(depth.size()), traj_ts(traj.size());
  for (std::size_t i = 0; i < rgb.size(); ++i) rgb_ts[i] = rgb[i].timestamp;
  for (std::size_t i = 0; i < depth.size(); ++i) depth_ts[i] = depth[i].timestamp;
  for (std::size_t i = 0; i < traj.size(); ++i) traj_ts[i] = traj[i].timestamp;

  const std::vector<int> depth_match = associate(rgb_ts, depth_ts, options.max_time_delta);
  const std::vector<int> traj_match = associate(rgb_ts, traj_ts, options.max_time_delta);

  std::vector<Frame> frames;
  std::size_t dropped = 0;
  for (std::size_t i = 0; i < rgb.size(); ++i) {
    if (depth_match[i] < 0 || traj_match[i] < 0) {
      ++dropped;
      continue;
    }
    const TrajectoryEntry& pose_entry = traj[static_cast<std::size_t>(traj_match[i])];
    frames.emplace_back(static_cast<int>(frames.size()), rgb[i].timestamp,
                        decode_rgb(root / rgb[i].path),
                        decode_depth(root / depth[static_cast<std::size_t>(depth_match[i])].path,
                                     seq.depth_scale),
                        Pose(pose_entry.rotation.toRotationMatrix(), pose_entry.translation),
                        seq.intrinsics);
  }

  if (dropped > 0) {
    std::clog << "load_sequence: dropped " << dropped << " unassociated rgb entries\n";
  }
  if (frames.empty()) throw ValidationError("load_sequence: zero associated frames");
  return frames;
}

void write_sequence(const fs::path& root, const std::vector<Frame>& frames,
                    double depth_scale) {
  if (frames.empty()) throw ValidationError("write_sequence: empty sequence");
  if (!(depth_scale > 0.0)) throw ValidationError("write_sequence: depth_scale must be positive");
  for (const Frame& f : frames) {
    if (!f.intrinsics().same_dims(frames.front().intrinsics())) {
      throw ValidationError("write_sequence: frames must share dimensions");
    }
  }

  std::error_code ec;
  fs::create_directories(root / "rgb", ec);
  fs::create_directories(root / "depth", ec);
  if (ec) throw IoError("cannot create " + root.string());

  std::ofstream rgb_list(root / "rgb.txt");
  std::ofstream depth_list(root / "depth.txt");
  std::ofstream traj(root / "groundtruth.txt");
  if (!rgb_list || !depth_list || !traj) throw IoError("cannot write lists in " + root.string());
  rgb_list << "# timestamp filename\n";
  depth_list << "# timestamp filename\n";
  traj << "# timestamp tx ty tz qx qy qz qw\n";

  std::vector<std::string> seen;
  for (const Frame& f : frames) {
    const std::string stamp = format_timestamp(f.timestamp());
    if (std::find(seen.begin(), seen.end(), stamp) != seen.end()) {
      throw ValidationError("write_sequence: duplicate timestamp " + stamp);
    }
    seen.push_back(stamp);

    const int w = f.intrinsics().width();
    const int h = f.intrinsics().height();
    cv::Mat rgb_mat(h, w, CV_8UC3);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        auto quantize = [&](int c) {
          const double v = std::clamp(static_cast<double>(f.rgb().at(x, y, c)), 0.0, 1.0);
          return static_cast<unsigned char>(std::lround(v * 255.0));
        };
        rgb_mat.at<cv::Vec3b>(y, x) = cv::Vec3b(quantize(2), quantize(1), quantize(0));
      }
    }
    cv::Mat depth_mat(h, w, CV_16UC1);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const float d = f.depth().at(x, y);
        double units = 0.0;
        if (depth_valid(d)) {
          units = std::clamp(std::round(d * depth_scale), 0.0, 65535.0);
        }
        depth_mat.at<std::uint16_t>(y, x) = static_cast<std::uint16_t>(units);
      }
    }

    const std::string rgb_rel = "rgb/" + stamp + ".png";
    const std::string depth_rel = "depth/" + stamp + ".png";
    if (!cv::imwrite((root / rgb_rel).string(), rgb_mat) ||
        !cv::imwrite((root / depth_rel).string(), depth_mat)) {
      throw IoError("cannot write images in " + root.string());
    }
    rgb_list << stamp << " " << rgb_rel << "\n";
    depth_list << stamp << " " << depth_rel << "\n";

    const Eigen::Quaterniond q(f.pose().rotation());
    const Eigen::Vector3d& t = f.pose().translation();
    traj << stamp << " " << format_full(t.x()) << " " << format_full(t.y()) << " "
         << format_full(t.z()) << " " << format_full(q.x()) << " " << format_full(q.y()) << " "
         << format_full(q.z()) << " " << format_full(q.w()) << "\n";
  }

  const Intrinsics& k = frames.front().intrinsics();
  std::ofstream intr(root / "intrinsics.txt");
  if (!intr) throw IoError("cannot write intrinsics in " + root.string());
  intr << "fx = " << format_full(k.fx()) << "\n"
       << "fy = " << format_full(k.fy()) << "\n"
       << "cx = " << format_full(k.cx()) << "\n"
       << "cy = " << format_full(k.cy()) << "\n"
       << "width = " << k.width() << "\n"
       << "height = " << k.height() << "\n"
       << "depth_scale = " << format_full(depth_scale) << "\n";
}

}  // namespace kfsieve

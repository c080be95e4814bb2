/*
 * kfsieve — content-aware keyframe selection for posed RGB-D streams
 *
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "kfsieve/types.hpp"

namespace kfsieve {

enum class QuaternionOrder { Xyzw, Wxyz };  // trajectory file layout

/// Sequence loading knobs. max_time_delta bounds the timestamp distance of
/// an accepted rgb/depth or rgb/pose association (TUM convention: 20 ms).
struct LoadOptions {
  double max_time_delta = 0.02;  // seconds
  QuaternionOrder quaternion_order = QuaternionOrder::Xyzw;
};

/// Load a TUM-layout sequence: rgb.txt / depth.txt / groundtruth.txt lists
/// (whitespace-separated, # comments), rgb/ and depth/ image directories,
/// and an intrinsics.txt key/value file (fx fy cx cy width height, optional
/// depth_scale, default 5000). For each rgb timestamp the nearest depth and
/// trajectory entries within max_time_delta are associated greedily, each
/// entry used at most once; unassociated rgb entries are dropped and the
/// count is logged to std::clog. Depth values are divided by depth_scale;
/// intensities are normalized to [0,1].
///
/// Throws IoError on missing files, ValidationError on malformed lines
/// (with line numbers) or when zero frames associate.
std::vector<Frame> load_sequence(const std::filesystem::path& root,
                                 const LoadOptions& options = {});

/// Materialize a sequence in the same TUM layout (8-bit rgb PNGs, 16-bit
/// depth PNGs scaled by depth_scale, pose lines in xyzw order). Overwrites
/// existing files. Creates the directory tree as needed.
void write_sequence(const std::filesystem::path& root, const std::vector<Frame>& frames,
                    double depth_scale = 5000.0);

/// Parse an intrinsics.txt document.
struct SequenceIntrinsics {
  Intrinsics intrinsics;
  double depth_scale;
};
SequenceIntrinsics load_intrinsics_file(const std::filesystem::path& path);

}  // namespace kfsieve

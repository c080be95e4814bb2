/*
 * kfsieve — content-aware keyframe selection for posed RGB-D streams
 *
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#pragma once

#include <string_view>

namespace kfsieve {

inline constexpr std::string_view kVersion = "0.1.0";

}  // namespace kfsieve

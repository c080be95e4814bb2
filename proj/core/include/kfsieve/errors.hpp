/*
 * kfsieve — content-aware keyframe selection for posed RGB-D streams
 *
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace kfsieve {

/// Invalid user input: bad config values, malformed files, violated
/// type invariants at construction. Maps to CLI exit code 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Filesystem / codec failures. Maps to CLI exit code 1.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace kfsieve

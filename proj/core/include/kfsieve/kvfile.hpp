/*
 * kfsieve — content-aware keyframe selection for posed RGB-D streams
 *
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace kfsieve {

/// One parsed `key = value` line. Order of appearance is preserved;
/// duplicate keys are kept (callers that forbid them say so).
struct KvEntry {
  std::string key;
  std::string value;
  int line = 0;  // 1-based, for error messages
};

/// Parse a flat key/value document: `key = value` per line, `#` starts a
/// comment, blank lines ignored. Throws ValidationError with the line
/// number on malformed input. `origin` names the document in errors.
std::vector<KvEntry> parse_kv_text(const std::string& text, const std::string& origin);

std::vector<KvEntry> parse_kv_file(const std::filesystem::path& path);

// Typed value parsing; errors name the origin, key, and line.
double kv_double(const KvEntry& entry, const std::string& origin);
std::int64_t kv_int(const KvEntry& entry, const std::string& origin);

}  // namespace kfsieve

/*
 * kfsieve — content-aware keyframe selection for posed RGB-D streams
 *
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#include "kfsieve/kvfile.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "kfsieve/errors.hpp"

namespace kfsieve {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

std::vector<KvEntry> parse_kv_text(const std::string& text, const std::string& origin) {
  std::vector<KvEntry> entries;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ValidationError(origin + ":" + std::to_string(lineno) +
                            ": expected 'key = value'");
    }
    KvEntry entry;
    entry.key = trim(stripped.substr(0, eq));
    entry.value = trim(stripped.substr(eq + 1));
    entry.line = lineno;
    if (entry.key.empty()) {
      throw ValidationError(origin + ":" + std::to_string(lineno) + ": empty key");
    }
    if (entry.value.empty()) {
      throw ValidationError(origin + ":" + std::to_string(lineno) + ": empty value for '" +
                            entry.key + "'");
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

std::vector<KvEntry> parse_kv_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_kv_text(buf.str(), path.filename().string());
}

double kv_double(const KvEntry& entry, const std::string& origin) {
  const char* begin = entry.value.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || errno == ERANGE) {
    throw ValidationError(origin + ":" + std::to_string(entry.line) + ": '" + entry.key +
                          "' is not a number: " + entry.value);
  }
  return v;
}

std::int64_t kv_int(const KvEntry& entry, const std::string& origin) {
  const char* begin = entry.value.c_str();
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(begin, &end, 10);
  if (end == begin || *end != '\0' || errno == ERANGE) {
    throw ValidationError(origin + ":" + std::to_string(entry.line) + ": '" + entry.key +
                          "' is not an integer: " + entry.value);
  }
  return v;
}

}  // namespace kfsieve

/*
 * kfsieve — content-aware keyframe selection for posed RGB-D streams
 *
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#include "kfsieve/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "kfsieve/errors.hpp"
#include "kfsieve/kvfile.hpp"

namespace kfsieve {

std::string to_string(DecayMode mode) {
  return mode == DecayMode::Literal ? "literal" : "multiplier";
}

DecayMode decay_mode_from_string(const std::string& name) {
  if (name == "literal") return DecayMode::Literal;
  if (name == "multiplier") return DecayMode::Multiplier;
  throw ValidationError("decay_mode must be 'literal' or 'multiplier', got '" + name + "'");
}

SelectorConfig default_config() { return SelectorConfig{}; }

SelectorConfig validate_config(const SelectorConfig& cfg) {
  const auto fail = [](const std::string& msg) { throw ValidationError("config: " + msg); };

  if (!(std::isfinite(cfg.alpha) && cfg.alpha >= 0.0)) fail("alpha must be >= 0");
  if (!(std::isfinite(cfg.beta) && cfg.beta >= 0.0)) fail("beta must be >= 0");
  if (!(cfg.alpha + cfg.beta > 0.0)) fail("alpha + beta must be > 0");
  if (cfg.window_size < 2) fail("window_size must be >= 2");
  if (!(std::isfinite(cfg.sensitivity) && cfg.sensitivity >= 0.0)) {
    fail("sensitivity must be >= 0");
  }
  if (!(std::isfinite(cfg.decay) && cfg.decay > 0.0 && cfg.decay <= 1.0)) {
    fail("decay must satisfy 0 < decay <= 1");
  }
  if (!(std::isfinite(cfg.base_threshold) && cfg.base_threshold >= 0.0)) {
    fail("base_threshold must be >= 0");
  }
  if (!(std::isfinite(cfg.init_threshold) && cfg.init_threshold >= 0.0)) {
    fail("init_threshold must be >= 0");
  }
  if (cfg.ssim.window < 3 || cfg.ssim.window % 2 == 0) {
    fail("ssim_window must be odd and >= 3");
  }
  if (!(std::isfinite(cfg.ssim.sigma) && cfg.ssim.sigma > 0.0)) fail("ssim_sigma must be > 0");
  if (!(std::isfinite(cfg.ssim.c1) && cfg.ssim.c1 > 0.0)) fail("ssim_c1 must be > 0");
  if (!(std::isfinite(cfg.ssim.c2) && cfg.ssim.c2 > 0.0)) fail("ssim_c2 must be > 0");
  if (!(std::isfinite(cfg.min_valid_fraction) && cfg.min_valid_fraction >= 0.0 &&
        cfg.min_valid_fraction <= 1.0)) {
    fail("min_valid_fraction must lie in [0,1]");
  }
  return cfg;
}

namespace {

SelectorConfig apply_entries(const std::vector<KvEntry>& entries, const std::string& origin,
                             SelectorConfig cfg) {
  for (const auto& e : entries) {
    if (e.key == "alpha") {
      cfg.alpha = kv_double(e, origin);
    } else if (e.key == "beta") {
      cfg.beta = kv_double(e, origin);
    } else if (e.key == "window_size") {
      cfg.window_size = static_cast<int>(kv_int(e, origin));
    } else if (e.key == "sensitivity") {
      cfg.sensitivity = kv_double(e, origin);
    } else if (e.key == "decay") {
      cfg.decay = kv_double(e, origin);
    } else if (e.key == "base_threshold") {
      cfg.base_threshold = kv_double(e, origin);
    } else if (e.key == "init_threshold") {
      cfg.init_threshold = kv_double(e, origin);
    } else if (e.key == "decay_mode") {
      cfg.decay_mode = decay_mode_from_string(e.value);
    } else if (e.key == "ssim_window") {
      cfg.ssim.window = static_cast<int>(kv_int(e, origin));
    } else if (e.key == "ssim_sigma") {
      cfg.ssim.sigma = kv_double(e, origin);
    } else if (e.key == "ssim_c1") {
      cfg.ssim.c1 = kv_double(e, origin);
    } else if (e.key == "ssim_c2") {
      cfg.ssim.c2 = kv_double(e, origin);
    } else if (e.key == "min_valid_fraction") {
      cfg.min_valid_fraction = kv_double(e, origin);
    } else {
      throw ValidationError(origin + ":" + std::to_string(e.line) + ": unknown key '" +
                            e.key + "'");
    }
  }
  return validate_config(cfg);
}

}  // namespace

SelectorConfig parse_config_text(const std::string& text, const SelectorConfig& base) {
  return apply_entries(parse_kv_text(text, "config"), "config", base);
}

SelectorConfig load_config_file(const std::filesystem::path& path, const SelectorConfig& base) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string origin = path.filename().string();
  return apply_entries(parse_kv_text(buf.str(), origin), origin, base);
}

}  // namespace kfsieve

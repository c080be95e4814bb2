/*
 * kfsieve — content-aware keyframe selection for posed RGB-D streams
 *
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#include "kfsieve/evaluation.hpp"

#include <charconv>
#include <cmath>
#include <optional>
#include <utility>

#include <json.hpp>

#include "kfsieve/errors.hpp"

namespace kfsieve {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// Shared scaffolding for the two baseline loops: score the frame against
// the last selected keyframe on the same error scale as the adaptive
// pipeline, then let `gate` decide.
template <typename Gate>
SelectionResult baseline_run(std::span<const Frame> frames, const SelectorConfig& cfg,
                             Gate gate) {
  if (frames.empty()) throw ValidationError("run_strategy: empty sequence");

  SelectionResult out;
  out.config = validate_config(cfg);

  std::optional<Frame> last_kf;
  std::optional<int> previous_index;
  for (std::size_t pos = 0; pos < frames.size(); ++pos) {
    const Frame& frame = frames[pos];
    if (previous_index && frame.index() <= *previous_index) {
      throw ValidationError("run_strategy: frame indices must be strictly increasing");
    }
    previous_index = frame.index();

    TraceRow row;
    row.frame_index = frame.index();
    row.timestamp = frame.timestamp();

    std::optional<ErrorScore> score;
    if (!last_kf) {
      row.valid_fraction = 1.0;
      row.keyframe_ref = frame.index();
    } else {
      if (!frame.intrinsics().same_dims(last_kf->intrinsics())) {
        throw ValidationError("run_strategy: frame " + std::to_string(frame.index()) +
                              " dimensions differ from the stream");
      }
      score = hybrid_error(frame, *last_kf, out.config);
      row.e_photo = score->e_photo;
      row.e_ssim = score->e_ssim;
      row.e_t = score->e_t;
      row.valid_fraction = score->valid_fraction;
      row.keyframe_ref = last_kf->index();
    }

    gate(pos, score, row);

    if (row.decision != Decision::Skip) {
      out.keyframes.push_back(frame.index());
      last_kf = frame;
    }
    out.trace.push_back(row);
  }

  out.kfcr = compute_kfcr(frames.size(), out.keyframes.size());
  return out;
}

StrategyProxies derive_proxies(const SelectionResult& result) {
  StrategyProxies proxies;
  double sum = 0.0;
  std::size_t skipped = 0;
  for (const TraceRow& row : result.trace) {
    if (row.decision != Decision::Skip) continue;
    sum += row.e_t;
    proxies.max_inter_keyframe_error = std::max(proxies.max_inter_keyframe_error, row.e_t);
    ++skipped;
  }
  if (skipped > 0) proxies.mean_skipped_error = sum / static_cast<double>(skipped);
  return proxies;
}

ordered_json config_to_json(const SelectorConfig& cfg) {
  ordered_json j;
  j["alpha"] = cfg.alpha;
  j["beta"] = cfg.beta;
  j["window_size"] = cfg.window_size;
  j["sensitivity"] = cfg.sensitivity;
  j["decay"] = cfg.decay;
  j["base_threshold"] = cfg.base_threshold;
  j["init_threshold"] = cfg.init_threshold;
  j["decay_mode"] = to_string(cfg.decay_mode);
  j["ssim_window"] = cfg.ssim.window;
  j["ssim_sigma"] = cfg.ssim.sigma;
  j["ssim_c1"] = cfg.ssim.c1;
  j["ssim_c2"] = cfg.ssim.c2;
  j["min_valid_fraction"] = cfg.min_valid_fraction;
  return j;
}

const ordered_json& require(const ordered_json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    throw ValidationError(std::string("report: missing key '") + key + "'");
  }
  return *it;
}

double require_number(const ordered_json& obj, const char* key) {
  const ordered_json& v = require(obj, key);
  if (!v.is_number()) {
    throw ValidationError(std::string("report: key '") + key + "' must be numeric");
  }
  return v.get<double>();
}

std::string require_string(const ordered_json& obj, const char* key) {
  const ordered_json& v = require(obj, key);
  if (!v.is_string()) {
    throw ValidationError(std::string("report: key '") + key + "' must be a string");
  }
  return v.get<std::string>();
}

SelectorConfig config_from_json(const ordered_json& j) {
  SelectorConfig cfg;
  cfg.alpha = require_number(j, "alpha");
  cfg.beta = require_number(j, "beta");
  cfg.window_size = static_cast<int>(require_number(j, "window_size"));
  cfg.sensitivity = require_number(j, "sensitivity");
  cfg.decay = require_number(j, "decay");
  cfg.base_threshold = require_number(j, "base_threshold");
  cfg.init_threshold = require_number(j, "init_threshold");
  cfg.decay_mode = decay_mode_from_string(require_string(j, "decay_mode"));
  cfg.ssim.window = static_cast<int>(require_number(j, "ssim_window"));
  cfg.ssim.sigma = require_number(j, "ssim_sigma");
  cfg.ssim.c1 = require_number(j, "ssim_c1");
  cfg.ssim.c2 = require_number(j, "ssim_c2");
  cfg.min_valid_fraction = require_number(j, "min_valid_fraction");
  return cfg;
}

Decision decision_from_string(const std::string& token) {
  if (token == "Select") return Decision::Select;
  if (token == "Skip") return Decision::Skip;
  if (token == "ForcedSelect") return Decision::ForcedSelect;
  throw ValidationError("report: unknown decision '" + token + "'");
}

}  // namespace

StrategySpec StrategySpec::adaptive(const SelectorConfig& cfg) {
  StrategySpec s;
  s.kind = StrategyKind::Adaptive;
  s.config = cfg;
  return s;
}

StrategySpec StrategySpec::uniform_every_n(int stride, const SelectorConfig& metric_cfg) {
  StrategySpec s;
  s.kind = StrategyKind::UniformEveryN;
  s.config = metric_cfg;
  s.stride = stride;
  return s;
}

StrategySpec StrategySpec::fixed_threshold(double theta, const SelectorConfig& metric_cfg) {
  StrategySpec s;
  s.kind = StrategyKind::FixedThreshold;
  s.config = metric_cfg;
  s.theta = theta;
  return s;
}

std::string StrategySpec::name() const {
  switch (kind) {
    case StrategyKind::Adaptive: return "adaptive";
    case StrategyKind::UniformEveryN: return "uniform-" + std::to_string(stride);
    case StrategyKind::FixedThreshold: return "fixed-" + format_number(theta);
  }
  throw ValidationError("name: unknown strategy kind");
}

SelectionResult run_strategy(std::span<const Frame> frames, const StrategySpec& strategy) {
  switch (strategy.kind) {
    case StrategyKind::Adaptive:
      return select(frames, strategy.config);
    case StrategyKind::UniformEveryN: {
      if (strategy.stride < 1) throw ValidationError("run_strategy: stride must be >= 1");
      const int stride = strategy.stride;
      // Stride picks carry no gate; they are recorded as forced selections
      // with a zero effective threshold.
      return baseline_run(frames, strategy.config,
                          [stride](std::size_t pos, const std::optional<ErrorScore>&,
                                   TraceRow& row) {
                            row.theta_effective = 0.0;
                            row.decision = pos % static_cast<std::size_t>(stride) == 0
                                               ? Decision::ForcedSelect
                                               : Decision::Skip;
                          });
    }
    case StrategyKind::FixedThreshold: {
      if (std::isnan(strategy.theta) || strategy.theta < 0.0) {
        throw ValidationError("run_strategy: theta must be >= 0");
      }
      const double theta = strategy.theta;
      return baseline_run(
          frames, strategy.config,
          [theta](std::size_t, const std::optional<ErrorScore>& score, TraceRow& row) {
            if (!score) {  // stream opener
              row.decision = Decision::ForcedSelect;
              row.theta_effective = 0.0;
            } else if (score->degenerate) {
              row.decision = Decision::ForcedSelect;
              row.theta_effective = 0.0;
            } else {
              row.theta_effective = theta;
              row.decision = score->e_t > theta ? Decision::Select : Decision::Skip;
            }
          });
    }
  }
  throw ValidationError("run_strategy: unknown strategy kind");
}

ComparisonReport compare(std::span<const Frame> frames,
                         const std::vector<StrategySpec>& strategies) {
  if (strategies.empty()) throw ValidationError("compare: no strategies");
  ComparisonReport report;
  report.runs.reserve(strategies.size());
  for (const StrategySpec& spec : strategies) {
    StrategyRun run;
    run.name = spec.name();
    run.result = run_strategy(frames, spec);
    run.proxies = derive_proxies(run.result);
    report.runs.push_back(std::move(run));
  }
  return report;
}

std::string emit_report(const ComparisonReport& report, const ReportMeta& meta,
                        ReportFormat format) {
  if (format == ReportFormat::Csv) {
    std::string out = "strategy,frame,timestamp,e_photo,e_ssim,e_t,theta,decision\n";
    for (const StrategyRun& run : report.runs) {
      for (const TraceRow& row : run.result.trace) {
        out += run.name;
        out += ',';
        out += std::to_string(row.frame_index);
        out += ',';
        out += format_number(row.timestamp);
        out += ',';
        out += format_number(row.e_photo);
        out += ',';
        out += format_number(row.e_ssim);
        out += ',';
        out += format_number(row.e_t);
        out += ',';
        out += format_number(row.theta_effective);
        out += ',';
        out += to_string(row.decision);
        out += '\n';
      }
    }
    return out;
  }

  ordered_json root;
  root["meta"] = ordered_json{{"config", config_to_json(meta.config)},
                              {"input", meta.input},
                              {"tool_version", meta.tool_version}};
  ordered_json strategies = ordered_json::array();
  for (const StrategyRun& run : report.runs) {
    ordered_json s;
    s["name"] = run.name;
    s["keyframes"] = run.result.keyframes;
    s["kfcr"] = run.result.kfcr;
    s["proxies"] = ordered_json{{"mean_skipped_error", run.proxies.mean_skipped_error},
                                {"max_inter_keyframe_error", run.proxies.max_inter_keyframe_error}};
    strategies.push_back(std::move(s));
  }
  root["strategies"] = std::move(strategies);

  ordered_json trace = ordered_json::array();
  for (const StrategyRun& run : report.runs) {
    for (const TraceRow& row : run.result.trace) {
      ordered_json r;
      r["strategy"] = run.name;
      r["frame"] = row.frame_index;
      r["timestamp"] = row.timestamp;
      r["e_photo"] = row.e_photo;
      r["e_ssim"] = row.e_ssim;
      r["e_t"] = row.e_t;
      r["theta"] = row.theta_effective;
      if (row.mu) r["mu"] = *row.mu;
      if (row.sigma) r["sigma"] = *row.sigma;
      r["valid_fraction"] = row.valid_fraction;
      r["keyframe_ref"] = row.keyframe_ref;
      r["decision"] = to_string(row.decision);
      trace.push_back(std::move(r));
    }
  }
  root["trace"] = std::move(trace);

  return root.dump(2) + "\n";
}

ParsedReport parse_report_json(const std::string& text) {
  const ordered_json root = ordered_json::parse(text, nullptr, false);
  if (root.is_discarded() || !root.is_object()) {
    throw ValidationError("report: malformed JSON");
  }

  ParsedReport parsed;
  const ordered_json& meta = require(root, "meta");
  parsed.meta.config = config_from_json(require(meta, "config"));
  parsed.meta.input = require_string(meta, "input");
  parsed.meta.tool_version = require_string(meta, "tool_version");

  const ordered_json& strategies = require(root, "strategies");
  const ordered_json& trace = require(root, "trace");
  if (!strategies.is_array() || !trace.is_array()) {
    throw ValidationError("report: strategies and trace must be arrays");
  }

  for (const ordered_json& s : strategies) {
    StrategyRun run;
    run.name = require_string(s, "name");
    const ordered_json& keyframes = require(s, "keyframes");
    if (!keyframes.is_array()) throw ValidationError("report: keyframes must be an array");
    for (const ordered_json& k : keyframes) {
      if (!k.is_number_integer()) throw ValidationError("report: keyframe indices must be integers");
      run.result.keyframes.push_back(k.get<int>());
    }
    run.result.kfcr = require_number(s, "kfcr");
    const ordered_json& proxies = require(s, "proxies");
    run.proxies.mean_skipped_error = require_number(proxies, "mean_skipped_error");
    run.proxies.max_inter_keyframe_error = require_number(proxies, "max_inter_keyframe_error");
    run.result.config = parsed.meta.config;
    parsed.report.runs.push_back(std::move(run));
  }

  for (const ordered_json& r : trace) {
    const std::string strategy = require_string(r, "strategy");
    TraceRow row;
    row.frame_index = static_cast<int>(require_number(r, "frame"));
    row.timestamp = require_number(r, "timestamp");
    row.e_photo = require_number(r, "e_photo");
    row.e_ssim = require_number(r, "e_ssim");
    row.e_t = require_number(r, "e_t");
    row.theta_effective = require_number(r, "theta");
    if (r.contains("mu")) row.mu = require_number(r, "mu");
    if (r.contains("sigma")) row.sigma = require_number(r, "sigma");
    row.valid_fraction = require_number(r, "valid_fraction");
    row.keyframe_ref = static_cast<int>(require_number(r, "keyframe_ref"));
    row.decision = decision_from_string(require_string(r, "decision"));

    bool attached = false;
    for (StrategyRun& run : parsed.report.runs) {
      if (run.name == strategy) {
        run.result.trace.push_back(row);
        attached = true;
        break;
      }
    }
    if (!attached) {
      throw ValidationError("report: trace row references unknown strategy '" + strategy + "'");
    }
  }

  return parsed;
}

}  // namespace kfsieve

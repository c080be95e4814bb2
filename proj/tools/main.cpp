/*
 * kfsieve — content-aware keyframe selection for posed RGB-D streams
 *
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kfsieve/dataio.hpp"
#include "kfsieve/errors.hpp"
#include "kfsieve/evaluation.hpp"
#include "kfsieve/kvfile.hpp"
#include "kfsieve/pipeline.hpp"
#include "kfsieve/synthetic.hpp"
#include "kfsieve/version.hpp"

namespace {

namespace fs = std::filesystem;
using namespace kfsieve;

void write_text_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string format_percent(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f%%", v);
  return buf;
}

struct CommonArgs {
  std::string input;
  std::string config_path;
  std::string output;
  std::string decay_mode;
  bool csv = false;
  bool quiet = false;
};

SelectorConfig resolve_config(const CommonArgs& args) {
  SelectorConfig cfg = default_config();
  if (!args.config_path.empty()) cfg = load_config_file(args.config_path);
  if (!args.decay_mode.empty()) cfg.decay_mode = decay_mode_from_string(args.decay_mode);
  return cfg;
}

void write_reports(const ComparisonReport& report, const ReportMeta& meta,
                   const fs::path& output, bool csv) {
  write_text_file(output, emit_report(report, meta, ReportFormat::Json));
  if (csv) {
    fs::path csv_path = output;
    csv_path.replace_extension(".csv");
    write_text_file(csv_path, emit_report(report, meta, ReportFormat::Csv));
  }
}

int cmd_select(const CommonArgs& args, const std::string& keyframes_out) {
  const SelectorConfig cfg = resolve_config(args);
  const std::vector<Frame> frames = load_sequence(args.input);
  const SelectionResult result = select(frames, cfg);

  ComparisonReport report;
  report.runs.push_back(StrategyRun{"adaptive", result, StrategyProxies{}});
  StrategyProxies& proxies = report.runs.back().proxies;
  double skipped_sum = 0.0;
  std::size_t skipped = 0;
  for (const TraceRow& row : result.trace) {
    if (row.decision != Decision::Skip) continue;
    skipped_sum += row.e_t;
    ++skipped;
    proxies.max_inter_keyframe_error = std::max(proxies.max_inter_keyframe_error, row.e_t);
  }
  if (skipped > 0) proxies.mean_skipped_error = skipped_sum / static_cast<double>(skipped);

  const ReportMeta meta{cfg, args.input, std::string(kVersion)};
  write_reports(report, meta, args.output, args.csv);

  if (!keyframes_out.empty()) {
    std::string lines;
    for (const TraceRow& row : result.trace) {
      if (row.decision == Decision::Skip) continue;
      char buf[64];
      std::snprintf(buf, sizeof buf, "%d %.6f\n", row.frame_index, row.timestamp);
      lines += buf;
    }
    write_text_file(keyframes_out, lines);
  }

  if (!args.quiet) {
    std::cout << "Keyframes: " << result.keyframes.size() << " / " << result.trace.size()
              << "\n"
              << "KFCR: " << format_percent(result.kfcr) << "\n";
  }
  return 0;
}

int cmd_evaluate(const CommonArgs& args, bool adaptive, std::optional<int> uniform,
                 std::optional<double> fixed_threshold) {
  const SelectorConfig cfg = resolve_config(args);

  std::vector<StrategySpec> strategies;
  if (adaptive) strategies.push_back(StrategySpec::adaptive(cfg));
  if (uniform) strategies.push_back(StrategySpec::uniform_every_n(*uniform, cfg));
  if (fixed_threshold) strategies.push_back(StrategySpec::fixed_threshold(*fixed_threshold, cfg));
  if (strategies.empty()) throw ValidationError("no strategies requested");

  const std::vector<Frame> frames = load_sequence(args.input);
  const ComparisonReport report = compare(frames, strategies);
  const ReportMeta meta{cfg, args.input, std::string(kVersion)};
  write_reports(report, meta, args.output, args.csv);

  if (!args.quiet) {
    std::printf("%-16s %10s %9s %14s %14s\n", "strategy", "keyframes", "kfcr", "mean_skipped",
                "max_gap");
    for (const StrategyRun& run : report.runs) {
      std::printf("%-16s %10zu %8s %14.6f %14.6f\n", run.name.c_str(),
                  run.result.keyframes.size(), format_percent(run.result.kfcr).c_str(),
                  run.proxies.mean_skipped_error, run.proxies.max_inter_keyframe_error);
    }
  }
  return 0;
}

int cmd_trace(const std::string& input, const std::string& output, bool quiet) {
  const ParsedReport parsed = parse_report_json(read_text_file(input));
  write_text_file(output, emit_report(parsed.report, parsed.meta, ReportFormat::Csv));
  if (!quiet) {
    std::size_t rows = 0;
    for (const StrategyRun& run : parsed.report.runs) rows += run.result.trace.size();
    std::cout << "Wrote " << rows << " trace rows to " << output << "\n";
  }
  return 0;
}

MotionSegment parse_motion_inline(const std::string& text) {
  // frames:vx,vy,vz:wx,wy,wz
  std::vector<std::string> parts;
  std::string item;
  std::istringstream stream(text);
  while (std::getline(stream, item, ':')) parts.push_back(item);
  if (parts.size() != 3) {
    throw ValidationError("--motion expects frames:vx,vy,vz:wx,wy,wz, got '" + text + "'");
  }
  auto parse_vec = [&](const std::string& csv) {
    std::vector<double> values;
    std::string field;
    std::istringstream vstream(csv);
    while (std::getline(vstream, field, ',')) {
      try {
        values.push_back(std::stod(field));
      } catch (const std::exception&) {
        throw ValidationError("--motion: bad number '" + field + "'");
      }
    }
    if (values.size() != 3) throw ValidationError("--motion: expected 3 components in '" + csv + "'");
    return Eigen::Vector3d(values[0], values[1], values[2]);
  };
  MotionSegment seg;
  try {
    seg.frames = std::stoi(parts[0]);
  } catch (const std::exception&) {
    throw ValidationError("--motion: bad frame count '" + parts[0] + "'");
  }
  seg.linear_velocity = parse_vec(parts[1]);
  seg.angular_velocity = parse_vec(parts[2]);
  return seg;
}

SyntheticSpec parse_spec_file(const fs::path& path) {
  SyntheticSpec spec;
  const std::string origin = path.filename().string();
  for (const KvEntry& e : parse_kv_file(path)) {
    if (e.key == "width") {
      spec.width = static_cast<int>(kv_int(e, origin));
    } else if (e.key == "height") {
      spec.height = static_cast<int>(kv_int(e, origin));
    } else if (e.key == "frame_count") {
      spec.frame_count = static_cast<int>(kv_int(e, origin));
    } else if (e.key == "texture") {
      spec.texture = texture_from_string(e.value);
    } else if (e.key == "plane_depth") {
      spec.plane_depth = kv_double(e, origin);
    } else if (e.key == "focal_length") {
      spec.focal_length = kv_double(e, origin);
    } else if (e.key == "seed") {
      spec.seed = static_cast<std::uint64_t>(kv_int(e, origin));
    } else if (e.key == "segment") {
      std::istringstream stream(e.value);
      double v[7];
      bool ok = true;
      for (double& x : v) {
        if (!(stream >> x)) ok = false;
      }
      std::string rest;
      if (stream >> rest) ok = false;
      if (!ok) {
        throw ValidationError(origin + ":" + std::to_string(e.line) +
                              ": segment expects 'frames vx vy vz wx wy wz'");
      }
      MotionSegment seg;
      seg.frames = static_cast<int>(v[0]);
      seg.linear_velocity = Eigen::Vector3d(v[1], v[2], v[3]);
      seg.angular_velocity = Eigen::Vector3d(v[4], v[5], v[6]);
      spec.motion.push_back(seg);
    } else {
      throw ValidationError(origin + ":" + std::to_string(e.line) + ": unknown key '" + e.key +
                            "'");
    }
  }
  return spec;
}

int run(int argc, char** argv) {
  CLI::App app{"Content-aware keyframe selection for posed RGB-D sequences"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  // select
  auto* select_cmd = app.add_subcommand("select", "Run the adaptive selector over a sequence");
  CommonArgs select_args;
  std::string keyframes_out;
  select_cmd->add_option("--input", select_args.input, "Sequence directory (TUM layout)")
      ->required();
  select_cmd->add_option("--config", select_args.config_path, "Selector config file");
  select_cmd->add_option("--output", select_args.output, "Report JSON path")->required();
  select_cmd->add_option("--keyframes-out", keyframes_out,
                         "Plain-text keyframe list (index timestamp per line)");
  select_cmd->add_flag("--csv", select_args.csv, "Also write the trace as CSV next to --output");
  select_cmd->add_option("--decay-mode", select_args.decay_mode, "Decay mode override")
      ->check(CLI::IsMember({"literal", "multiplier"}));
  select_cmd->add_flag("--quiet", select_args.quiet, "Suppress the stdout summary");

  // evaluate
  auto* evaluate_cmd =
      app.add_subcommand("evaluate", "Compare selection strategies on one sequence");
  CommonArgs evaluate_args;
  bool adaptive = false;
  std::optional<int> uniform;
  std::optional<double> fixed_threshold;
  evaluate_cmd->add_option("--input", evaluate_args.input, "Sequence directory (TUM layout)")
      ->required();
  evaluate_cmd->add_option("--config", evaluate_args.config_path, "Selector config file");
  evaluate_cmd->add_option("--output", evaluate_args.output, "Report JSON path")->required();
  evaluate_cmd->add_flag("--adaptive", adaptive, "Run the adaptive selector");
  evaluate_cmd->add_option("--uniform", uniform, "Run uniform sampling every N frames")
      ->check(CLI::PositiveNumber);
  evaluate_cmd->add_option("--fixed-threshold", fixed_threshold,
                           "Run a constant-threshold selector");
  evaluate_cmd->add_flag("--csv", evaluate_args.csv,
                         "Also write the trace as CSV next to --output");
  evaluate_cmd->add_option("--decay-mode", evaluate_args.decay_mode, "Decay mode override")
      ->check(CLI::IsMember({"literal", "multiplier"}));
  evaluate_cmd->add_flag("--quiet", evaluate_args.quiet, "Suppress the stdout summary");

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "Materialize a synthetic sequence (TUM layout)");
  std::string synth_output;
  std::string synth_spec_path;
  std::vector<std::string> motion_flags;
  std::string texture_name;
  bool synth_quiet = false;
  std::optional<std::uint64_t> seed_flag;
  std::optional<int> width_flag, height_flag, frames_flag;
  std::optional<double> plane_depth_flag, focal_length_flag;
  synth_cmd->add_option("--output", synth_output, "Output sequence directory")->required();
  synth_cmd->add_option("--spec", synth_spec_path, "Synthetic spec file (key = value)");
  synth_cmd->add_option("--width", width_flag, "Image width in pixels");
  synth_cmd->add_option("--height", height_flag, "Image height in pixels");
  synth_cmd->add_option("--frames", frames_flag, "Frame count");
  synth_cmd->add_option("--texture", texture_name, "Plane texture")
      ->check(CLI::IsMember({"checkerboard", "gradient-noise"}));
  synth_cmd->add_option("--plane-depth", plane_depth_flag, "Plane distance in meters");
  synth_cmd->add_option("--focal-length", focal_length_flag,
                        "Focal length in pixels (0 = image width)");
  synth_cmd->add_option("--motion", motion_flags,
                        "Motion segment frames:vx,vy,vz:wx,wy,wz (repeatable)");
  synth_cmd->add_option("--seed", seed_flag, "Texture seed");
  synth_cmd->add_flag("--quiet", synth_quiet, "Suppress the stdout summary");

  // trace
  auto* trace_cmd = app.add_subcommand("trace", "Extract per-frame columns from a report");
  std::string trace_input, trace_output;
  bool trace_quiet = false;
  trace_cmd->add_option("--input", trace_input, "Report JSON path")->required();
  trace_cmd->add_option("--output", trace_output, "CSV output path")->required();
  trace_cmd->add_flag("--quiet", trace_quiet, "Suppress the stdout summary");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  if (select_cmd->parsed()) return cmd_select(select_args, keyframes_out);
  if (evaluate_cmd->parsed()) {
    return cmd_evaluate(evaluate_args, adaptive, uniform, fixed_threshold);
  }
  if (trace_cmd->parsed()) return cmd_trace(trace_input, trace_output, trace_quiet);

  // synth (require_subcommand(1) guarantees exactly one parsed)
  SyntheticSpec spec =
      synth_spec_path.empty() ? SyntheticSpec{} : parse_spec_file(synth_spec_path);
  if (width_flag) spec.width = *width_flag;
  if (height_flag) spec.height = *height_flag;
  if (frames_flag) spec.frame_count = *frames_flag;
  if (!texture_name.empty()) spec.texture = texture_from_string(texture_name);
  if (plane_depth_flag) spec.plane_depth = *plane_depth_flag;
  if (focal_length_flag) spec.focal_length = *focal_length_flag;
  if (seed_flag) spec.seed = *seed_flag;
  for (const std::string& m : motion_flags) spec.motion.push_back(parse_motion_inline(m));

  const std::vector<Frame> frames = generate_synthetic(spec);
  write_sequence(synth_output, frames);
  if (!synth_quiet) {
    std::cout << "Wrote " << frames.size() << " frames to " << synth_output << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}

/* Copyright (c) 2026 the ogopsim authors. All rights reserved.
 * Distributed under the BSD 3-Clause License (see LICENSE file). */

#include "ogop/cli.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"

#include "ogop/config_io.h"
#include "ogop/constraint_engine.h"
#include "ogop/report.h"
#include "ogop/switch_sim.h"

namespace ogop {

namespace {

namespace fs = std::filesystem;

struct GlobalOpts {
  std::string format = "text";
  std::string out_dir = ".";
  std::uint64_t seed = 0;
};

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write output file: " + path.string());
  out << content;
}

std::vector<std::string> fallback_warnings(const Ladder& ladder) {
  std::vector<std::string> warnings;
  const Representation& lowest = ladder.representations.front();
  const bool fallback_covers =
      ladder.fallback_lowest_closed &&
      lowest.sequence.config.irap_mode == IrapMode::ClosedGop;
  for (const Representation& from : ladder.representations) {
    for (const Representation& to : ladder.representations) {
      if (from.id == to.id) continue;
      if (to.sequence.config.irap_mode == IrapMode::ClosedGop) continue;
      const auto [h, v] = rpr_scaling_factors(from, to);
      if (!rpr_legal(h, v) && !fallback_covers) {
        warnings.push_back(
            "direct switch " + from.id + " -> " + to.id + " needs scaling (" +
            format_sig(h) + ", " + format_sig(v) +
            ") outside the RPR 8x/0.5x limits and no closed-GOP fallback is "
            "declared");
      }
    }
  }
  return warnings;
}

int cmd_gop_show(int gop, int irap, const std::string& mode, int length,
                 int segment, const std::string& constraint_mode,
                 const GlobalOpts& g, std::ostream& out) {
  GopConfig config;
  config.gop_size = gop;
  config.irap_period = irap;
  if (mode == "closed") config.irap_mode = IrapMode::ClosedGop;
  else if (mode == "open") config.irap_mode = IrapMode::OpenGop;
  else if (mode == "constrained") config.irap_mode = IrapMode::ConstrainedOpenGop;
  else throw std::invalid_argument("unknown GOP mode: " + mode);
  config.segment_length = segment > 0 ? segment : irap;
  const int len = length > 0 ? length : irap + 1;

  CodedSequence seq = build_sequence(config, len);
  if (config.irap_mode == IrapMode::ConstrainedOpenGop) {
    seq = apply_rasl_constraints(seq, constraint_mode == "qp_switching_only"
                                          ? ConstraintMode::QpSwitchingOnly
                                          : ConstraintMode::FullRpr);
  }
  out << (g.format == "csv" ? gop_show_csv(seq) : gop_show_text(seq));
  return 0;
}

int cmd_ladder_validate(const std::string& file, const GlobalOpts& g,
                        std::ostream& out) {
  const LoadedLadder loaded = load_ladder_config(file);
  const ConformanceReport report = validate_ladder(loaded.ladder);
  const std::vector<std::string> warnings = fallback_warnings(loaded.ladder);
  if (g.format == "json") {
    out << conformance_json(report, warnings).dump(2) << "\n";
  } else {
    out << conformance_text(report, warnings);
  }
  return report.is_switchable ? 0 : 1;
}

int cmd_sim_run(const std::string& ladder_file, const std::string& trace_file,
                const std::string& schedule_file, bool no_rpr,
                std::optional<bool> fallback_override, const GlobalOpts& g,
                std::ostream& out) {
  if (trace_file.empty() == schedule_file.empty()) {
    throw ConfigError("sim run needs exactly one of --trace or --schedule");
  }
  const LoadedLadder loaded = load_ladder_config(ladder_file, fallback_override);
  const CodecCapabilities caps{!no_rpr};

  std::map<std::string, std::string> digests;
  digests["ladder"] = file_digest(ladder_file);

  SessionReport session;
  if (!trace_file.empty()) {
    digests["trace"] = file_digest(trace_file);
    const BandwidthTrace trace = load_trace_csv(trace_file);
    session = simulate_abr_session(loaded.ladder, trace, loaded.abr, caps);
  } else {
    digests["schedule"] = file_digest(schedule_file);
    const std::vector<std::string> schedule = load_schedule_csv(schedule_file);
    try {
      session = simulate_session(loaded.ladder, schedule, caps);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }

  const ConformanceReport conformance = validate_ladder(loaded.ladder);
  const OrderedJson report =
      run_report_json(digests, g.seed, loaded.ladder, conformance, session);

  const fs::path dir = g.out_dir;
  write_file(dir / "run_report.json", report.dump(2) + "\n");
  write_file(dir / "quality.csv", quality_csv(session));
  write_file(dir / "switches.csv", switches_csv(session));

  if (g.format == "json") {
    out << report.dump(2) << "\n";
  } else {
    const SessionSummary& s = session.summary;
    out << "segments: " << session.timeline.size() << " pictures, "
        << session.switches.size() << " boundaries, " << s.switches_total
        << " switches\n";
    for (const auto& [name, count] : s.outcome_counts) {
      out << "  " << name << ": " << count << "\n";
    }
    out << "mean quality: " << format_sig(s.mean_quality_db)
        << " dB, dropped pictures: " << s.dropped_pictures_total
        << ", stalls: " << format_sig(s.stall_total_s) << " s\n";
    out << "wrote " << (dir / "run_report.json").string() << ", "
        << (dir / "quality.csv").string() << ", "
        << (dir / "switches.csv").string() << "\n";
  }
  return 0;
}

int cmd_bdrate(const std::string& anchor_file, const std::string& test_file,
               const GlobalOpts& g, std::ostream& out, std::ostream& err) {
  const RdCurve anchor = load_rd_csv(anchor_file);
  const RdCurve test = load_rd_csv(test_file);
  try {
    const BdRateTable table = bd_rate_table(anchor, test);
    if (g.format == "json") {
      out << bd_table_json(table).dump(2) << "\n";
    } else {
      out << bd_table_text(table);
    }
  } catch (const NoOverlapError& e) {
    err << "no-overlap: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Structural simulator and conformance toolkit for open-GOP "
               "resolution switching in adaptive streaming",
               "ogopsim"};
  app.set_version_flag("--version", tool_version());
  app.fallthrough();  // global flags may follow the subcommand

  GlobalOpts g;
  app.add_option("--format", g.format, "Output format: text|json|csv")
      ->capture_default_str();
  app.add_option("--out", g.out_dir, "Output directory for generated files")
      ->capture_default_str();
  app.add_option("--seed", g.seed,
                 "Seed recorded in reports (no command uses randomness)")
      ->capture_default_str();
  app.require_subcommand(1);

  // gop show
  CLI::App* gop = app.add_subcommand("gop", "GOP structure tools");
  gop->require_subcommand(1);
  CLI::App* gop_show = gop->add_subcommand("show", "Render a coded sequence");
  int opt_gop = 32, opt_irap = 64, opt_length = 0, opt_segment = 0;
  std::string opt_mode = "open", opt_cmode = "full_rpr";
  gop_show->add_option("--gop", opt_gop, "GOP size (power of two, <= 32)");
  gop_show->add_option("--irap", opt_irap, "IRAP period in pictures");
  gop_show->add_option("--mode", opt_mode, "closed|open|constrained");
  gop_show->add_option("--length", opt_length,
                       "Sequence length (default irap+1)");
  gop_show->add_option("--segment", opt_segment,
                       "Segment length in pictures (default irap)");
  gop_show->add_option("--constraint-mode", opt_cmode,
                       "full_rpr|qp_switching_only");

  // ladder validate
  CLI::App* ladder = app.add_subcommand("ladder", "Bitrate ladder tools");
  ladder->require_subcommand(1);
  CLI::App* ladder_validate =
      ladder->add_subcommand("validate", "Check the three switching pillars");
  std::string opt_ladder_file;
  ladder_validate->add_option("file", opt_ladder_file, "Ladder JSON file")
      ->required();

  // sim run
  CLI::App* sim = app.add_subcommand("sim", "Session simulation");
  sim->require_subcommand(1);
  CLI::App* sim_run = sim->add_subcommand("run", "Simulate an ABR session");
  std::string opt_sim_ladder, opt_trace, opt_schedule, opt_caps = "rpr";
  std::string opt_fallback;
  sim_run->add_option("ladder", opt_sim_ladder, "Ladder JSON file")->required();
  sim_run->add_option("--trace", opt_trace, "Bandwidth trace CSV (time_s,kbps)");
  sim_run->add_option("--schedule", opt_schedule,
                      "Per-segment schedule CSV (segment,rep_id)");
  sim_run->add_option("--caps", opt_caps, "Decoder capabilities: rpr|no-rpr");
  sim_run->add_option("--fallback", opt_fallback,
                      "Override the ladder's closed-GOP fallback flag: on|off");

  // bdrate
  CLI::App* bdrate_cmd =
      app.add_subcommand("bdrate", "Bjontegaard delta-rate between RD curves");
  std::string opt_anchor, opt_test;
  bdrate_cmd->add_option("--anchor", opt_anchor, "Anchor RD CSV")->required();
  bdrate_cmd->add_option("--test", opt_test, "Test RD CSV")->required();

  try {
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (gop_show->parsed()) {
      return cmd_gop_show(opt_gop, opt_irap, opt_mode, opt_length, opt_segment,
                          opt_cmode, g, out);
    }
    if (ladder_validate->parsed()) {
      return cmd_ladder_validate(opt_ladder_file, g, out);
    }
    if (sim_run->parsed()) {
      if (opt_caps != "rpr" && opt_caps != "no-rpr") {
        throw ConfigError("--caps must be rpr or no-rpr");
      }
      std::optional<bool> fallback_override;
      if (!opt_fallback.empty()) {
        if (opt_fallback == "on") fallback_override = true;
        else if (opt_fallback == "off") fallback_override = false;
        else throw ConfigError("--fallback must be on or off");
      }
      return cmd_sim_run(opt_sim_ladder, opt_trace, opt_schedule,
                         opt_caps == "no-rpr", fallback_override, g, out);
    }
    if (bdrate_cmd->parsed()) {
      return cmd_bdrate(opt_anchor, opt_test, g, out, err);
    }
    err << "no command given\n";
    return 2;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace ogop

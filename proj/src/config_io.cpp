/* Copyright (c) 2026 the ogopsim authors. All rights reserved.
 * Distributed under the BSD 3-Clause License (see LICENSE file). */

#include "ogop/config_io.h"

#include <algorithm>
#include <fstream>

#include "json.hpp"

#include "ogop/constraint_engine.h"
#include "ogop/csv.h"

namespace ogop {

namespace {

using nlohmann::json;

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

const json& require(const json& j, const char* key, const std::string& where) {
  const auto it = j.find(key);
  if (it == j.end()) {
    throw ConfigError(where + ": missing required key '" + key + "'");
  }
  return *it;
}

IrapMode irap_mode_from_string(const std::string& s, const std::string& where) {
  if (s == "closed") return IrapMode::ClosedGop;
  if (s == "open") return IrapMode::OpenGop;
  if (s == "constrained") return IrapMode::ConstrainedOpenGop;
  throw ConfigError(where + ": unknown GOP mode '" + s +
                    "' (closed|open|constrained)");
}

SpsModel parse_sps(const json& j, SpsModel base, const std::string& where) {
  try {
    if (j.contains("max_width")) base.max_width = j["max_width"].get<int>();
    if (j.contains("max_height")) base.max_height = j["max_height"].get<int>();
    if (j.contains("chroma_format")) {
      base.chroma_format =
          chroma_format_from_string(j["chroma_format"].get<std::string>());
    }
    if (j.contains("bit_depth")) base.bit_depth = j["bit_depth"].get<int>();
    if (j.contains("ctu_size")) base.ctu_size = j["ctu_size"].get<int>();
    if (j.contains("level_idc")) base.level_idc = j["level_idc"].get<int>();
    if (j.contains("rpr_enabled")) base.rpr_enabled = j["rpr_enabled"].get<bool>();
    if (j.contains("res_change_allowed")) {
      base.res_change_allowed = j["res_change_allowed"].get<bool>();
    }
    if (j.contains("gci_no_res_change")) {
      base.gci_no_res_change = j["gci_no_res_change"].get<bool>();
    }
    if (j.contains("subpictures_enabled")) {
      base.subpictures_enabled = j["subpictures_enabled"].get<bool>();
    }
  } catch (const json::exception& e) {
    throw ConfigError(where + ": bad SPS field: " + e.what());
  }
  return base;
}

TransitionParams parse_transition_params(const json& j, const std::string& where) {
  TransitionParams p;
  try {
    if (j.contains("up_mean_below_high_db")) p.up_mean_below_high_db = j["up_mean_below_high_db"].get<double>();
    if (j.contains("up_mean_above_low_db")) p.up_mean_above_low_db = j["up_mean_above_low_db"].get<double>();
    if (j.contains("down_mean_below_high_db")) p.down_mean_below_high_db = j["down_mean_below_high_db"].get<double>();
    if (j.contains("down_mean_above_low_db")) p.down_mean_above_low_db = j["down_mean_above_low_db"].get<double>();
    if (j.contains("down_first_rasl_drop_db")) p.down_first_rasl_drop_db = j["down_first_rasl_drop_db"].get<double>();
    p.validate();
  } catch (const std::exception& e) {
    throw ConfigError(where + ": bad transition parameters: " +
                      std::string(e.what()));
  }
  return p;
}

void apply_tool_overrides(CodedSequence& seq, const json& overrides,
                          const std::string& where) {
  for (const json& o : overrides) {
    const int poc = require(o, "poc", where).get<int>();
    if (poc < 0 || poc >= seq.length) {
      throw ConfigError(where + ": tool override POC out of range: " +
                        std::to_string(poc));
    }
    ToolFlags& t = seq.pictures[poc].tools;
    if (o.contains("tmvp")) t.tmvp = o["tmvp"].get<bool>();
    if (o.contains("sbtmvp")) t.sbtmvp = o["sbtmvp"].get<bool>();
    if (o.contains("dmvr")) t.dmvr = o["dmvr"].get<bool>();
    if (o.contains("bdof")) t.bdof = o["bdof"].get<bool>();
    if (o.contains("prof")) t.prof = o["prof"].get<bool>();
    if (o.contains("cclm")) t.cclm = o["cclm"].get<bool>();
    if (o.contains("mc_wraparound")) t.mc_wraparound = o["mc_wraparound"].get<bool>();
  }
}

void apply_collocated_overrides(CodedSequence& seq, const json& overrides,
                                const std::string& where) {
  for (const json& o : overrides) {
    const int poc = require(o, "poc", where).get<int>();
    const int ref = require(o, "collocated_ref", where).get<int>();
    if (poc < 0 || poc >= seq.length || ref < 0 || ref >= seq.length) {
      throw ConfigError(where + ": collocated override POC out of range");
    }
    seq.pictures[poc].collocated_ref = ref;
  }
}

// Synthesizes the APS transmission model: one id per kind, carried in the
// stream-start IDR and, when reset_at_irap is set, re-carried in every
// IRAP; every picture reads all ids. extra_events/extra_uses allow
// deviating streams to be described.
void apply_aps_model(Representation& rep, const json& aps,
                     const std::string& where) {
  CodedSequence& seq = rep.sequence;
  std::vector<ApsKind> kinds;
  if (aps.contains("kinds")) {
    for (const json& k : aps["kinds"]) {
      kinds.push_back(aps_kind_from_string(k.get<std::string>()));
    }
  }
  const bool reset = aps.value("reset_at_irap", true);

  std::vector<int> ids;
  for (size_t i = 0; i < kinds.size(); ++i) {
    const int id = static_cast<int>(i);
    ids.push_back(id);
    for (const Picture& p : seq.pictures) {
      const bool carry =
          (p.poc == 0) || (reset && is_irap(p.kind) && p.poc != 0);
      if (carry) {
        rep.aps_events.push_back(
            {id, p.poc, p.segment_index, kinds[i]});
      }
    }
  }
  if (!ids.empty()) {
    for (Picture& p : seq.pictures) p.aps_refs = ids;
  }

  if (aps.contains("extra_events")) {
    for (const json& e : aps["extra_events"]) {
      const int poc = require(e, "poc", where).get<int>();
      if (poc < 0 || poc >= seq.length) {
        throw ConfigError(where + ": APS event POC out of range");
      }
      rep.aps_events.push_back(
          {require(e, "aps_id", where).get<int>(), poc,
           seq.pictures[poc].segment_index,
           aps_kind_from_string(e.value("kind", std::string("ALF")))});
    }
  }
  if (aps.contains("extra_uses")) {
    for (const json& u : aps["extra_uses"]) {
      const int poc = require(u, "poc", where).get<int>();
      if (poc < 0 || poc >= seq.length) {
        throw ConfigError(where + ": APS use POC out of range");
      }
      seq.pictures[poc].aps_refs.push_back(
          require(u, "aps_id", where).get<int>());
    }
  }
}

}  // namespace

RdCurve load_rd_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  const int c_rate = table.column("rate_kbps");
  const int c_y = table.column("psnr_y");
  const int c_u = table.column("psnr_u");
  const int c_v = table.column("psnr_v");
  if (c_rate < 0 || c_y < 0 || c_u < 0 || c_v < 0) {
    throw ConfigError(path.string() +
                      ": RD CSV needs header rate_kbps,psnr_y,psnr_u,psnr_v");
  }
  RdCurve curve;
  for (const auto& row : table.rows) {
    curve.points.push_back({csv_double(row[c_rate], path.string()),
                            csv_double(row[c_y], path.string()),
                            csv_double(row[c_u], path.string()),
                            csv_double(row[c_v], path.string())});
  }
  try {
    curve.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return curve;
}

BandwidthTrace load_trace_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  const int c_t = table.column("time_s");
  const int c_k = table.column("kbps");
  if (c_t < 0 || c_k < 0) {
    throw ConfigError(path.string() + ": trace CSV needs header time_s,kbps");
  }
  BandwidthTrace trace;
  for (const auto& row : table.rows) {
    trace.points.push_back({csv_double(row[c_t], path.string()),
                            csv_double(row[c_k], path.string())});
  }
  try {
    trace.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return trace;
}

std::vector<std::string> load_schedule_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  const int c_seg = table.column("segment");
  const int c_rep = table.column("rep_id");
  if (c_seg < 0 || c_rep < 0) {
    throw ConfigError(path.string() +
                      ": schedule CSV needs header segment,rep_id");
  }
  std::vector<std::string> schedule;
  for (const auto& row : table.rows) {
    const int seg = csv_int(row[c_seg], path.string());
    if (seg != static_cast<int>(schedule.size())) {
      throw ConfigError(path.string() +
                        ": schedule segments must run 0..n-1 in order");
    }
    schedule.push_back(row[c_rep]);
  }
  if (schedule.empty()) {
    throw ConfigError(path.string() + ": schedule is empty");
  }
  return schedule;
}

LoadedLadder load_ladder_config(const std::filesystem::path& path,
                                std::optional<bool> fallback_override) {
  const json cfg = read_json_file(path);
  const std::string where = path.string();
  const std::filesystem::path base = path.parent_path();

  LoadedLadder loaded;
  Ladder& ladder = loaded.ladder;
  try {
    ladder.segment_duration_pics =
        require(cfg, "segment_duration_pics", where).get<int>();
    ladder.frame_rate = require(cfg, "frame_rate", where).get<double>();
    const int sequence_length = require(cfg, "sequence_length", where).get<int>();
    ladder.sps = parse_sps(require(cfg, "sps", where), SpsModel{}, where);
    if (cfg.contains("constraint_mode")) {
      const std::string m = cfg["constraint_mode"].get<std::string>();
      if (m == "full_rpr") ladder.constraint_mode = ConstraintMode::FullRpr;
      else if (m == "qp_switching_only") ladder.constraint_mode = ConstraintMode::QpSwitchingOnly;
      else throw ConfigError(where + ": unknown constraint_mode '" + m + "'");
    }
    ladder.fallback_lowest_closed = cfg.value("fallback_lowest_closed", false);
    if (fallback_override) ladder.fallback_lowest_closed = *fallback_override;
    if (cfg.contains("transition_params")) {
      ladder.transition_params =
          parse_transition_params(cfg["transition_params"], where);
    }
    const int default_op = cfg.value("operating_point_index", -1);

    if (cfg.contains("abr")) {
      const json& abr = cfg["abr"];
      loaded.abr.safety_margin = abr.value("safety_margin", loaded.abr.safety_margin);
      loaded.abr.panic_threshold_s = abr.value("panic_threshold_s", loaded.abr.panic_threshold_s);
      loaded.abr.buffer_capacity_s = abr.value("buffer_capacity_s", loaded.abr.buffer_capacity_s);
      loaded.abr.initial_buffer_s = abr.value("initial_buffer_s", loaded.abr.initial_buffer_s);
    }

    const json& reps = require(cfg, "representations", where);
    if (!reps.is_array() || reps.empty()) {
      throw ConfigError(where + ": representations must be a non-empty array");
    }

    struct Pending {
      Representation rep;
      json extras;
    };
    std::vector<Pending> pending;
    for (const json& rj : reps) {
      Pending p;
      Representation& r = p.rep;
      r.id = require(rj, "id", where).get<std::string>();
      const std::string rwhere = where + " (representation " + r.id + ")";
      r.width = require(rj, "width", rwhere).get<int>();
      r.height = require(rj, "height", rwhere).get<int>();

      const json& gop = require(rj, "gop", rwhere);
      r.gop_config.gop_size = require(gop, "size", rwhere).get<int>();
      r.gop_config.irap_period = require(gop, "irap_period", rwhere).get<int>();
      r.gop_config.irap_mode = irap_mode_from_string(
          require(gop, "mode", rwhere).get<std::string>(), rwhere);
      r.gop_config.segment_length = ladder.segment_duration_pics;

      const std::string rd_path = require(rj, "rd_curve", rwhere).get<std::string>();
      r.rd_curve = load_rd_csv(base / rd_path);
      r.operating_point = rj.value("operating_point_index", default_op);
      r.operating_index();  // range check

      if (rj.contains("scaling_window")) {
        r.scaling_window.width = rj["scaling_window"].value("width", 0);
        r.scaling_window.height = rj["scaling_window"].value("height", 0);
      }
      if (rj.contains("sps_overrides")) {
        r.sps_override = parse_sps(rj["sps_overrides"], ladder.sps, rwhere);
      }
      p.extras = rj;
      pending.push_back(std::move(p));
    }

    std::stable_sort(pending.begin(), pending.end(),
                     [](const Pending& a, const Pending& b) {
                       return a.rep.avg_bitrate_kbps() < b.rep.avg_bitrate_kbps();
                     });
    if (ladder.fallback_lowest_closed) {
      pending.front().rep.gop_config.irap_mode = IrapMode::ClosedGop;
    }

    for (Pending& p : pending) {
      Representation& r = p.rep;
      const std::string rwhere = where + " (representation " + r.id + ")";
      try {
        r.sequence = build_sequence(r.gop_config, sequence_length);
        if (r.gop_config.irap_mode == IrapMode::ConstrainedOpenGop) {
          r.sequence = apply_rasl_constraints(r.sequence, ladder.constraint_mode);
        }
      } catch (const std::invalid_argument& e) {
        throw ConfigError(rwhere + ": " + e.what());
      }
      if (p.extras.contains("tool_overrides")) {
        apply_tool_overrides(r.sequence, p.extras["tool_overrides"], rwhere);
      }
      if (p.extras.contains("collocated_overrides")) {
        apply_collocated_overrides(r.sequence, p.extras["collocated_overrides"], rwhere);
      }
      if (p.extras.contains("aps")) {
        apply_aps_model(r, p.extras["aps"], rwhere);
      }
      ladder.representations.push_back(std::move(r));
    }

    ladder.validate_shape();
  } catch (const json::exception& e) {
    throw ConfigError(where + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + ": " + e.what());
  }
  return loaded;
}

}  // namespace ogop

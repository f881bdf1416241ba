/* Copyright (c) 2026 the ogopsim authors. All rights reserved.
 * Distributed under the BSD 3-Clause License (see LICENSE file). */

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ogop/gop_model.h"
#include "ogop/quality_metrics.h"
#include "ogop/sps.h"

namespace ogop {

enum class ApsKind { Alf, Lmcs, ScalingList };

const char* to_string(ApsKind k);
ApsKind aps_kind_from_string(const std::string& s);

/// One APS transmission: parameter set `aps_id` carried in the picture at
/// `carried_in_poc`.
struct ApsEvent {
  int aps_id = 0;
  int carried_in_poc = 0;
  int segment_index = 0;
  ApsKind kind = ApsKind::Alf;

  bool operator==(const ApsEvent&) const = default;
};

/// Which tool constraints the constrained open-GOP coding targets.
/// QpSwitchingOnly keeps BDOF/PROF running on RASL pictures; they only
/// need to be off when resolution switches bring RPR into play.
enum class ConstraintMode { FullRpr, QpSwitchingOnly };

const char* to_string(ConstraintMode m);

struct ScalingWindow {
  int width = 0;   // 0: use the picture width
  int height = 0;  // 0: use the picture height

  bool operator==(const ScalingWindow&) const = default;
};

struct Representation {
  std::string id;
  int width = 0;
  int height = 0;
  GopConfig gop_config;
  CodedSequence sequence;
  RdCurve rd_curve;
  int operating_point = -1;  // index into rd_curve.points; -1: highest rate
  ScalingWindow scaling_window;
  std::optional<SpsModel> sps_override;  // bitstream SPS when it deviates
  std::vector<ApsEvent> aps_events;

  int operating_index() const;
  const RdPoint& operating_rd_point() const;
  double avg_bitrate_kbps() const;
  double steady_quality_db() const;  // 6/1/1-weighted PSNR at the operating point
  int scaling_window_width() const { return scaling_window.width > 0 ? scaling_window.width : width; }
  int scaling_window_height() const { return scaling_window.height > 0 ? scaling_window.height : height; }
};

struct Ladder {
  std::vector<Representation> representations;  // bitrate ascending
  SpsModel sps;
  int segment_duration_pics = 64;
  double frame_rate = 60.0;
  ConstraintMode constraint_mode = ConstraintMode::FullRpr;
  bool fallback_lowest_closed = false;
  TransitionParams transition_params;
  std::vector<LevelEntry> level_table = default_level_table();

  /// Throws std::invalid_argument when the representations do not share
  /// segmentation, length or frame rate, or the list is empty.
  void validate_shape() const;

  int find_rep(const std::string& id) const;  // -1 when unknown
  const Representation& rep(const std::string& id) const;  // throws
  const SpsModel& effective_sps(const Representation& r) const;
  int segment_count() const;
};

struct CodecCapabilities {
  bool supports_rpr = true;  // VVC-like true; AVC/HEVC-like false
};

}  // namespace ogop

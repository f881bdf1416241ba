/* Copyright (c) 2026 the ogopsim authors. All rights reserved.
 * Distributed under the BSD 3-Clause License (see LICENSE file). */

#include "ogop/ladder.h"

#include <stdexcept>

namespace ogop {

const char* to_string(ChromaFormat f) {
  switch (f) {
    case ChromaFormat::Monochrome: return "4:0:0";
    case ChromaFormat::Cf420: return "4:2:0";
    case ChromaFormat::Cf422: return "4:2:2";
    case ChromaFormat::Cf444: return "4:4:4";
  }
  return "?";
}

ChromaFormat chroma_format_from_string(const std::string& s) {
  if (s == "4:0:0") return ChromaFormat::Monochrome;
  if (s == "4:2:0") return ChromaFormat::Cf420;
  if (s == "4:2:2") return ChromaFormat::Cf422;
  if (s == "4:4:4") return ChromaFormat::Cf444;
  throw std::invalid_argument("unknown chroma format: " + s);
}

const std::vector<LevelEntry>& default_level_table() {
  // Levels 4.0 / 5.0 / 6.0 by maximum luma picture size.
  static const std::vector<LevelEntry> table = {
      {2228224, 64},   // up to 1080p
      {8912896, 80},   // up to 2160p
      {35651584, 96},  // up to 8K
  };
  return table;
}

int min_level_for(std::int64_t luma_samples,
                  const std::vector<LevelEntry>& table) {
  if (table.empty()) {
    throw std::invalid_argument("level table must not be empty");
  }
  for (const LevelEntry& e : table) {
    if (luma_samples <= e.max_luma_samples) return e.level_idc;
  }
  return table.back().level_idc;
}

const char* to_string(ApsKind k) {
  switch (k) {
    case ApsKind::Alf: return "ALF";
    case ApsKind::Lmcs: return "LMCS";
    case ApsKind::ScalingList: return "ScalingList";
  }
  return "?";
}

ApsKind aps_kind_from_string(const std::string& s) {
  if (s == "ALF") return ApsKind::Alf;
  if (s == "LMCS") return ApsKind::Lmcs;
  if (s == "ScalingList") return ApsKind::ScalingList;
  throw std::invalid_argument("unknown APS kind: " + s);
}

const char* to_string(ConstraintMode m) {
  return m == ConstraintMode::FullRpr ? "full_rpr" : "qp_switching_only";
}

int Representation::operating_index() const {
  if (rd_curve.points.empty()) {
    throw std::invalid_argument("representation " + id + " has no RD points");
  }
  const int last = static_cast<int>(rd_curve.points.size()) - 1;
  if (operating_point < 0) return last;
  if (operating_point > last) {
    throw std::invalid_argument("operating point out of range for " + id);
  }
  return operating_point;
}

const RdPoint& Representation::operating_rd_point() const {
  return rd_curve.points[operating_index()];
}

double Representation::avg_bitrate_kbps() const {
  return operating_rd_point().rate_kbps;
}

double Representation::steady_quality_db() const {
  return yuv_psnr(operating_rd_point());
}

void Ladder::validate_shape() const {
  if (representations.empty()) {
    throw std::invalid_argument("ladder has no representations");
  }
  if (!(frame_rate > 0.0)) {
    throw std::invalid_argument("frame rate must be positive");
  }
  const int length = representations.front().sequence.length;
  const size_t segments = representations.front().sequence.segments.size();
  for (const Representation& r : representations) {
    if (r.width <= 0 || r.height <= 0) {
      throw std::invalid_argument("representation " + r.id +
                                  " has non-positive dimensions");
    }
    if (r.gop_config.segment_length != segment_duration_pics) {
      throw std::invalid_argument(
          "representation " + r.id +
          " does not share the ladder segment duration");
    }
    if (r.sequence.length != length ||
        r.sequence.segments.size() != segments) {
      throw std::invalid_argument("representation " + r.id +
                                  " does not share the ladder sequence shape");
    }
    r.rd_curve.validate();
  }
  for (size_t i = 1; i < representations.size(); ++i) {
    if (representations[i - 1].avg_bitrate_kbps() >
        representations[i].avg_bitrate_kbps()) {
      throw std::invalid_argument(
          "representations must be ordered by bitrate ascending");
    }
  }
}

int Ladder::find_rep(const std::string& id) const {
  for (size_t i = 0; i < representations.size(); ++i) {
    if (representations[i].id == id) return static_cast<int>(i);
  }
  return -1;
}

const Representation& Ladder::rep(const std::string& id) const {
  const int i = find_rep(id);
  if (i < 0) throw std::invalid_argument("unknown representation id: " + id);
  return representations[i];
}

const SpsModel& Ladder::effective_sps(const Representation& r) const {
  return r.sps_override ? *r.sps_override : sps;
}

int Ladder::segment_count() const {
  if (representations.empty()) return 0;
  return static_cast<int>(representations.front().sequence.segments.size());
}

}  // namespace ogop

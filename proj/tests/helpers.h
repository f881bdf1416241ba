#pragma once

#include <string>
#include <vector>

#include "ogop/constraint_engine.h"
#include "ogop/ladder.h"

namespace ogop::testing {

// 4-point curve shaped like a constant-QP sweep; base_db sets the weighted
// quality at the third (default operating) point.
inline RdCurve make_rd_curve(double base_rate_kbps, double base_db) {
  RdCurve c;
  const double rates[4] = {0.28, 0.5, 1.0, 1.9};
  const double offsets[4] = {-4.7, -2.4, 0.0, 2.6};
  for (int i = 0; i < 4; ++i) {
    RdPoint p;
    p.rate_kbps = base_rate_kbps * rates[i];
    p.psnr_y = base_db + offsets[i];
    p.psnr_u = base_db + offsets[i] + 4.0;
    p.psnr_v = base_db + offsets[i] - 4.0;
    c.points.push_back(p);
  }
  return c;
}

struct RepSpec {
  std::string id;
  int width = 1920;
  int height = 1080;
  double bitrate_kbps = 6000.0;
  double quality_db = 38.0;
  IrapMode mode = IrapMode::ConstrainedOpenGop;
};

inline void attach_aps_model(Representation& rep, bool reset_at_irap) {
  rep.aps_events.clear();
  for (const Picture& p : rep.sequence.pictures) {
    if (p.poc == 0 || (reset_at_irap && is_irap(p.kind))) {
      rep.aps_events.push_back({0, p.poc, p.segment_index, ApsKind::Alf});
      rep.aps_events.push_back({1, p.poc, p.segment_index, ApsKind::Lmcs});
    }
  }
  for (Picture& p : rep.sequence.pictures) p.aps_refs = {0, 1};
}

inline Representation make_rep(const RepSpec& spec, const GopConfig& gop,
                               int length,
                               ConstraintMode cmode = ConstraintMode::FullRpr,
                               bool with_aps = true) {
  Representation r;
  r.id = spec.id;
  r.width = spec.width;
  r.height = spec.height;
  r.gop_config = gop;
  r.gop_config.irap_mode = spec.mode;
  r.rd_curve = make_rd_curve(spec.bitrate_kbps, spec.quality_db);
  r.operating_point = 2;
  r.sequence = build_sequence(r.gop_config, length);
  if (spec.mode == IrapMode::ConstrainedOpenGop) {
    r.sequence = apply_rasl_constraints(r.sequence, cmode);
  }
  if (with_aps) attach_aps_model(r, true);
  return r;
}

// 2160p/1080p/720p ladder mirroring the usual streaming tiers; steady
// qualities sit ~4.6 dB apart so default transition profiles fit unclamped.
inline Ladder make_ladder(int gop_size = 32, int irap_period = 64,
                          IrapMode mode = IrapMode::ConstrainedOpenGop,
                          int length = 0,
                          ConstraintMode cmode = ConstraintMode::FullRpr,
                          bool with_aps = true) {
  if (length == 0) length = 2 * irap_period + 1;
  GopConfig gop{gop_size, irap_period, mode, irap_period};
  Ladder ladder;
  ladder.segment_duration_pics = irap_period;
  ladder.frame_rate = 60.0;
  ladder.constraint_mode = cmode;
  ladder.representations.push_back(make_rep(
      {"720p", 1280, 720, 3000.0, 31.6, mode}, gop, length, cmode, with_aps));
  ladder.representations.push_back(make_rep(
      {"1080p", 1920, 1080, 6000.0, 36.2, mode}, gop, length, cmode, with_aps));
  ladder.representations.push_back(make_rep(
      {"2160p", 3840, 2160, 16000.0, 40.8, mode}, gop, length, cmode, with_aps));
  return ladder;
}

}  // namespace ogop::testing

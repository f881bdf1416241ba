/* Copyright (c) 2026 the ogopsim authors. All rights reserved.
 * Distributed under the BSD 3-Clause License (see LICENSE file). */

#include "ogop/switch_sim.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace ogop {

const char* outcome_name(const SwitchOutcome& outcome) {
  struct Namer {
    const char* operator()(const Seamless&) const { return "seamless"; }
    const char* operator()(const GracefulDrift&) const { return "graceful-drift"; }
    const char* operator()(const SevereArtefactRisk&) const { return "severe-artefact-risk"; }
    const char* operator()(const NonConformant&) const { return "non-conformant"; }
    const char* operator()(const DroppedPictures&) const { return "dropped-pictures"; }
    const char* operator()(const IllegalRprRatio&) const { return "illegal-rpr-ratio"; }
    const char* operator()(const NotASwitchPoint&) const { return "not-a-switch-point"; }
  };
  return std::visit(Namer{}, outcome);
}

std::pair<double, double> rpr_scaling_factors(const Representation& from_rep,
                                              const Representation& to_rep) {
  const double fw = from_rep.scaling_window_width();
  const double fh = from_rep.scaling_window_height();
  const double tw = to_rep.scaling_window_width();
  const double th = to_rep.scaling_window_height();
  if (fw <= 0 || fh <= 0 || tw <= 0 || th <= 0) {
    throw std::invalid_argument("scaling windows must have positive size");
  }
  return {tw / fw, th / fh};
}

bool rpr_legal(double h_factor, double v_factor) {
  if (!(h_factor > 0.0) || !(v_factor > 0.0)) {
    throw std::invalid_argument("scaling factors must be positive");
  }
  const auto ok = [](double f) { return f >= 0.5 && f <= 8.0; };
  return ok(h_factor) && ok(v_factor);
}

namespace {

// Conformance rules actually broken by taking this switch: misaligned SPSs
// break any switch, APS gaps in the target segment break the spliced
// bitstream, and with a resolution change the RPR conformance constraints
// apply to the target CRA's RASL set (CCLM is an encoder-side constraint
// only, so it stays out of this list and feeds the drift causes instead).
std::vector<RuleViolation> boundary_violations(const Ladder& ladder,
                                               const Representation& to,
                                               int boundary, bool res_change) {
  std::vector<RuleViolation> out = check_sps_alignment(ladder);

  for (RuleViolation& v :
       check_aps_self_containment(to.sequence, to.aps_events, to.id)) {
    if (v.segment_index == boundary) out.push_back(std::move(v));
  }

  if (res_change) {
    const CodedSequence& seq = to.sequence;
    const Segment& seg = seq.segments[boundary];
    const Picture& irap = seq.at_poc(seg.picture_pocs.front());
    for (int poc : leading_pictures(seq, irap.poc)) {
      const Picture& p = seq.at_poc(poc);
      if (p.kind != PictureKind::Rasl) continue;
      auto flag = [&](const char* rule, const char* what) {
        out.push_back({rule, to.id, poc, boundary,
                       std::string(what) +
                           " conflicts with RPR on RASL picture " +
                           std::to_string(poc)});
      };
      if (p.tools.dmvr) flag("rasl-dmvr", "DMVR");
      if (p.tools.bdof) flag("rasl-bdof", "BDOF");
      if (p.tools.prof) flag("rasl-prof", "PROF");
      if (p.tools.mc_wraparound) flag("rasl-wraparound", "MC wraparound");
      if ((p.tools.tmvp || p.tools.sbtmvp) && p.collocated_ref &&
          seq.at_poc(*p.collocated_ref).decode_idx < irap.decode_idx) {
        out.push_back({"rasl-collocated", to.id, poc, boundary,
                       "temporal motion prediction from the previous "
                       "segment variant"});
      }
    }
  }
  return out;
}

std::vector<DriftCategory> drift_causes(const CodedSequence& seq,
                                        const Picture& cra,
                                        const std::vector<int>& rasl_pocs) {
  std::set<DriftCategory> causes;
  for (int poc : rasl_pocs) {
    const Picture& p = seq.at_poc(poc);
    if (p.kind != PictureKind::Rasl) continue;
    if ((p.tools.tmvp || p.tools.sbtmvp) && p.collocated_ref &&
        seq.at_poc(*p.collocated_ref).decode_idx < cra.decode_idx) {
      causes.insert(DriftCategory::SyntaxToSyntax);
    }
    if (p.tools.dmvr || p.tools.cclm) {
      causes.insert(DriftCategory::SampleToSyntax);
    }
  }
  return {causes.begin(), causes.end()};
}

}  // namespace

SwitchOutcome evaluate_switch(const Ladder& ladder, const SwitchEvent& event,
                              const CodecCapabilities& caps) {
  const Representation& from = ladder.rep(event.from_rep);
  const Representation& to = ladder.rep(event.to_rep);
  const int k = event.boundary_segment_index;
  if (k < 0 || k >= ladder.segment_count()) {
    throw std::invalid_argument("boundary segment index out of range");
  }

  const CodedSequence& to_seq = to.sequence;
  const Segment& target = to_seq.segments[k];
  if (!target.starts_with_irap) return NotASwitchPoint{};

  // Continuation of the same representation is always seamless at an IRAP.
  if (from.id == to.id) return Seamless{};

  const Picture& irap = to_seq.at_poc(target.picture_pocs.front());
  if (irap.kind == PictureKind::Idr) return Seamless{};

  const bool res_change = from.width != to.width || from.height != to.height;
  if (res_change && !caps.supports_rpr) {
    return DroppedPictures{leading_pictures(to_seq, irap.poc)};
  }

  const auto [h, v] = rpr_scaling_factors(from, to);
  if (res_change && !rpr_legal(h, v)) return IllegalRprRatio{h, v};

  auto violations = boundary_violations(ladder, to, k, res_change);
  if (!violations.empty()) return NonConformant{std::move(violations)};

  const std::vector<int> affected = leading_pictures(to_seq, irap.poc);
  if (to_seq.config.irap_mode == IrapMode::OpenGop) {
    return SevereArtefactRisk{drift_causes(to_seq, irap, affected)};
  }

  const double from_q = from.steady_quality_db();
  const double to_q = to.steady_quality_db();
  const SwitchDirection dir =
      to_q >= from_q ? SwitchDirection::Up : SwitchDirection::Down;
  const TransitionProfile profile = transition_profile(
      dir, std::max(from_q, to_q), std::min(from_q, to_q),
      static_cast<int>(affected.size()), ladder.transition_params);
  return GracefulDrift{affected, profile.values_db, profile.clamped};
}

void BandwidthTrace::validate() const {
  if (points.empty()) throw std::invalid_argument("trace must not be empty");
  if (points.front().time_s > 0.0) {
    throw std::invalid_argument("trace must cover the session from time 0");
  }
  for (size_t i = 0; i < points.size(); ++i) {
    if (!(points[i].kbps > 0.0)) {
      throw std::invalid_argument("trace throughput must be positive");
    }
    if (i > 0 && !(points[i].time_s > points[i - 1].time_s)) {
      throw std::invalid_argument("trace times must strictly increase");
    }
  }
}

double BandwidthTrace::value_at(double time_s) const {
  double v = points.front().kbps;
  for (const TracePoint& p : points) {
    if (p.time_s <= time_s) v = p.kbps;
    else break;
  }
  return v;
}

std::vector<AbrDecision> run_abr(const Ladder& ladder,
                                 const BandwidthTrace& trace,
                                 const AbrConfig& config) {
  ladder.validate_shape();
  trace.validate();
  if (!(config.safety_margin > 0.0) || !(config.buffer_capacity_s > 0.0) ||
      config.panic_threshold_s < 0.0) {
    throw std::invalid_argument("invalid ABR configuration");
  }

  const double seg_dur_s = ladder.segment_duration_pics / ladder.frame_rate;
  const int n = ladder.segment_count();

  double level = config.initial_buffer_s < 0.0
                     ? config.buffer_capacity_s
                     : std::min(config.initial_buffer_s, config.buffer_capacity_s);
  double now_s = 0.0;
  double estimate = trace.value_at(0.0);

  std::vector<AbrDecision> decisions;
  decisions.reserve(n);
  for (int k = 0; k < n; ++k) {
    AbrDecision d;
    d.segment_index = k;
    d.throughput_estimate_kbps = estimate;
    d.panic = level < config.panic_threshold_s;

    const Representation* chosen = &ladder.representations.front();
    if (!d.panic) {
      for (const Representation& r : ladder.representations) {
        if (r.avg_bitrate_kbps() <= config.safety_margin * estimate) {
          chosen = &r;
        }
      }
    }
    d.rep_id = chosen->id;

    const double throughput = trace.value_at(now_s);
    d.download_s = seg_dur_s * chosen->avg_bitrate_kbps() / throughput;
    d.stall_s = std::max(0.0, d.download_s - level);
    level = std::max(level - d.download_s, 0.0) + seg_dur_s;
    level = std::min(level, config.buffer_capacity_s);
    now_s += d.download_s;
    estimate = throughput;

    d.buffer = {level, config.buffer_capacity_s};
    decisions.push_back(std::move(d));
  }
  return decisions;
}

namespace {

std::vector<std::string> effective_schedule(
    const Ladder& ladder, const std::vector<std::string>& schedule,
    const CodecCapabilities& caps, std::vector<SwitchRecord>& records) {
  std::vector<std::string> effective(schedule.size());
  effective[0] = schedule[0];
  for (size_t k = 1; k < schedule.size(); ++k) {
    SwitchRecord rec;
    rec.boundary_segment_index = static_cast<int>(k);
    rec.from_rep = effective[k - 1];
    rec.demanded_rep = schedule[k];
    rec.to_rep = schedule[k];
    rec.outcome = evaluate_switch(
        ladder, {static_cast<int>(k), rec.from_rep, rec.to_rep}, caps);

    if (std::holds_alternative<IllegalRprRatio>(rec.outcome) &&
        ladder.fallback_lowest_closed) {
      const Representation& lowest = ladder.representations.front();
      if (lowest.id != rec.to_rep &&
          lowest.sequence.config.irap_mode == IrapMode::ClosedGop) {
        rec.to_rep = lowest.id;
        rec.rewritten_to_fallback = true;
        rec.outcome = evaluate_switch(
            ladder, {static_cast<int>(k), rec.from_rep, rec.to_rep}, caps);
      }
    }
    effective[k] = rec.to_rep;
    records.push_back(std::move(rec));
  }
  return effective;
}

}  // namespace

SessionReport simulate_session(const Ladder& ladder,
                               const std::vector<std::string>& schedule,
                               const CodecCapabilities& caps) {
  ladder.validate_shape();
  const int n = ladder.segment_count();
  if (static_cast<int>(schedule.size()) != n) {
    throw std::invalid_argument("schedule length must equal segment count (" +
                                std::to_string(n) + ")");
  }
  for (const std::string& id : schedule) {
    if (ladder.find_rep(id) < 0) {
      throw std::invalid_argument("schedule names unknown representation: " + id);
    }
  }

  SessionReport report;
  const std::vector<std::string> effective =
      effective_schedule(ladder, schedule, caps, report.switches);

  // Baseline timeline: each picture plays at the steady quality of the
  // representation chosen for the segment that carries it. With mixed
  // open/closed structures the later segment wins overlapping POCs.
  const int length = ladder.representations.front().sequence.length;
  report.timeline.assign(length, TimelineEntry{});
  std::vector<bool> covered(length, false);
  for (int poc = 0; poc < length; ++poc) report.timeline[poc].poc = poc;
  for (int k = 0; k < n; ++k) {
    const Representation& r = ladder.rep(effective[k]);
    const double q = r.steady_quality_db();
    for (int poc : r.sequence.segments[k].picture_pocs) {
      TimelineEntry& e = report.timeline[poc];
      e.quality_db = q;
      e.rep_id = r.id;
      e.dropped = false;
      covered[poc] = true;
    }
  }
  for (int poc = 0; poc < length; ++poc) {
    if (!covered[poc]) report.timeline[poc].dropped = true;
  }

  // Overlay switch effects.
  for (const SwitchRecord& rec : report.switches) {
    if (const auto* drift = std::get_if<GracefulDrift>(&rec.outcome)) {
      for (size_t i = 0; i < drift->affected_pocs.size(); ++i) {
        TimelineEntry& e = report.timeline[drift->affected_pocs[i]];
        e.quality_db = drift->predicted_quality_db[i];
        e.rep_id = rec.to_rep;
        e.dropped = false;
      }
    } else if (const auto* dropped = std::get_if<DroppedPictures>(&rec.outcome)) {
      for (int poc : dropped->dropped_pocs) {
        report.timeline[poc].dropped = true;
      }
    }
  }

  // Summary statistics over the presented pictures.
  std::vector<double> presented;
  std::vector<int> poc_to_presented(length, -1);
  presented.reserve(length);
  for (const TimelineEntry& e : report.timeline) {
    if (e.dropped) continue;
    poc_to_presented[e.poc] = static_cast<int>(presented.size());
    presented.push_back(e.quality_db);
  }
  std::vector<std::vector<int>> windows;
  for (const SwitchRecord& rec : report.switches) {
    if (const auto* drift = std::get_if<GracefulDrift>(&rec.outcome)) {
      std::vector<int> window;
      for (int poc : drift->affected_pocs) {
        if (poc_to_presented[poc] >= 0) window.push_back(poc_to_presented[poc]);
      }
      windows.push_back(std::move(window));
    }
  }

  SessionSummary& s = report.summary;
  for (const SwitchRecord& rec : report.switches) {
    ++s.outcome_counts[outcome_name(rec.outcome)];
    if (rec.from_rep != rec.to_rep) ++s.switches_total;
  }
  if (!presented.empty()) {
    const SessionQuality q = session_quality(presented, windows);
    s.mean_quality_db = q.mean_db;
    s.min_quality_db = q.min_db;
    s.transition_means_db = q.transition_means_db;
  }
  s.dropped_pictures_total =
      length - static_cast<int>(presented.size());
  return report;
}

SessionReport simulate_abr_session(const Ladder& ladder,
                                   const BandwidthTrace& trace,
                                   const AbrConfig& config,
                                   const CodecCapabilities& caps) {
  std::vector<AbrDecision> decisions = run_abr(ladder, trace, config);
  std::vector<std::string> schedule;
  schedule.reserve(decisions.size());
  for (const AbrDecision& d : decisions) schedule.push_back(d.rep_id);

  SessionReport report = simulate_session(ladder, schedule, caps);
  double stalls = 0.0;
  for (const AbrDecision& d : decisions) stalls += d.stall_s;
  report.summary.stall_total_s = stalls;
  report.abr = std::move(decisions);
  return report;
}

}  // namespace ogop

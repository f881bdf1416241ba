/* Copyright (c) 2026 the ogopsim authors. All rights reserved.
 * Distributed under the BSD 3-Clause License (see LICENSE file). */

#pragma once

#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ogop/constraint_engine.h"
#include "ogop/ladder.h"

namespace ogop {

struct SwitchEvent {
  int boundary_segment_index = 0;
  std::string from_rep;
  std::string to_rep;  // equal ids mean continuation, not a switch
};

struct Seamless {};
struct GracefulDrift {
  std::vector<int> affected_pocs;           // the target CRA's leading pictures
  std::vector<double> predicted_quality_db; // presentation order, same size
  bool profile_clamped = false;
};
struct SevereArtefactRisk {
  std::vector<DriftCategory> causes;  // distinct, high-severity only
};
struct NonConformant {
  std::vector<RuleViolation> violations;
};
struct DroppedPictures {
  std::vector<int> dropped_pocs;
};
struct IllegalRprRatio {
  double h_factor = 0.0;
  double v_factor = 0.0;
};
struct NotASwitchPoint {};

using SwitchOutcome =
    std::variant<Seamless, GracefulDrift, SevereArtefactRisk, NonConformant,
                 DroppedPictures, IllegalRprRatio, NotASwitchPoint>;

const char* outcome_name(const SwitchOutcome& outcome);

/// Scaling factors a decoder would apply when predicting to_rep pictures
/// from from_rep reference pictures, per dimension.
std::pair<double, double> rpr_scaling_factors(const Representation& from_rep,
                                              const Representation& to_rep);

/// True iff both factors lie in [1/2, 8] (bounds inclusive): at most
/// eightfold upscaling and twofold downscaling per dimension.
bool rpr_legal(double h_factor, double v_factor);

/// Classifies one representation change at a segment boundary. Decision
/// cascade: boundary without an IRAP -> NotASwitchPoint; IDR target ->
/// Seamless; CRA target without RPR support across a resolution change ->
/// DroppedPictures; illegal scaling factors -> IllegalRprRatio; conformance
/// rules touching the boundary -> NonConformant; unconstrained open GOP ->
/// SevereArtefactRisk; constrained open GOP -> GracefulDrift.
SwitchOutcome evaluate_switch(const Ladder& ladder, const SwitchEvent& event,
                              const CodecCapabilities& caps);

struct TracePoint {
  double time_s = 0.0;
  double kbps = 0.0;
};

struct BandwidthTrace {
  std::vector<TracePoint> points;  // times strictly increasing, start at 0

  void validate() const;
  double value_at(double time_s) const;  // piecewise constant, extends last
};

struct BufferState {
  double level_s = 0.0;
  double capacity_s = 0.0;
};

struct AbrConfig {
  double safety_margin = 0.9;
  double panic_threshold_s = 4.0;
  double buffer_capacity_s = 30.0;
  double initial_buffer_s = -1.0;  // <0: start with a full buffer
};

struct AbrDecision {
  int segment_index = 0;
  std::string rep_id;
  BufferState buffer;  // after the segment download
  double throughput_estimate_kbps = 0.0;
  double download_s = 0.0;
  double stall_s = 0.0;
  bool panic = false;
};

/// Throughput-rule ABR with a panic rule: pick the highest bitrate within
/// safety_margin x estimated throughput, or the lowest representation when
/// the buffer has drained below the panic threshold. Downloads run
/// back-to-back against the trace; the estimate is the throughput observed
/// for the previous download.
std::vector<AbrDecision> run_abr(const Ladder& ladder,
                                 const BandwidthTrace& trace,
                                 const AbrConfig& config);

struct SwitchRecord {
  int boundary_segment_index = 0;
  std::string from_rep;
  std::string to_rep;        // after any fallback rewrite
  std::string demanded_rep;  // the originally scheduled target
  bool rewritten_to_fallback = false;
  SwitchOutcome outcome;
};

struct TimelineEntry {
  int poc = 0;
  double quality_db = 0.0;
  bool dropped = false;
  std::string rep_id;
};

struct SessionSummary {
  int switches_total = 0;  // boundaries where the representation changed
  std::map<std::string, int> outcome_counts;
  double mean_quality_db = 0.0;
  double min_quality_db = 0.0;
  int dropped_pictures_total = 0;
  double stall_total_s = 0.0;
  std::vector<double> transition_means_db;
};

struct SessionReport {
  std::vector<SwitchRecord> switches;
  std::vector<TimelineEntry> timeline;  // presentation order
  SessionSummary summary;
  std::vector<AbrDecision> abr;  // present when the schedule came from ABR
};

/// Plays a per-segment schedule through the ladder: every boundary gets a
/// SwitchRecord, the per-picture quality timeline carries steady-state
/// levels away from switches, transition profiles across GracefulDrift
/// RASL sets and gaps at DroppedPictures. Illegal down-switch demands are
/// rewritten to the lowest representation when the ladder declares the
/// closed-GOP fallback.
SessionReport simulate_session(const Ladder& ladder,
                               const std::vector<std::string>& schedule,
                               const CodecCapabilities& caps);

/// run_abr + simulate_session, with stall totals folded into the summary.
SessionReport simulate_abr_session(const Ladder& ladder,
                                   const BandwidthTrace& trace,
                                   const AbrConfig& config,
                                   const CodecCapabilities& caps);

}  // namespace ogop

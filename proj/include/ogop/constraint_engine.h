/* Copyright (c) 2026 the ogopsim authors. All rights reserved.
 * Distributed under the BSD 3-Clause License (see LICENSE file). */

#pragma once

#include <span>
#include <string>
#include <vector>

#include "ogop/gop_model.h"
#include "ogop/ladder.h"

namespace ogop {

enum class Tool { Mc, Amc, Prof, Bdof, Tmvp, Sbtmvp, Dmvr, Cclm, Lmcs, Aps };

Tool tool_from_string(const std::string& s);  // throws on unknown tool
const char* to_string(Tool t);

enum class DriftCategory {
  SampleToSample,  // graceful quality transition
  SyntaxToSyntax,  // propagating motion-syntax errors
  SampleToSyntax,  // parameters derived from drifted samples
  ParameterSet     // missing/mismatched APS, up to decoder crashes
};

const char* to_string(DriftCategory c);

enum class DriftSeverity { Low, High };

struct DriftInfo {
  DriftCategory category;
  DriftSeverity severity;
  std::string note;
};

/// Drift taxonomy of the inter-prediction tools at open-GOP switching.
DriftInfo drift_category(Tool tool);

struct RuleViolation {
  std::string rule_id;
  std::string rep_id;     // empty for single-sequence checks
  int poc = -1;           // -1 when the rule is not picture-scoped
  int segment_index = -1; // -1 when the rule is not segment-scoped
  std::string message;
  std::string severity = "error";

  bool operator==(const RuleViolation&) const = default;
};

struct ConformanceReport {
  std::vector<RuleViolation> violations;
  bool is_switchable = false;  // true iff violations is empty
};

/// First pillar: switching-safe RASL coding. For every CRA, the RASL set
/// gets DMVR, CCLM and wraparound disabled (plus BDOF/PROF in FullRpr
/// mode), collocated references are kept at or after the CRA in decode
/// order, and the first RASL in decode order is pinned to the CRA itself.
/// Non-RASL pictures and the config are untouched; a sequence without
/// RASL pictures comes back unchanged. Throws std::invalid_argument for
/// closed-GOP input.
CodedSequence apply_rasl_constraints(const CodedSequence& seq,
                                     ConstraintMode mode);

/// Pillar-1 checker over one sequence. rep_id only labels the violations.
std::vector<RuleViolation> check_rasl_tool_constraints(
    const CodedSequence& seq, ConstraintMode mode,
    const std::string& rep_id = {});

/// Second pillar: every picture from its segment's IRAP onward (decode
/// order) may only read APS ids whose latest carrier sits in the same
/// segment. Pictures decoding before the segment's IRAP are exempt, as are
/// segments without one. RASL offenders are flagged as decoder-crash risks.
std::vector<RuleViolation> check_aps_self_containment(
    const CodedSequence& seq, std::span<const ApsEvent> aps_events,
    const std::string& rep_id = {});

/// Third pillar: SPS alignment across all representations of the ladder.
std::vector<RuleViolation> check_sps_alignment(const Ladder& ladder);

/// All three pillars over every representation; per-representation checks
/// run in parallel (capped by OGOP_SIM_THREADS) and merge deterministically.
ConformanceReport validate_ladder(const Ladder& ladder);

}  // namespace ogop

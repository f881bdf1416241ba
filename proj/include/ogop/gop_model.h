/* Copyright (c) 2026 the ogopsim authors. All rights reserved.
 * Distributed under the BSD 3-Clause License (see LICENSE file). */

#pragma once

#include <optional>
#include <string>
#include <vector>

namespace ogop {

/// Picture classification following the VVC NAL unit taxonomy, reduced to
/// the kinds that matter for segment switching.
enum class PictureKind { Idr, Cra, Rasl, Radl, Trail };

enum class IrapMode {
  ClosedGop,          // IDR refresh points, no cross-segment references
  OpenGop,            // CRA refresh points, unconstrained RASL coding
  ConstrainedOpenGop  // CRA refresh points with switching-safe RASL coding
};

const char* to_string(PictureKind k);
const char* to_string(IrapMode m);

/// Per-picture inter-prediction tool usage. TMVP/SBTMVP stay enabled under
/// constrained coding (only the collocated picture is restricted); the
/// others are switched off on RASL pictures by the constraint engine.
/// mc_wraparound defaults to off: it targets 360-degree video, which this
/// model only tracks as a disabled feature.
struct ToolFlags {
  bool tmvp = true;
  bool sbtmvp = true;
  bool dmvr = true;
  bool bdof = true;
  bool prof = true;
  bool cclm = true;
  bool mc_wraparound = false;

  bool operator==(const ToolFlags&) const = default;
};

struct Picture {
  int poc = 0;         // presentation-order index
  int decode_idx = 0;  // decode-order index
  int tid = 0;         // temporal layer id
  PictureKind kind = PictureKind::Trail;
  std::vector<int> refs;             // POCs used for sample prediction
  std::optional<int> collocated_ref; // POC used for temporal motion-syntax prediction
  ToolFlags tools;
  std::vector<int> aps_refs;  // APS identifiers the picture reads
  int segment_index = -1;

  bool operator==(const Picture&) const = default;
};

struct GopConfig {
  int gop_size = 32;       // power of two, <= 32 (VVC DPB bound)
  int irap_period = 64;    // positive multiple of gop_size
  IrapMode irap_mode = IrapMode::OpenGop;
  int segment_length = 64; // pictures; multiple of gop_size, divides irap_period

  /// Throws std::invalid_argument naming the violated rule.
  void validate() const;

  bool operator==(const GopConfig&) const = default;
};

struct Segment {
  int index = 0;
  std::vector<int> picture_pocs;  // decode order
  bool starts_with_irap = false;
  int duration_pics = 0;

  bool operator==(const Segment&) const = default;
};

/// Structural model of one coded stream. Immutable after construction;
/// operations that "modify" a sequence return a transformed copy.
struct CodedSequence {
  GopConfig config;
  int length = 0;
  std::vector<Picture> pictures;  // indexed by POC
  std::vector<Segment> segments;

  const Picture& at_poc(int poc) const;

  bool operator==(const CodedSequence&) const = default;
};

struct StructureViolation {
  int poc = -1;
  std::string rule;
  std::string message;
};

/// Temporal layer of the picture at a given offset inside one GOP.
/// The GOP anchor (offset == gop_size) is the Tid 0 picture; each dyadic
/// refinement level adds one.
int tid_of(int offset_in_gop, int gop_size);

/// Decode order of the offsets 1..gop_size of one hierarchical GOP:
/// anchor first, then recursive midpoint expansion of each half-open
/// interval, lower halves before upper halves.
std::vector<int> build_decode_order(int gop_size);

/// Builds the full structural model: POC 0 is a lone IDR followed by
/// (length-1)/gop_size complete GOPs. IRAPs sit at every irap_period
/// POCs (IDR in closed mode, CRA otherwise); leading pictures of a CRA
/// are RASL. Closed mode restructures the GOP in front of each IDR so
/// that no leading pictures arise and no reference crosses the refresh.
CodedSequence build_sequence(const GopConfig& config, int length);

/// Checks every structural invariant; violations are data, not errors.
std::vector<StructureViolation> validate_structure(const CodedSequence& seq);

/// POCs of all pictures that follow the given IRAP in decode order but
/// precede it in presentation order, sorted by POC.
std::vector<int> leading_pictures(const CodedSequence& seq, int irap_poc);

/// POCs sorted by decode_idx.
std::vector<int> decode_order(const CodedSequence& seq);

/// POC of the most recent IRAP at or before the picture in decode order.
std::optional<int> associated_irap(const CodedSequence& seq, const Picture& pic);

bool is_irap(PictureKind k);

}  // namespace ogop

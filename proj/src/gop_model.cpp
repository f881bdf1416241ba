/* Copyright (c) 2026 the ogopsim authors. All rights reserved.
 * Distributed under the BSD 3-Clause License (see LICENSE file). */

#include "ogop/gop_model.h"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace ogop {

namespace {

bool is_pow2(int v) { return v > 0 && (v & (v - 1)) == 0; }

int log2_int(int v) {
  int l = 0;
  while (v > 1) {
    v >>= 1;
    ++l;
  }
  return l;
}

int trailing_zeros(int v) {
  int n = 0;
  while ((v & 1) == 0) {
    v >>= 1;
    ++n;
  }
  return n;
}

void expand_interval(int lo, int hi, std::vector<int>& out) {
  if (hi - lo <= 1) return;
  const int mid = (lo + hi) / 2;
  out.push_back(mid);
  expand_interval(lo, mid, out);
  expand_interval(mid, hi, out);
}

}  // namespace

const char* to_string(PictureKind k) {
  switch (k) {
    case PictureKind::Idr: return "IDR";
    case PictureKind::Cra: return "CRA";
    case PictureKind::Rasl: return "RASL";
    case PictureKind::Radl: return "RADL";
    case PictureKind::Trail: return "TRAIL";
  }
  return "?";
}

const char* to_string(IrapMode m) {
  switch (m) {
    case IrapMode::ClosedGop: return "closed";
    case IrapMode::OpenGop: return "open";
    case IrapMode::ConstrainedOpenGop: return "constrained";
  }
  return "?";
}

bool is_irap(PictureKind k) {
  return k == PictureKind::Idr || k == PictureKind::Cra;
}

void GopConfig::validate() const {
  if (!is_pow2(gop_size) || gop_size > 32) {
    throw std::invalid_argument(
        "gop_size must be a power of two no larger than 32, got " +
        std::to_string(gop_size));
  }
  if (irap_period <= 0 || irap_period % gop_size != 0) {
    throw std::invalid_argument(
        "irap_period must be a positive multiple of gop_size");
  }
  if (segment_length <= 0 || irap_period % segment_length != 0) {
    throw std::invalid_argument("segment_length must divide irap_period");
  }
  if (segment_length % gop_size != 0) {
    throw std::invalid_argument(
        "segment_length must be a multiple of gop_size");
  }
}

const Picture& CodedSequence::at_poc(int poc) const {
  if (poc < 0 || poc >= static_cast<int>(pictures.size())) {
    throw std::invalid_argument("POC out of range: " + std::to_string(poc));
  }
  return pictures[poc];
}

int tid_of(int offset_in_gop, int gop_size) {
  if (!is_pow2(gop_size)) {
    throw std::invalid_argument("gop_size must be a power of two, got " +
                                std::to_string(gop_size));
  }
  if (offset_in_gop < 1 || offset_in_gop > gop_size) {
    throw std::invalid_argument("offset_in_gop out of range 1..gop_size");
  }
  return log2_int(gop_size) - trailing_zeros(offset_in_gop);
}

std::vector<int> build_decode_order(int gop_size) {
  if (!is_pow2(gop_size)) {
    throw std::invalid_argument("gop_size must be a power of two, got " +
                                std::to_string(gop_size));
  }
  std::vector<int> order;
  order.reserve(gop_size);
  order.push_back(gop_size);  // anchor
  expand_interval(0, gop_size, order);
  return order;
}

namespace {

// Dyadic bracket references of a non-anchor offset: the endpoints of the
// half-open interval it is the midpoint of.
struct Brackets {
  int below;
  int above;
};

Brackets brackets_of(int offset) {
  const int lowbit = offset & (-offset);
  return {offset - lowbit, offset + lowbit};
}

ToolFlags default_tools(PictureKind kind) {
  ToolFlags t;
  if (is_irap(kind)) {
    // Intra-only pictures: inter tools do not apply, CCLM may.
    t.tmvp = t.sbtmvp = t.dmvr = t.bdof = t.prof = false;
    t.cclm = true;
  }
  return t;
}

std::optional<int> pick_collocated(const std::vector<Picture>& by_poc,
                                   const std::vector<int>& refs) {
  if (refs.empty()) return std::nullopt;
  int best = refs.front();
  for (int r : refs) {
    const int rt = by_poc[r].tid;
    const int bt = by_poc[best].tid;
    if (rt < bt || (rt == bt && r < best)) best = r;
  }
  return best;
}

}  // namespace

CodedSequence build_sequence(const GopConfig& config, int length) {
  config.validate();
  if (length < 1 || (length - 1) % config.gop_size != 0) {
    throw std::invalid_argument(
        "length must be 1 (the leading IDR) plus a whole number of GOPs");
  }

  CodedSequence seq;
  seq.config = config;
  seq.length = length;
  seq.pictures.resize(length);

  const int g = config.gop_size;
  const bool closed = config.irap_mode == IrapMode::ClosedGop;
  int next_decode = 0;

  auto emit = [&](int poc, PictureKind kind, int tid, std::vector<int> refs) {
    Picture& p = seq.pictures[poc];
    p.poc = poc;
    p.decode_idx = next_decode++;
    p.tid = tid;
    p.kind = kind;
    p.refs = std::move(refs);
    p.tools = default_tools(kind);
    p.collocated_ref = pick_collocated(seq.pictures, p.refs);
  };

  emit(0, PictureKind::Idr, 0, {});

  const std::vector<int> gop_order = build_decode_order(g);
  const int num_gops = (length - 1) / g;
  for (int gi = 0; gi < num_gops; ++gi) {
    const int gop_start = gi * g;
    const int anchor_poc = gop_start + g;
    const bool anchor_is_irap = anchor_poc % config.irap_period == 0;

    if (closed && anchor_is_irap) {
      // The refresh picture must not acquire leading pictures, so the GOP
      // in front of it decodes first as a truncated dyadic tail whose
      // upper brackets never reach the IDR.
      for (int offset : gop_order) {
        if (offset == g) continue;
        const auto [below, above] = brackets_of(offset);
        std::vector<int> refs{gop_start + below};
        if (above < g) refs.push_back(gop_start + above);
        emit(gop_start + offset, PictureKind::Trail, tid_of(offset, g),
             std::move(refs));
      }
      emit(anchor_poc, PictureKind::Idr, 0, {});
      continue;
    }

    for (int offset : gop_order) {
      const int poc = gop_start + offset;
      if (offset == g) {
        if (anchor_is_irap) {
          emit(poc, PictureKind::Cra, 0, {});
        } else {
          emit(poc, PictureKind::Trail, 0, {gop_start});
        }
      } else {
        const auto [below, above] = brackets_of(offset);
        const PictureKind kind =
            anchor_is_irap ? PictureKind::Rasl : PictureKind::Trail;
        emit(poc, kind, tid_of(offset, g), {gop_start + below, gop_start + above});
      }
    }
  }

  // Segment boundaries sit in decode order immediately before every picture
  // whose POC is a positive multiple of segment_length.
  std::vector<int> order = decode_order(seq);
  std::set<int> boundary_positions;
  for (int poc = config.segment_length; poc < length;
       poc += config.segment_length) {
    boundary_positions.insert(seq.pictures[poc].decode_idx);
  }
  int seg_index = 0;
  Segment current;
  current.index = 0;
  for (int pos = 0; pos < length; ++pos) {
    if (pos > 0 && boundary_positions.count(pos)) {
      current.duration_pics = static_cast<int>(current.picture_pocs.size());
      seq.segments.push_back(std::move(current));
      current = Segment{};
      current.index = ++seg_index;
    }
    const int poc = order[pos];
    if (current.picture_pocs.empty()) {
      current.starts_with_irap = is_irap(seq.pictures[poc].kind);
    }
    current.picture_pocs.push_back(poc);
    seq.pictures[poc].segment_index = seg_index;
  }
  current.duration_pics = static_cast<int>(current.picture_pocs.size());
  seq.segments.push_back(std::move(current));

  return seq;
}

std::vector<int> decode_order(const CodedSequence& seq) {
  std::vector<int> order(seq.pictures.size(), -1);
  for (const Picture& p : seq.pictures) {
    if (p.decode_idx >= 0 && p.decode_idx < static_cast<int>(order.size())) {
      order[p.decode_idx] = p.poc;
    }
  }
  return order;
}

std::vector<int> leading_pictures(const CodedSequence& seq, int irap_poc) {
  const Picture& irap = seq.at_poc(irap_poc);
  std::vector<int> out;
  for (const Picture& p : seq.pictures) {
    if (p.decode_idx > irap.decode_idx && p.poc < irap_poc) {
      out.push_back(p.poc);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<int> associated_irap(const CodedSequence& seq, const Picture& pic) {
  std::optional<int> best;
  int best_idx = -1;
  for (const Picture& p : seq.pictures) {
    if (is_irap(p.kind) && p.decode_idx <= pic.decode_idx &&
        p.decode_idx > best_idx) {
      best = p.poc;
      best_idx = p.decode_idx;
    }
  }
  return best;
}

namespace {

void check_leading_rules(const CodedSequence& seq,
                         std::vector<StructureViolation>& out) {
  for (const Picture& p : seq.pictures) {
    const auto irap_poc = associated_irap(seq, p);
    const bool is_leading =
        irap_poc.has_value() && p.poc < *irap_poc &&
        p.decode_idx > seq.at_poc(*irap_poc).decode_idx;
    const bool leading_kind =
        p.kind == PictureKind::Rasl || p.kind == PictureKind::Radl;
    if (leading_kind && !is_leading) {
      out.push_back({p.poc, "leading-position",
                     "RASL/RADL picture is not a leading picture of any IRAP"});
    }
    if (is_leading && !leading_kind) {
      out.push_back({p.poc, "leading-kind",
                     "leading picture must be RASL or RADL, got " +
                         std::string(to_string(p.kind))});
    }
    if (p.kind == PictureKind::Rasl && irap_poc.has_value() &&
        seq.at_poc(*irap_poc).kind != PictureKind::Cra) {
      out.push_back({p.poc, "rasl-association",
                     "RASL picture associated with a non-CRA IRAP"});
    }
  }
}

}  // namespace

std::vector<StructureViolation> validate_structure(const CodedSequence& seq) {
  std::vector<StructureViolation> out;
  const int n = seq.length;
  if (n != static_cast<int>(seq.pictures.size())) {
    out.push_back({-1, "length", "picture count differs from declared length"});
    return out;
  }
  if (n == 0) return out;

  if (seq.pictures[0].kind != PictureKind::Idr) {
    out.push_back({0, "poc-zero-idr", "stream must start with an IDR"});
  }

  // decode_idx is a permutation of 0..n-1
  std::vector<int> seen(n, 0);
  for (const Picture& p : seq.pictures) {
    if (p.decode_idx < 0 || p.decode_idx >= n) {
      out.push_back({p.poc, "decode-permutation", "decode_idx out of range"});
    } else {
      ++seen[p.decode_idx];
    }
  }
  for (int i = 0; i < n; ++i) {
    if (seen[i] != 1) {
      out.push_back({-1, "decode-permutation",
                     "decode position " + std::to_string(i) + " used " +
                         std::to_string(seen[i]) + " times"});
    }
  }

  // IRAP cadence
  for (const Picture& p : seq.pictures) {
    const bool should_be_irap = p.poc % seq.config.irap_period == 0;
    if (should_be_irap != is_irap(p.kind)) {
      out.push_back({p.poc, "irap-period",
                     should_be_irap ? "expected an IRAP at this POC"
                                    : "unexpected IRAP at this POC"});
    }
  }

  // Reference well-formedness
  for (const Picture& p : seq.pictures) {
    auto check_ref = [&](int r, const char* what) {
      if (r < 0 || r >= n) {
        out.push_back({p.poc, "ref-range",
                       std::string(what) + " POC out of range: " +
                           std::to_string(r)});
        return;
      }
      const Picture& ref = seq.pictures[r];
      if (ref.decode_idx >= p.decode_idx) {
        out.push_back({p.poc, "ref-decode-order",
                       std::string(what) + " " + std::to_string(r) +
                           " does not precede in decode order"});
      }
      if (ref.tid > p.tid) {
        out.push_back({p.poc, "ref-tid",
                       std::string(what) + " " + std::to_string(r) +
                           " has higher Tid than the referencing picture"});
      }
    };
    for (int r : p.refs) check_ref(r, "reference");
    if (p.collocated_ref) check_ref(*p.collocated_ref, "collocated reference");
    if (p.kind == PictureKind::Idr && !p.refs.empty()) {
      out.push_back({p.poc, "idr-refs-empty", "IDR picture carries references"});
    }
  }

  check_leading_rules(seq, out);

  // DPB reset: nothing decoding after an IDR may reference anything
  // decoding before it.
  for (const Picture& idr : seq.pictures) {
    if (idr.kind != PictureKind::Idr) continue;
    for (const Picture& p : seq.pictures) {
      if (p.decode_idx <= idr.decode_idx) continue;
      auto crosses = [&](int r) {
        return r >= 0 && r < n && seq.pictures[r].decode_idx < idr.decode_idx;
      };
      for (int r : p.refs) {
        if (crosses(r)) {
          out.push_back({p.poc, "idr-crossing",
                         "reference " + std::to_string(r) +
                             " crosses the IDR at POC " +
                             std::to_string(idr.poc)});
        }
      }
      if (p.collocated_ref && crosses(*p.collocated_ref)) {
        out.push_back({p.poc, "idr-crossing",
                       "collocated reference crosses the IDR at POC " +
                           std::to_string(idr.poc)});
      }
    }
  }

  // Segment partition in decode order
  std::vector<int> concat;
  for (size_t i = 0; i < seq.segments.size(); ++i) {
    const Segment& s = seq.segments[i];
    if (s.index != static_cast<int>(i)) {
      out.push_back({-1, "segment-index", "segment indices not consecutive"});
    }
    if (!s.picture_pocs.empty()) {
      const Picture& first = seq.at_poc(s.picture_pocs.front());
      if (s.starts_with_irap != is_irap(first.kind)) {
        out.push_back({first.poc, "segment-irap-flag",
                       "starts_with_irap flag disagrees with first picture"});
      }
    }
    if (s.duration_pics != static_cast<int>(s.picture_pocs.size())) {
      out.push_back({-1, "segment-duration",
                     "duration_pics disagrees with picture count"});
    }
    for (int poc : s.picture_pocs) {
      concat.push_back(poc);
      if (poc >= 0 && poc < n &&
          seq.pictures[poc].segment_index != static_cast<int>(i)) {
        out.push_back({poc, "segment-membership",
                       "picture's segment_index disagrees with the partition"});
      }
    }
  }
  if (concat != decode_order(seq)) {
    out.push_back({-1, "segment-partition",
                   "segments do not partition the decode-order picture list"});
  }

  return out;
}

}  // namespace ogop

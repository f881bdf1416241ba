/* Copyright (c) 2026 the ogopsim authors. All rights reserved.
 * Distributed under the BSD 3-Clause License (see LICENSE file). */

#include "ogop/constraint_engine.h"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <map>
#include <stdexcept>
#include <thread>

namespace ogop {

Tool tool_from_string(const std::string& s) {
  static const std::map<std::string, Tool> names = {
      {"MC", Tool::Mc},     {"AMC", Tool::Amc},       {"PROF", Tool::Prof},
      {"BDOF", Tool::Bdof}, {"TMVP", Tool::Tmvp},     {"SBTMVP", Tool::Sbtmvp},
      {"DMVR", Tool::Dmvr}, {"CCLM", Tool::Cclm},     {"LMCS", Tool::Lmcs},
      {"APS", Tool::Aps}};
  const auto it = names.find(s);
  if (it == names.end()) throw std::invalid_argument("unknown tool: " + s);
  return it->second;
}

const char* to_string(Tool t) {
  switch (t) {
    case Tool::Mc: return "MC";
    case Tool::Amc: return "AMC";
    case Tool::Prof: return "PROF";
    case Tool::Bdof: return "BDOF";
    case Tool::Tmvp: return "TMVP";
    case Tool::Sbtmvp: return "SBTMVP";
    case Tool::Dmvr: return "DMVR";
    case Tool::Cclm: return "CCLM";
    case Tool::Lmcs: return "LMCS";
    case Tool::Aps: return "APS";
  }
  return "?";
}

const char* to_string(DriftCategory c) {
  switch (c) {
    case DriftCategory::SampleToSample: return "sample-to-sample";
    case DriftCategory::SyntaxToSyntax: return "syntax-to-syntax";
    case DriftCategory::SampleToSyntax: return "sample-to-syntax";
    case DriftCategory::ParameterSet: return "parameter-set";
  }
  return "?";
}

DriftInfo drift_category(Tool tool) {
  switch (tool) {
    case Tool::Mc:
    case Tool::Amc:
    case Tool::Prof:
    case Tool::Bdof:
      return {DriftCategory::SampleToSample, DriftSeverity::Low,
              "graceful quality transition across the RASL set"};
    case Tool::Tmvp:
    case Tool::Sbtmvp:
      return {DriftCategory::SyntaxToSyntax, DriftSeverity::High,
              "most visible artefacts in open GOP switching"};
    case Tool::Dmvr:
      return {DriftCategory::SampleToSyntax, DriftSeverity::High,
              "refined motion vectors derived from drifted samples"};
    case Tool::Cclm:
      return {DriftCategory::SampleToSyntax, DriftSeverity::High,
              "model parameters from sample extrema; a single outlier "
              "sample can cause severe drift"};
    case Tool::Lmcs:
      return {DriftCategory::SampleToSyntax, DriftSeverity::High,
              "mitigated: scaling parameters average over many luma samples"};
    case Tool::Aps:
      return {DriftCategory::ParameterSet, DriftSeverity::High,
              "missing or mismatched parameter sets; crashes "
              "non-error-resilient decoders"};
  }
  throw std::invalid_argument("unknown tool");
}

namespace {

bool open_mode(IrapMode m) {
  return m == IrapMode::OpenGop || m == IrapMode::ConstrainedOpenGop;
}

// RASL pictures grouped under their associated CRA, each group sorted by
// decode order.
std::map<int, std::vector<int>> rasl_sets(const CodedSequence& seq) {
  std::map<int, std::vector<int>> sets;
  for (const Picture& p : seq.pictures) {
    if (p.kind != PictureKind::Rasl) continue;
    const auto cra = associated_irap(seq, p);
    if (cra) sets[*cra].push_back(p.poc);
  }
  for (auto& [cra, pocs] : sets) {
    std::sort(pocs.begin(), pocs.end(), [&](int a, int b) {
      return seq.at_poc(a).decode_idx < seq.at_poc(b).decode_idx;
    });
  }
  return sets;
}

}  // namespace

CodedSequence apply_rasl_constraints(const CodedSequence& seq,
                                     ConstraintMode mode) {
  if (!open_mode(seq.config.irap_mode)) {
    throw std::invalid_argument(
        "closed-GOP sequences have no RASL pictures to constrain");
  }
  CodedSequence out = seq;
  for (auto& [cra_poc, pocs] : rasl_sets(seq)) {
    const Picture& cra = seq.at_poc(cra_poc);
    bool first_in_decode = true;
    for (int poc : pocs) {
      Picture& p = out.pictures[poc];
      p.tools.dmvr = false;
      p.tools.cclm = false;
      p.tools.mc_wraparound = false;
      if (mode == ConstraintMode::FullRpr) {
        p.tools.bdof = false;
        p.tools.prof = false;
      }
      if (first_in_decode) {
        p.collocated_ref = cra_poc;
        first_in_decode = false;
      } else if (p.collocated_ref &&
                 seq.at_poc(*p.collocated_ref).decode_idx < cra.decode_idx) {
        // Re-point to the bracket that decodes at or after the CRA; for a
        // dyadic RASL that is always the upper bracket.
        std::optional<int> replacement;
        for (int r : p.refs) {
          if (seq.at_poc(r).decode_idx >= cra.decode_idx) {
            replacement = r;
            break;
          }
        }
        p.collocated_ref = replacement ? replacement : cra_poc;
      }
    }
  }
  return out;
}

std::vector<RuleViolation> check_rasl_tool_constraints(
    const CodedSequence& seq, ConstraintMode mode, const std::string& rep_id) {
  std::vector<RuleViolation> out;
  if (!open_mode(seq.config.irap_mode)) return out;

  for (const auto& [cra_poc, pocs] : rasl_sets(seq)) {
    const int cra_of_set = cra_poc;
    const Picture& cra = seq.at_poc(cra_of_set);
    for (int poc : pocs) {
      const Picture& p = seq.at_poc(poc);
      auto flag = [&](const char* rule, const char* what) {
        out.push_back({rule, rep_id, poc, p.segment_index,
                       std::string(what) + " enabled on RASL picture " +
                           std::to_string(poc) + " of CRA " +
                           std::to_string(cra_of_set)});
      };
      if (p.tools.dmvr) flag("rasl-dmvr", "DMVR");
      if (p.tools.cclm) flag("rasl-cclm", "CCLM");
      if (p.tools.mc_wraparound) flag("rasl-wraparound", "MC wraparound");
      if (mode == ConstraintMode::FullRpr) {
        if (p.tools.bdof) flag("rasl-bdof", "BDOF");
        if (p.tools.prof) flag("rasl-prof", "PROF");
      }
      if ((p.tools.tmvp || p.tools.sbtmvp) && p.collocated_ref &&
          seq.at_poc(*p.collocated_ref).decode_idx < cra.decode_idx) {
        out.push_back({"rasl-collocated", rep_id, poc, p.segment_index,
                       "collocated reference " +
                           std::to_string(*p.collocated_ref) +
                           " precedes CRA " + std::to_string(cra_poc) +
                           " in decode order"});
      }
    }
  }
  return out;
}

std::vector<RuleViolation> check_aps_self_containment(
    const CodedSequence& seq, std::span<const ApsEvent> aps_events,
    const std::string& rep_id) {
  std::vector<RuleViolation> out;

  // Per-segment IRAP decode position, if any.
  std::vector<int> irap_decode_idx(seq.segments.size(), -1);
  for (const Picture& p : seq.pictures) {
    if (is_irap(p.kind) && p.segment_index >= 0 &&
        p.segment_index < static_cast<int>(irap_decode_idx.size())) {
      int& slot = irap_decode_idx[p.segment_index];
      if (slot < 0 || p.decode_idx < slot) slot = p.decode_idx;
    }
  }

  // Carrier events sorted by the decode position of the carrying picture.
  struct Carrier {
    int decode_idx;
    int segment_index;
    int poc;
  };
  std::map<int, std::vector<Carrier>> carriers;  // aps_id -> sorted carriers
  for (const ApsEvent& e : aps_events) {
    const Picture& host = seq.at_poc(e.carried_in_poc);
    carriers[e.aps_id].push_back({host.decode_idx, host.segment_index, host.poc});
  }
  for (auto& [id, list] : carriers) {
    std::sort(list.begin(), list.end(),
              [](const Carrier& a, const Carrier& b) {
                return a.decode_idx < b.decode_idx;
              });
  }

  std::vector<const Picture*> by_decode(seq.pictures.size());
  for (const Picture& p : seq.pictures) by_decode[p.decode_idx] = &p;

  for (const Picture* pp : by_decode) {
    const Picture& p = *pp;
    if (p.aps_refs.empty()) continue;
    const int seg = p.segment_index;
    if (seg < 0 || irap_decode_idx[seg] < 0) continue;  // no IRAP: exempt
    if (p.decode_idx < irap_decode_idx[seg]) continue;  // before the IRAP
    for (int aps_id : p.aps_refs) {
      const auto it = carriers.find(aps_id);
      const Carrier* latest = nullptr;
      if (it != carriers.end()) {
        for (const Carrier& c : it->second) {
          if (c.decode_idx <= p.decode_idx) latest = &c;
          else break;
        }
      }
      const bool crash_risk = p.kind == PictureKind::Rasl;
      if (!latest) {
        out.push_back({"aps-missing", rep_id, p.poc, seg,
                       "picture reads APS " + std::to_string(aps_id) +
                           " that was never carried",
                       crash_risk ? "decoder-crash risk after switch"
                                  : "error"});
      } else if (latest->segment_index != seg) {
        out.push_back({"aps-cross-segment", rep_id, p.poc, seg,
                       "picture reads APS " + std::to_string(aps_id) +
                           " last carried in segment " +
                           std::to_string(latest->segment_index) +
                           " (POC " + std::to_string(latest->poc) + ")",
                       crash_risk ? "decoder-crash risk after switch"
                                  : "error"});
      }
    }
  }
  return out;
}

std::vector<RuleViolation> check_sps_alignment(const Ladder& ladder) {
  if (ladder.representations.empty()) {
    throw std::invalid_argument("ladder has no representations");
  }
  std::vector<RuleViolation> out;

  int max_w = 0, max_h = 0;
  for (const Representation& r : ladder.representations) {
    max_w = std::max(max_w, r.width);
    max_h = std::max(max_h, r.height);
  }
  const int required_level =
      min_level_for(static_cast<std::int64_t>(max_w) * max_h,
                    ladder.level_table);

  const SpsModel& ref = ladder.sps;
  for (const Representation& r : ladder.representations) {
    const SpsModel& sps = ladder.effective_sps(r);
    auto flag = [&](const char* rule, const std::string& message) {
      out.push_back({rule, r.id, -1, -1, message});
    };
    if (sps.chroma_format != ref.chroma_format) {
      flag("sps-field-mismatch",
           std::string("chroma format ") + to_string(sps.chroma_format) +
               " differs from the ladder SPS " + to_string(ref.chroma_format));
    }
    if (sps.bit_depth != ref.bit_depth) {
      flag("sps-field-mismatch",
           "bit depth " + std::to_string(sps.bit_depth) +
               " differs from the ladder SPS " + std::to_string(ref.bit_depth));
    }
    if (sps.ctu_size != ref.ctu_size) {
      flag("sps-field-mismatch",
           "CTU size " + std::to_string(sps.ctu_size) +
               " differs from the ladder SPS " + std::to_string(ref.ctu_size));
    }
    if (sps.max_width < max_w || sps.max_height < max_h) {
      flag("sps-max-resolution",
           "SPS max size " + std::to_string(sps.max_width) + "x" +
               std::to_string(sps.max_height) +
               " does not cover the ladder maximum " + std::to_string(max_w) +
               "x" + std::to_string(max_h));
    }
    if (!sps.rpr_enabled) {
      flag("sps-rpr-disabled", "reference picture resampling is disabled");
    }
    if (!sps.res_change_allowed) {
      flag("sps-res-change-disallowed",
           "resolution change within the CLVS is disallowed");
    }
    if (sps.gci_no_res_change) {
      flag("sps-gci-res-change",
           "general constraint flag forbids resolution change");
    }
    if (sps.subpictures_enabled) {
      flag("sps-subpictures",
           "independently coded subpictures are incompatible with RPR");
    }
    if (sps.level_idc < required_level) {
      flag("sps-level", "level_idc " + std::to_string(sps.level_idc) +
                            " below the minimum " +
                            std::to_string(required_level) +
                            " for the ladder maximum resolution");
    }
  }
  return out;
}

namespace {

int worker_count() {
  if (const char* env = std::getenv("OGOP_SIM_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// Runs f(i) for i in [0, n) on a bounded pool; each slot owns its output,
// so the merge order is fixed regardless of scheduling.
template <typename F>
void parallel_index(int n, F&& f) {
  const int workers = std::min(worker_count(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) f(i);
    });
  }
  for (std::thread& t : pool) t.join();
}

}  // namespace

ConformanceReport validate_ladder(const Ladder& ladder) {
  ladder.validate_shape();

  const int n = static_cast<int>(ladder.representations.size());
  std::vector<std::vector<RuleViolation>> per_rep(n);
  parallel_index(n, [&](int i) {
    const Representation& r = ladder.representations[i];
    auto v = check_rasl_tool_constraints(r.sequence, ladder.constraint_mode, r.id);
    auto aps = check_aps_self_containment(r.sequence, r.aps_events, r.id);
    v.insert(v.end(), aps.begin(), aps.end());
    per_rep[i] = std::move(v);
  });

  ConformanceReport report;
  for (auto& v : per_rep) {
    report.violations.insert(report.violations.end(), v.begin(), v.end());
  }
  auto sps = check_sps_alignment(ladder);
  report.violations.insert(report.violations.end(), sps.begin(), sps.end());
  report.is_switchable = report.violations.empty();
  return report;
}

}  // namespace ogop

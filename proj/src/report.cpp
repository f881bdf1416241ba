/* Copyright (c) 2026 the ogopsim authors. All rights reserved.
 * Distributed under the BSD 3-Clause License (see LICENSE file). */

#include "ogop/report.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ogop {

const char* tool_version() { return "0.1.0"; }

std::string format_sig(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

double round_sig(double v, int digits) {
  if (!std::isfinite(v)) return v;
  return std::strtod(format_sig(v, digits).c_str(), nullptr);
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  char hex[32];
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(fnv1a64(buf.str())));
  return hex;
}

namespace {

OrderedJson violation_json(const RuleViolation& v) {
  OrderedJson j;
  j["rule_id"] = v.rule_id;
  OrderedJson loc;
  if (!v.rep_id.empty()) loc["representation"] = v.rep_id;
  if (v.poc >= 0) loc["poc"] = v.poc;
  if (v.segment_index >= 0) loc["segment"] = v.segment_index;
  j["location"] = std::move(loc);
  j["message"] = v.message;
  j["severity"] = v.severity;
  return j;
}

std::string location_text(const RuleViolation& v) {
  std::string s;
  if (!v.rep_id.empty()) s += v.rep_id;
  if (v.poc >= 0) s += (s.empty() ? "" : " ") + std::string("poc=") + std::to_string(v.poc);
  if (v.segment_index >= 0) {
    s += (s.empty() ? "" : " ") + std::string("segment=") + std::to_string(v.segment_index);
  }
  return s.empty() ? "-" : s;
}

}  // namespace

OrderedJson conformance_json(const ConformanceReport& report,
                             const std::vector<std::string>& warnings) {
  OrderedJson j;
  j["is_switchable"] = report.is_switchable;
  j["violations"] = OrderedJson::array();
  for (const RuleViolation& v : report.violations) {
    j["violations"].push_back(violation_json(v));
  }
  j["warnings"] = OrderedJson::array();
  for (const std::string& w : warnings) j["warnings"].push_back(w);
  return j;
}

std::string conformance_text(const ConformanceReport& report,
                             const std::vector<std::string>& warnings) {
  std::ostringstream out;
  for (const RuleViolation& v : report.violations) {
    out << v.severity << " " << v.rule_id << " [" << location_text(v) << "] "
        << v.message << "\n";
  }
  for (const std::string& w : warnings) {
    out << "warning " << w << "\n";
  }
  out << (report.is_switchable ? "ladder is switchable"
                               : "ladder is NOT switchable")
      << " (" << report.violations.size() << " violation"
      << (report.violations.size() == 1 ? "" : "s") << ")\n";
  return out.str();
}

OrderedJson outcome_json(const SwitchOutcome& outcome) {
  OrderedJson j;
  j["outcome"] = outcome_name(outcome);
  if (const auto* drift = std::get_if<GracefulDrift>(&outcome)) {
    j["affected_pocs"] = drift->affected_pocs;
    OrderedJson series = OrderedJson::array();
    for (double v : drift->predicted_quality_db) series.push_back(round_sig(v));
    j["predicted_quality_db"] = std::move(series);
    j["profile_clamped"] = drift->profile_clamped;
  } else if (const auto* severe = std::get_if<SevereArtefactRisk>(&outcome)) {
    OrderedJson causes = OrderedJson::array();
    for (DriftCategory c : severe->causes) causes.push_back(to_string(c));
    j["causes"] = std::move(causes);
  } else if (const auto* nc = std::get_if<NonConformant>(&outcome)) {
    OrderedJson vs = OrderedJson::array();
    for (const RuleViolation& v : nc->violations) vs.push_back(violation_json(v));
    j["violations"] = std::move(vs);
  } else if (const auto* dropped = std::get_if<DroppedPictures>(&outcome)) {
    j["dropped_pocs"] = dropped->dropped_pocs;
  } else if (const auto* illegal = std::get_if<IllegalRprRatio>(&outcome)) {
    j["h_factor"] = round_sig(illegal->h_factor);
    j["v_factor"] = round_sig(illegal->v_factor);
  }
  return j;
}

OrderedJson session_json(const SessionReport& report) {
  OrderedJson j;

  OrderedJson switches = OrderedJson::array();
  for (const SwitchRecord& rec : report.switches) {
    OrderedJson r;
    r["boundary_segment"] = rec.boundary_segment_index;
    r["from"] = rec.from_rep;
    r["to"] = rec.to_rep;
    if (rec.rewritten_to_fallback) {
      r["demanded"] = rec.demanded_rep;
      r["rewritten_to_fallback"] = true;
    }
    r.update(outcome_json(rec.outcome));
    switches.push_back(std::move(r));
  }
  j["switches"] = std::move(switches);

  if (!report.abr.empty()) {
    OrderedJson abr = OrderedJson::array();
    for (const AbrDecision& d : report.abr) {
      OrderedJson a;
      a["segment"] = d.segment_index;
      a["rep_id"] = d.rep_id;
      a["throughput_estimate_kbps"] = round_sig(d.throughput_estimate_kbps);
      a["download_s"] = round_sig(d.download_s);
      a["buffer_level_s"] = round_sig(d.buffer.level_s);
      a["stall_s"] = round_sig(d.stall_s);
      a["panic"] = d.panic;
      abr.push_back(std::move(a));
    }
    j["abr"] = std::move(abr);
  }

  OrderedJson timeline = OrderedJson::array();
  for (const TimelineEntry& e : report.timeline) {
    OrderedJson t;
    t["poc"] = e.poc;
    if (e.dropped) {
      t["dropped"] = true;
    } else {
      t["quality_db"] = round_sig(e.quality_db);
      t["rep_id"] = e.rep_id;
    }
    timeline.push_back(std::move(t));
  }
  j["timeline"] = std::move(timeline);

  const SessionSummary& s = report.summary;
  OrderedJson summary;
  summary["switches_total"] = s.switches_total;
  OrderedJson counts;
  for (const auto& [name, count] : s.outcome_counts) counts[name] = count;
  summary["outcome_counts"] = std::move(counts);
  summary["mean_quality_db"] = round_sig(s.mean_quality_db);
  summary["min_quality_db"] = round_sig(s.min_quality_db);
  summary["dropped_pictures_total"] = s.dropped_pictures_total;
  summary["stall_total_s"] = round_sig(s.stall_total_s);
  OrderedJson means = OrderedJson::array();
  for (double m : s.transition_means_db) means.push_back(round_sig(m));
  summary["transition_means_db"] = std::move(means);
  j["summary"] = std::move(summary);
  return j;
}

std::string quality_csv(const SessionReport& report) {
  std::ostringstream out;
  out << "poc,quality_db,rep_id,dropped\n";
  for (const TimelineEntry& e : report.timeline) {
    out << e.poc << ",";
    if (e.dropped) {
      out << ",," << 1 << "\n";
    } else {
      out << format_sig(e.quality_db) << "," << e.rep_id << ",0\n";
    }
  }
  return out.str();
}

std::string switches_csv(const SessionReport& report) {
  std::ostringstream out;
  out << "boundary_segment,from,to,outcome,rewritten,affected_pictures\n";
  for (const SwitchRecord& rec : report.switches) {
    size_t affected = 0;
    if (const auto* drift = std::get_if<GracefulDrift>(&rec.outcome)) {
      affected = drift->affected_pocs.size();
    } else if (const auto* dropped = std::get_if<DroppedPictures>(&rec.outcome)) {
      affected = dropped->dropped_pocs.size();
    }
    out << rec.boundary_segment_index << "," << rec.from_rep << ","
        << rec.to_rep << "," << outcome_name(rec.outcome) << ","
        << (rec.rewritten_to_fallback ? 1 : 0) << "," << affected << "\n";
  }
  return out.str();
}

OrderedJson bd_table_json(const BdRateTable& table) {
  OrderedJson j;
  j["bd_rate_percent"]["y"] = round_sig(table.y);
  j["bd_rate_percent"]["u"] = round_sig(table.u);
  j["bd_rate_percent"]["v"] = round_sig(table.v);
  j["bd_rate_percent"]["yuv"] = round_sig(table.weighted);
  return j;
}

std::string bd_table_text(const BdRateTable& table) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-10s %10s %10s %10s %10s\n", "", "Y", "U",
                "V", "YUV");
  out << line;
  std::snprintf(line, sizeof(line), "%-10s %9.2f%% %9.2f%% %9.2f%% %9.2f%%\n",
                "BD-rate", table.y, table.u, table.v, table.weighted);
  out << line;
  return out.str();
}

namespace {

std::string join_pocs(const std::vector<int>& pocs, char sep) {
  std::string s;
  for (size_t i = 0; i < pocs.size(); ++i) {
    if (i) s += sep;
    s += std::to_string(pocs[i]);
  }
  return s;
}

}  // namespace

std::string gop_show_csv(const CodedSequence& seq) {
  std::ostringstream out;
  out << "poc,decode_idx,tid,kind,refs,collocated_ref,segment\n";
  for (int poc : decode_order(seq)) {
    const Picture& p = seq.at_poc(poc);
    out << p.poc << "," << p.decode_idx << "," << p.tid << ","
        << to_string(p.kind) << "," << join_pocs(p.refs, '|') << ",";
    if (p.collocated_ref) out << *p.collocated_ref;
    out << "," << p.segment_index << "\n";
  }
  return out.str();
}

std::string gop_show_text(const CodedSequence& seq) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof(line), "%6s %10s %4s %-6s %-13s %10s %8s\n",
                "poc", "decode_idx", "tid", "kind", "refs", "collocated",
                "segment");
  out << line;
  for (int poc : decode_order(seq)) {
    const Picture& p = seq.at_poc(poc);
    const std::string refs = join_pocs(p.refs, ' ');
    const std::string col =
        p.collocated_ref ? std::to_string(*p.collocated_ref) : "-";
    std::snprintf(line, sizeof(line), "%6d %10d %4d %-6s %-13s %10s %8d\n",
                  p.poc, p.decode_idx, p.tid, to_string(p.kind), refs.c_str(),
                  col.c_str(), p.segment_index);
    out << line;
  }
  return out.str();
}

OrderedJson run_report_json(const std::map<std::string, std::string>& input_digests,
                            std::uint64_t seed, const Ladder& ladder,
                            const ConformanceReport& conformance,
                            const SessionReport& session) {
  OrderedJson j;
  j["tool"] = "ogopsim";
  j["version"] = tool_version();
  OrderedJson inputs;
  for (const auto& [name, digest] : input_digests) inputs[name] = digest;
  j["inputs"] = std::move(inputs);
  j["seed"] = seed;
  j["conformance"] = conformance_json(conformance);

  OrderedJson bd = OrderedJson::array();
  const Representation& anchor = ladder.representations.front();
  for (size_t i = 1; i < ladder.representations.size(); ++i) {
    const Representation& test = ladder.representations[i];
    OrderedJson entry;
    entry["anchor"] = anchor.id;
    entry["test"] = test.id;
    try {
      entry.update(bd_table_json(bd_rate_table(anchor.rd_curve, test.rd_curve)));
    } catch (const NoOverlapError&) {
      entry["error"] = "no-overlap";
    }
    bd.push_back(std::move(entry));
  }
  j["bd_rates"] = std::move(bd);

  j.update(session_json(session));
  return j;
}

}  // namespace ogop

/* Copyright (c) 2026 the ogopsim authors. All rights reserved.
 * Distributed under the BSD 3-Clause License (see LICENSE file). */

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "json.hpp"

#include "ogop/constraint_engine.h"
#include "ogop/quality_metrics.h"
#include "ogop/switch_sim.h"

namespace ogop {

using OrderedJson = nlohmann::ordered_json;

const char* tool_version();

/// All floats in emitted documents are rounded to `digits` significant
/// digits so byte-identical reports come out of identical inputs.
double round_sig(double v, int digits = 6);
std::string format_sig(double v, int digits = 6);

std::uint64_t fnv1a64(std::string_view bytes);
std::string file_digest(const std::filesystem::path& path);

OrderedJson conformance_json(const ConformanceReport& report,
                             const std::vector<std::string>& warnings = {});
std::string conformance_text(const ConformanceReport& report,
                             const std::vector<std::string>& warnings = {});

OrderedJson outcome_json(const SwitchOutcome& outcome);
OrderedJson session_json(const SessionReport& report);

std::string quality_csv(const SessionReport& report);
std::string switches_csv(const SessionReport& report);

OrderedJson bd_table_json(const BdRateTable& table);
std::string bd_table_text(const BdRateTable& table);

std::string gop_show_csv(const CodedSequence& seq);
std::string gop_show_text(const CodedSequence& seq);

/// Top-level document written by `sim run`. The BD-rate section compares
/// every rung's RD curve against the lowest rung at equal quality; pairs
/// without overlapping quality ranges are marked instead of computed.
OrderedJson run_report_json(const std::map<std::string, std::string>& input_digests,
                            std::uint64_t seed, const Ladder& ladder,
                            const ConformanceReport& conformance,
                            const SessionReport& session);

}  // namespace ogop

/* Copyright (c) 2026 the ogopsim authors. All rights reserved.
 * Distributed under the BSD 3-Clause License (see LICENSE file). */

#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ogop/ladder.h"
#include "ogop/switch_sim.h"

namespace ogop {

/// Malformed configuration or referenced input files.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LoadedLadder {
  Ladder ladder;
  AbrConfig abr;
};

/// Reads a ladder description (see docs/schemas/ladder_config.schema.json),
/// loads the referenced RD-curve CSVs, builds and constrains the coded
/// sequences, sorts representations by bitrate and validates the result.
/// fallback_override replaces the file's fallback_lowest_closed flag.
LoadedLadder load_ladder_config(const std::filesystem::path& path,
                                std::optional<bool> fallback_override = {});

/// CSV with header rate_kbps,psnr_y,psnr_u,psnr_v.
RdCurve load_rd_csv(const std::filesystem::path& path);

/// CSV with header time_s,kbps.
BandwidthTrace load_trace_csv(const std::filesystem::path& path);

/// CSV with header segment,rep_id; segments must be 0..n-1 in order.
std::vector<std::string> load_schedule_csv(const std::filesystem::path& path);

}  // namespace ogop

/* Copyright (c) 2026 the ogopsim authors. All rights reserved.
 * Distributed under the BSD 3-Clause License (see LICENSE file). */

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ogop {

enum class ChromaFormat { Monochrome, Cf420, Cf422, Cf444 };

const char* to_string(ChromaFormat f);
ChromaFormat chroma_format_from_string(const std::string& s);

/// The SPS fields that have to line up across all segment variants for a
/// switch to continue the coded video sequence instead of restarting it.
struct SpsModel {
  int max_width = 3840;
  int max_height = 2160;
  ChromaFormat chroma_format = ChromaFormat::Cf420;
  int bit_depth = 10;
  int ctu_size = 128;
  int level_idc = 83;  // VVC level 5.1
  bool rpr_enabled = true;          // sps_ref_pic_resampling_enabled_flag
  bool res_change_allowed = true;   // sps_res_change_in_clvs_allowed_flag
  bool gci_no_res_change = false;   // gci_no_res_change_in_clvs_constraint_flag
  bool subpictures_enabled = false; // incompatible with RPR

  bool operator==(const SpsModel&) const = default;
};

/// Minimum level per maximum luma picture size. Deployment data, supplied
/// by configuration; the shipped default covers the usual streaming tiers.
struct LevelEntry {
  std::int64_t max_luma_samples;
  int level_idc;
};

const std::vector<LevelEntry>& default_level_table();

/// Smallest level_idc from the table that admits the given picture size;
/// returns the largest known level when the size exceeds the table.
int min_level_for(std::int64_t luma_samples,
                  const std::vector<LevelEntry>& table = default_level_table());

}  // namespace ogop

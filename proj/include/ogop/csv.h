/* Copyright (c) 2026 the ogopsim authors. All rights reserved.
 * Distributed under the BSD 3-Clause License (see LICENSE file). */

#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace ogop {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // -1 when absent
};

/// Comma-separated, one record per line, first line is the header.
/// Blank lines and lines starting with '#' are skipped.
CsvTable read_csv(const std::filesystem::path& path);
CsvTable parse_csv(const std::string& text, const std::string& origin = "<csv>");

double csv_double(const std::string& field, const std::string& context);
int csv_int(const std::string& field, const std::string& context);

}  // namespace ogop

/* Copyright (c) 2026 the ogopsim authors. All rights reserved.
 * Distributed under the BSD 3-Clause License (see LICENSE file). */

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ogop {

/// Runs the ogopsim command line (args exclude the program name) and
/// returns the process exit code: 0 success/compliant, 1 domain findings
/// (conformance violations, BD-rate overlap failure), 2 usage or input
/// errors.
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace ogop

/* Copyright (c) 2026 the ogopsim authors. All rights reserved.
 * Distributed under the BSD 3-Clause License (see LICENSE file). */

#include <iostream>
#include <string>
#include <vector>

#include "ogop/cli.h"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ogop::run_cli(std::move(args), std::cout, std::cerr);
}

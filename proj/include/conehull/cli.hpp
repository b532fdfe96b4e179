#pragma once

/// \file
/// \brief Command-line front end (estimate, table1, rates, oracle-check,
/// render), factored as a callable so tests can drive it in-process.

#include <string>
#include <vector>

namespace conehull {

/// Parses an angle literal: a plain number, or "pi", "pi/4", "2pi/3", "3pi/8".
double parse_angle(const std::string& text);

/// Runs the CLI on the given arguments (without argv[0]). Returns the process
/// exit code: 0 success, 1 usage or runtime error, 2 estimator early stop,
/// 3 failed oracle check.
int run_cli(const std::vector<std::string>& args);

}  // namespace conehull

// SPDX-License-Identifier: Apache-2.0
//
// plos - line-of-sight probability simulators for Manhattan-grid cities
//
// Command-line front end. Kept as a library so tests can drive it in-process.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace plos::cli
{

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// `args` excludes the program name. CSV goes to `out` unless --out is given.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace plos::cli

/******************************************************************************
 * Copyright (c) 2026, the koopman-mor project developers.
 * SPDX-License-Identifier: Apache-2.0
 *****************************************************************************/

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "koopman/types.hpp"

namespace koopman::cli {

/// Dispatch a full command line (subcommands: simulate, fit, gramians,
/// balance, reduce, demo). Returns 0 on success, 1 on a computational error
/// (the module error is printed verbatim to stderr), 2 on a usage error.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);  // args without the program name

/// One named demo check with its threshold and provenance kind:
/// "pattern" checks reproduce a qualitative result, "oracle" checks compare
/// against an independently computed value, "report" entries are
/// informational only.
struct DemoCheck {
  std::string name;
  std::string kind;
  std::string comparison;  // "<=", ">=", "bool", "none"
  double measured = 0.0;
  double threshold = 0.0;
  bool passed = true;
};

struct DemoReport {
  int example = 0;
  std::uint64_t seed = 0;
  std::vector<DemoCheck> checks;
  std::map<std::string, std::string> artifacts;  // label -> file path
  std::map<std::string, std::string> config;     // pinned demo parameters

  bool all_passed() const;
  const DemoCheck* find(const std::string& name) const;
};

struct DemoOptions {
  std::uint64_t seed = 0;
  std::string out_dir = ".";                     // artifact directory
  std::optional<Vector> x0;                      // override the demo initial state
  std::map<std::string, double> threshold_overrides;
};

/// Default threshold table for every demo check; overridable per run.
const std::map<std::string, double>& demo_default_thresholds();

/// Run one of the four built-in end-to-end demos (1..4): data generation,
/// fitting, gramians, and (for 4) balancing and reduction. Deterministic for
/// a fixed seed. Artifacts are written under options.out_dir.
DemoReport run_demo(int example, const DemoOptions& options);

std::string demo_report_to_json(const DemoReport& report);
void save_demo_report(const std::string& path, const DemoReport& report);

}  // namespace koopman::cli

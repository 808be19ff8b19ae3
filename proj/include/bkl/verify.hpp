#pragma once

// The acceptance suite: every advertised identity, bound, and root-location
// claim as a toleranced numeric check over a fixed grid.  Shared by the
// `verify` CLI subcommand and the acceptance test binary.

#include <functional>
#include <string>
#include <vector>

#include "bkl/ff.hpp"

namespace bkl::verify {

struct CheckResult {
  std::string name;
  bool pass = false;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  std::string detail;  // grid description or failure note
};

struct Options {
  uint64_t table_cap = AmbientField::kDefaultCap;
  uint64_t cost_cap = 100'000'000;
  std::string cache_dir;  // empty: no dlog-table cache
};

/// Runs every acceptance criterion; report entries appear in criterion order.
std::vector<CheckResult> run_all(const Options& opts);

/// Runs the named criteria only (names as reported by run_all).
std::vector<CheckResult> run_selected(const Options& opts,
                                      const std::vector<std::string>& names);

std::vector<std::string> criterion_names();

}  // namespace bkl::verify

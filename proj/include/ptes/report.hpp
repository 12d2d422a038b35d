#pragma once

// Subcommand pipelines producing JSON reports. Reports contain no timings, so a fixed problem
// yields byte-identical output.

#include <functional>
#include <string>

#include <json.hpp>

#include "ptes/problem.hpp"

namespace ptes {

enum ExitCode : int { kPass = 0, kIdentityFailure = 2, kResourceCap = 3, kSpecError = 4 };

struct Report {
  nlohmann::json body;
  int status = kPass;  // kPass or kIdentityFailure
};

struct UnitRootOptions {
  std::string method = "hypergeom";  // hypergeom | power-iter | rational
  bool cross_check = false;
  unsigned step = 0;  // Deg increment of the stabilization run; 0 means p
  Rational tol = 0;   // required p-adic agreement; 0 means ceil(M/2)
};

struct RunOptions {
  UnitRootOptions unit_root;
  bool wset = false;  // trace-check: add the Teichmuller W-set sums
  /// Line-delimited progress messages; may be empty.
  std::function<void(const std::string&)> log;
};

Report run_unfold(const ProblemSpec& s, const RunOptions& o = {});
Report run_polytope_info(const ProblemSpec& s, const RunOptions& o = {});
Report run_sums(const ProblemSpec& s, const RunOptions& o = {});
Report run_lfunc(const ProblemSpec& s, const RunOptions& o = {});
Report run_trace_check(const ProblemSpec& s, const RunOptions& o = {});
Report run_fredholm(const ProblemSpec& s, const RunOptions& o = {});
Report run_unit_root(const ProblemSpec& s, const RunOptions& o = {});
Report run_degeneracy(const ProblemSpec& s, const RunOptions& o = {});

/// Dispatch by subcommand name; throws SpecError on an unknown name.
Report run(const ProblemSpec& s, const std::string& subcommand, const RunOptions& o = {});

}  // namespace ptes

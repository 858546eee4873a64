#pragma once

// The CLI's commands as library functions returning report envelopes, so
// tests can run them without a process boundary.

#include <optional>
#include <string>
#include <vector>

#include "subseries/report.hpp"

namespace subseries::cli {

enum ExitCode : int { kOk = 0, kFailed = 1, kUndecided = 2, kUsage = 64 };

struct FamilyOptions {
  std::string family;
  std::vector<std::string> params;  // "name=value"
};

struct BudgetOptions {
  index_t n_max = 4096;
  std::string eps_grid = "1/2,1/8,1/64,1/512";
  std::size_t k_functionals = 256;
  std::size_t candidates = 64;
  double blowup = 1024.0;
  index_t witness_factor = 64;

  Budget to_budget() const;
};

struct RunOptions {
  Seed seed = default_seed();
  unsigned threads = 0;  // does not affect results
};

Json run_levy(const FamilyOptions& f, std::size_t n, const std::string& R, const RunOptions& run);
/// All 0 <= N <= M' <= M when n is empty, otherwise the single pair (n, m).
Json run_equidist(const FamilyOptions& f, std::optional<index_t> n, index_t m, const RunOptions& run);
Json run_dichotomy(const FamilyOptions& f, std::size_t samples, const BudgetOptions& b, const RunOptions& run);

struct OpDemoOptions {
  std::optional<std::string> delta;  // default_delta() when empty
  std::size_t blocks = 8;
  std::size_t samples = 1000;
  std::string T = "all";
  bool subset_search = false;
};
Json run_op_demo(const FamilyOptions& f, const OpDemoOptions& op, const BudgetOptions& b, const RunOptions& run);

Json run_counterexample(index_t n, const RunOptions& run);
Json run_catalog(const RunOptions& run);

/// 0 when the report passes, 2 when it is flagged inconclusive, else 1.
int exit_code(const Json& report);

/// "json" (pretty, trailing newline) or "csv".
std::string render(const Json& report, const std::string& format);

}  // namespace subseries::cli

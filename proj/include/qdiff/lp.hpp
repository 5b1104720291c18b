#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "qdiff/series.hpp"
#include "qdiff/solver.hpp"

namespace qdiff {

/// l^p construction on the unit ball with zero prefix.
struct LpConfig {
  double p = 1.0;
  double tol_fp = 1e-12;
  double tol_res = 1e-8;
  int max_iter = 10000;
  Index window_len = 256;
  /// tail or partial inner sums.
  Flavor flavor = Flavor::tail;
  std::optional<Index> n0_hint;
  Index scan_limit = 1'000'000;
  Index horizon = 0;
};

using TailPoint = std::pair<Index, double>;

struct LpResult {
  SolveResult solve;
  N0LpResult cert;
  double p = 1.0;
  double norm = 0.0;
  /// (l, sum_{n >= l} |x_n|^p) at l = start, start + 1, start + 3, start + 7, ...
  std::vector<TailPoint> tail_profile;
  /// Bound on sum_{n > end} |x_n|^p for the exact solution extending the window.
  double neglected_tail = 0.0;
};

LpResult solve_lp(const ProblemSpec& problem, const LpConfig& cfg);

/// (sum over the window of |x_n|^p)^{1/p}.
double lp_norm(const Window& x, double p);

/// t(l) = sum_{n >= l} |x_n|^p over the window, at each checkpoint.
std::vector<TailPoint> lp_tail_profile(const Window& x, double p, const std::vector<Index>& checkpoints);

/// start, start + 1, start + 3, start + 7, ... up to and including end.
std::vector<Index> geometric_checkpoints(Index start, Index end);

}  // namespace qdiff

#pragma once

#include <optional>
#include <vector>

#include "qdiff/model.hpp"
#include "qdiff/operators.hpp"
#include "qdiff/series.hpp"
#include "qdiff/types.hpp"

namespace qdiff {

struct SolveConfig {
  /// Ball radius.
  double M = 1.0;
  double tol_fp = 1e-12;
  double tol_res = 1e-8;
  int max_iter = 10000;
  Index window_len = 256;
  Flavor flavor = Flavor::tail;
  /// Multiplier w of q.
  double scale = 1.0;
  /// Preferred n0; the solver uses max(n0_hint, certified n0).
  std::optional<Index> n0_hint;
  Index scan_limit = 1'000'000;
  /// Explicit horizon; 0 picks min_horizon + window_len.
  Index horizon = 0;
};

struct SolveResult {
  Window solution = Window(1, {0.0});
  Index n0 = 0;
  double kappa = 0.0;
  int iterations = 0;
  /// sup |x - (T1 x + T2 x)| over the active window.
  double defect = 0.0;
  double residual_sup = 0.0;
  double truncation_error = 0.0;

  double M = 0.0;
  double scale = 1.0;
  Flavor flavor = Flavor::tail;
  double q_star = 0.0;
  double Q = 0.0;
  double L = 0.0;
  Index horizon = 0;
  /// Indices where the equation residual was asserted.
  Index residual_from = 0;
  Index residual_to = 0;
  /// Allowed residual: defect-propagation constant times defect plus roundoff.
  double residual_bound = 0.0;
  /// sup |x^{k+1} - x^k| per iteration.
  std::vector<double> steps;
  Enclosure S;
};

/// Picard iteration x^{k+1} = T1 x^k + T2 x^k from x^0 = 0 on the zero-prefix
/// M-ball. n0 is enlarged until kappa = w q* + L S_a(n0) < 1 (shifted:
/// (1 + L S_a(n0)) / (w q*)). Throws SolveError on contraction, iteration,
/// ball, or residual failure.
SolveResult solve_bounded(const ProblemSpec& problem, const SolveConfig& cfg);

/// Evaluates the equation residual of res.solution (scaled by res.scale) and
/// fills residual_from/to/sup/bound. Throws SolveError when the residual
/// exceeds the bound implied by res.defect or is not below tol_res. For
/// sigma < 0 the residual is left as NaN.
void certify_residual(const ProblemSpec& problem, SolveResult& res, double tol_res);

/// sup over the active window of |x - (T1 x + T2 x)|.
double fixed_point_defect(const ProblemSpec& problem, const Window& x, const OperatorConfig& cfg);

/// sup over m in [from, to] of |x_m + w q_m x_{m-tau} - U(m)|, with U the
/// suffix double sum read from x up to the horizon.
double relation_defect(const ProblemSpec& problem, const Window& x, double scale, Index from, Index to,
                       Index horizon);

/// Extends a solution down to index beta via
///   x_{m-tau} = (U(m) - x_m) / (w q_m),  m = start + tau - 1, ..., beta + tau.
/// Requires tau > sigma >= 0. A window already starting at or below beta is
/// returned unchanged.
Window backfill(const ProblemSpec& problem, const Window& x, double scale, Index horizon);
Window backfill(const ProblemSpec& problem, const SolveResult& res);

}  // namespace qdiff

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qdiff/model.hpp"
#include "qdiff/solver.hpp"
#include "qdiff/verify.hpp"

namespace qdiff {

/// Cascade of auxiliary problems with q replaced by w_k q, w_k = 1 - rho^k.
struct ApproxConfig {
  double C = 0.9;
  double rho = 0.625;
  double D = 1.0;
  /// 0 means "start at the certified k0".
  Index k_min = 0;
  /// 0 means k_min + 6.
  Index k_max = 0;
  double tol_c = 1e-6;
  /// Largest k examined when certifying the bound.
  Index k_scan = 400;
  /// Global bound of |f|; taken from the function when absent.
  std::optional<double> P;
  /// Template for every auxiliary solve; M, scale, flavor and n0_hint are overwritten.
  SolveConfig solve;

  double w(Index k) const;
  /// Ball radius D (C w_k)^k of the k-th auxiliary problem.
  double radius(Index k) const;
};

struct HsbCertificate {
  Index k0 = 0;
  double D = 1.0;
  double P = 0.0;
  /// inf q over the indices the backfill divides by.
  double q_inf = 0.0;
  /// S(k).hi / ((1 - w_k)(C w_k)^k) for k = 1..k_scan.
  std::vector<double> ratio;
};

/// Finds the smallest k0 with S(k).hi <= D (1 - w_k)(C w_k)^k for every scanned
/// k >= k0 (S weighted by P). Also requires C < q_n for n >= beta + tau.
/// Throws ScanExhausted when no k0 exists below k_scan.
HsbCertificate check_Hsb(const ProblemSpec& problem, const ApproxConfig& cfg, std::optional<double> P = std::nullopt);

struct AuxiliarySolution {
  Index k = 0;
  double w = 0.0;
  double M = 0.0;
  SolveResult result;
  /// result.solution extended down to index beta.
  Window full = Window(1, {0.0});
};

AuxiliarySolution solve_auxiliary(const ProblemSpec& problem, Index k, const ApproxConfig& cfg,
                                  const HsbCertificate& cert);

struct ApproxReport {
  HsbCertificate cert;
  std::vector<AuxiliarySolution> solves;
  /// Coordinates shared by every full solution.
  Index common_from = 0;
  Index common_to = 0;
  /// diffs[i][n - common_from] = |x^{k_{i+1}}_n - x^{k_i}_n|.
  std::vector<std::vector<double>> diffs;
  std::vector<double> diff_max;
  bool converged = false;
  std::string message;
  Window limit = Window(1, {0.0});
  /// Residual of the limit candidate against the unscaled equation.
  ResidualReport limit_residual;
  /// Proof bound on every coordinate of every auxiliary solution.
  double uniform_bound = 0.0;
  bool uniform_bound_ok = false;
  /// |x^k_n| <= D (C w_k)^k for n >= k + tau, for every k.
  bool tail_bound_ok = false;
  /// Relation defects of the last solution: own scale, then unscaled.
  double scaled_defect = 0.0;
  double unscaled_defect = 0.0;
  double unscaled_defect_bound = 0.0;
  bool defect_bound_ok = false;
};

/// Runs the auxiliary solves for k in [k_min, k_max] concurrently, tabulates
/// coordinate differences and checks the proof's bounds. Non-convergence is
/// reported through `converged` and `message`, not thrown.
ApproxReport approximate_limit(const ProblemSpec& problem, const ApproxConfig& cfg);

}  // namespace qdiff

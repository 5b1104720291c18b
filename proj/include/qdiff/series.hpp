#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qdiff/model.hpp"
#include "qdiff/types.hpp"

namespace qdiff {

/// Which operator family a computation belongs to. `tail` and `partial` differ
/// in the inner sum of T2; `shifted` is the pair used when inf q > 1.
enum class Flavor { tail, partial, shifted };

std::string to_string(Flavor f);
Flavor flavor_from_string(const std::string& s);

/// Largest index the adaptive cutoff doubling may reach.
inline constexpr Index kMaxCutoff = Index{1} << 22;

/// Encloses sum_{s>=n} |1/r_s| sum_{t>=s} (|a_t| Q + |b_t|).
/// Default tol: 1e-12 * max(1, first term).
Enclosure double_tail(const SequenceSpec& r, const SequenceSpec& a, const SequenceSpec& b, double Q, Index n,
                      std::optional<double> tol = std::nullopt);

/// Encloses sum_{s>=n} |1/r_s| sum_{t=sigma}^{s-1} (|a_t| Q + |b_t|); inner sums
/// start no lower than t = 1.
Enclosure partial_double_tail(const SequenceSpec& r, const SequenceSpec& a, const SequenceSpec& b, double Q,
                              Index sigma, Index n, std::optional<double> tol = std::nullopt);

/// Encloses sum_{n>=n0} (sum_{s>=n} |1/r_s| sum_{t>=s} |c_t|)^p, or the same
/// with partial inner sums when flavor is `partial`.
Enclosure lp_series(const SequenceSpec& r, const SequenceSpec& c, double p, Index n0,
                    std::optional<double> tol = std::nullopt, Flavor flavor = Flavor::tail, Index sigma = 1);

/// Enclosures of the weighted double series for every n in [from, to], all
/// produced by one backward pass with the same cutoff.
struct TailProfile {
  Index from = 1;
  Index cutoff = 0;
  std::vector<double> lo;
  std::vector<double> hi;

  Index to() const { return from + static_cast<Index>(hi.size()) - 1; }
  Enclosure at(Index n) const;
};

/// Profile of double_tail (flavor tail) or partial_double_tail (flavor partial)
/// with an explicit cutoff N >= to.
TailProfile tail_profile(const SequenceSpec& r, const SequenceSpec& a, const SequenceSpec& b, double Q, Flavor flavor,
                         Index sigma, Index from, Index to, Index cutoff);

struct ScanOptions {
  /// Multiplier w applied to q (auxiliary problems).
  double scale = 1.0;
  /// Bound of |f| on [-M, M]; estimated when absent.
  std::optional<double> f_bound;
  /// When set, the scan also requires the contraction constant to be < 1.
  std::optional<double> lipschitz;
  Index limit = 1'000'000;
};

struct N0Result {
  Index n0 = 0;
  Enclosure S;
  /// a-only series weighted by the Lipschitz constant (when requested).
  std::optional<Enclosure> S_a;
  double q_star = 0.0;
  double threshold = 0.0;
  std::optional<double> kappa;
};

/// Minimal n0 > beta whose series enclosure fits in the M-ball budget.
N0Result find_n0(const ProblemSpec& problem, double M, Flavor flavor, const ScanOptions& opts = {});

struct N0LpResult {
  Index n0 = 0;
  Enclosure lhs;
  Enclosure A;
  Enclosure B;
  double q_star = 0.0;
  double W = 0.0;
  double rhs = 0.0;
  std::optional<double> kappa;
};

/// Minimal n0 > beta with 4^{p-1}[W^p A(n0) + B(n0)] < 1 - 2^{p-1} q*.
N0LpResult find_n0_lp(const ProblemSpec& problem, double p, Flavor flavor = Flavor::tail,
                      const ScanOptions& opts = {});

struct HsbScan {
  std::optional<Index> k0;
  double D = 1.0;
  /// S(k).hi / ((1 - w_k)(C w_k)^k) for k = 1..k_max.
  std::vector<double> ratio;
};

/// Scans k = 1..k_max for the bound S(k) <= D (1 - w_k)(C w_k)^k with
/// w_k = 1 - rho^k and S weighted by the global bound P of f. k0 is the
/// smallest k from which the bound holds through k_max.
HsbScan scan_Hsb(const ProblemSpec& problem, double P, double C, double rho, double D, Index k_max);

enum class Verdict { holds, fails, undecidable };
std::string to_string(Verdict v);

struct HypothesisReport {
  std::string id;
  Verdict verdict = Verdict::undecidable;
  std::map<std::string, double> witnesses;
  std::map<std::string, Enclosure> enclosures;
  std::string note;
};

struct HypothesisParams {
  double M = 1.0;
  double p = 1.0;
  double C = 0.9;
  double rho = 0.625;
  double D = 1.0;
  Index k_max = 400;
};

/// Accepted ids: Hfl Hs Hs' Hq Hq1 Hsb Hsp Hqp H0 H0' Hq=1.
const std::vector<std::string>& hypothesis_ids();

std::vector<HypothesisReport> check_hypotheses(const ProblemSpec& problem, const std::vector<std::string>& ids,
                                               Index horizon = 4096, const HypothesisParams& params = {});

}  // namespace qdiff

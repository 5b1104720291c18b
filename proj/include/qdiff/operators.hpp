#pragma once

#include <optional>
#include <vector>

#include "qdiff/model.hpp"
#include "qdiff/series.hpp"
#include "qdiff/types.hpp"

namespace qdiff {

struct OperatorConfig {
  Index n0 = 1;
  /// Last index kept in the inner and outer sums.
  Index horizon = 0;
  /// Multiplier w of q; w = 1 is the original problem.
  double scale = 1.0;
  Flavor flavor = Flavor::tail;
  /// Bound of |f| on [-radius, radius]; estimated from f when absent.
  std::optional<double> f_bound;
  /// Ball radius used for the beyond-window error terms.
  double radius = 1.0;
};

struct OperatorOutput {
  Window values;
  double truncation_error = 0.0;
};

/// T1 and T2 prepared for windows over a fixed index range.
///
/// Sequence values up to the horizon are cached once, and the truncation
/// bound depends only on the geometry, so repeated application inside a
/// Picard loop costs one backward pass per call.
class OperatorPair {
 public:
  OperatorPair(const ProblemSpec& problem, const OperatorConfig& cfg, Index start, Index end);

  Index start() const { return start_; }
  Index end() const { return end_; }
  /// First index where the operators are nonzero: n0 + beta, or n0 for shifted.
  Index active_from() const { return active_from_; }
  const OperatorConfig& config() const { return cfg_; }
  double f_bound() const { return Q_; }

  Window T1(const Window& x) const;
  Window T2(const Window& x) const;
  /// T1 x + T2 y.
  Window apply(const Window& x, const Window& y) const;

  /// Sup over the window of |T2 truncated - T2 exact| (plus the T1 part for
  /// the shifted flavor, whose T1 reads past the window end).
  double truncation_error() const { return trunc_t1_ + trunc_t2_; }
  double truncation_error_T1() const { return trunc_t1_; }
  double truncation_error_T2() const { return trunc_t2_; }

  /// Per-index truncation bound for T1 + T2 over [start, end].
  const std::vector<double>& truncation_profile() const { return trunc_profile_; }

 private:
  double r(Index s) const { return r_[static_cast<std::size_t>(s)]; }
  double a(Index t) const { return a_[static_cast<std::size_t>(t)]; }
  double b(Index t) const { return b_[static_cast<std::size_t>(t)]; }
  double q(Index n) const { return q_[static_cast<std::size_t>(n)]; }
  /// U(m) = sum_{s=m}^{H} (1/r_s) sum_{t=s}^{H} h_t for m in [lo, H].
  std::vector<double> tail_sums(const Window& x, Index lo) const;
  void check_window(const Window& x) const;

  const ProblemSpec& problem_;
  OperatorConfig cfg_;
  Index start_, end_, active_from_, H_;
  double Q_ = 0.0;
  std::vector<double> r_, a_, b_, q_;
  double trunc_t1_ = 0.0;
  double trunc_t2_ = 0.0;
  std::vector<double> trunc_profile_;
};

/// (T1 x)_n = -w q_n x_{n-tau} for n >= n0 + beta, else 0.
Window apply_T1(const ProblemSpec& problem, const Window& x, const OperatorConfig& cfg);

/// (T2 x)_n = sum_{s>=n} (1/r_s) sum_{t>=s} (a_t f(x_{t-sigma}) + b_t), truncated at the horizon.
OperatorOutput apply_T2_tail(const ProblemSpec& problem, const Window& x, const OperatorConfig& cfg);

/// (T2 x)_n = -sum_{s>=n} (1/r_s) sum_{t=sigma}^{s-1} (a_t f(x_{t-sigma}) + b_t).
OperatorOutput apply_T2_partial(const ProblemSpec& problem, const Window& x, const OperatorConfig& cfg);

/// Combined shifted pair for inf q > 1:
/// -x_{n+tau}/(w q_{n+tau}) + (1/(w q_{n+tau})) sum_{s>=n+tau} (1/r_s) sum_{t>=s} (...), n >= n0.
OperatorOutput apply_shifted(const ProblemSpec& problem, const Window& x, const OperatorConfig& cfg);

/// Smallest horizon accepted for a window ending at `end`.
Index min_horizon(const ProblemSpec& problem, Flavor flavor, Index end);

}  // namespace qdiff

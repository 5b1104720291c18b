#pragma once

#include <optional>
#include <vector>

#include "qdiff/majorant.hpp"
#include "qdiff/model.hpp"
#include "qdiff/series.hpp"

namespace qdiff::detail {

/// Backward-pass evaluator for
///   S(n) = sum_{s>=n} |1/r_s| G(s),
/// where G(s) = sum_{t>=s} g_t (tail flavor) or sum_{t=t0}^{s-1} g_t (partial
/// flavor) and g_t = w_a |a_t| + |b_t|. Everything below the cutoff N is summed
/// explicitly; everything above it is bounded with majorants.
class TailEngine {
 public:
  TailEngine(const SequenceSpec& r, const SequenceSpec& a, const SequenceSpec& b, double weight_a, Flavor flavor,
             Index sigma);

  /// Enclosures of S(n) for n in [from, to] with cutoff max(N, min_cutoff()).
  TailProfile run(Index from, Index to, Index cutoff) const;

  /// Doubles the cutoff until the enclosure at `from` is narrower than tol.
  /// Throws ToleranceError at kMaxCutoff.
  TailProfile adaptive(Index from, Index to, double tol) const;

  /// Enclosures of L(n) = sum_{m>=n} S(m)^p for n in [from, to].
  TailProfile run_lp(double p, Index from, Index to, Index cutoff) const;
  TailProfile adaptive_lp(double p, Index from, Index to, double tol) const;

  double first_term(Index n) const;
  double g(Index t) const;
  double inv_r(Index s) const;
  Index min_cutoff() const { return min_cutoff_; }

  /// Rigorous bound on sum_{t>=n} g_t; throws DivergenceError when g is not summable.
  double g_tail(Index n) const;
  bool g_summable() const { return g_tail_fn_.has_value(); }

 private:
  /// Bound on sum_{s>n} |1/r_s| G(s) given the explicit inner value at N+1.
  double outer_tail(Index cutoff, double inner_at_cutoff) const;
  /// Envelope F(n) >= S(n) for n > cutoff.
  Majorant value_envelope(double inner_at_cutoff) const;

  const SequenceSpec& r_;
  const SequenceSpec& a_;
  const SequenceSpec& b_;
  double weight_a_;
  Flavor flavor_;
  Index inner_start_;
  bool a_used_;
  bool b_used_;

  Majorant inv_r_maj_;
  std::optional<Majorant> g_tail_fn_;
  std::optional<Majorant> g_partial_fn_;
  Index min_cutoff_ = 1;
};

}  // namespace qdiff::detail

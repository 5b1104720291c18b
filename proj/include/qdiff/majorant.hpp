#pragma once

#include <optional>
#include <vector>

#include "qdiff/types.hpp"

namespace qdiff {

/// One envelope term  coef * s^power * base^s  with coef >= 0, base > 0.
struct MajorantTerm {
  double coef = 0.0;
  double power = 0.0;
  double base = 1.0;

  double eval(Index s) const;
  bool summable() const;
  bool operator==(const MajorantTerm&) const = default;
};

/// Analytic upper envelope of a nonnegative sequence.
///
/// A Majorant m bounds the sequence it was built for only at indices
/// s >= valid_from(); below that the caller sums the real terms explicitly.
/// The class is closed under sums, products, powers, tail sums and partial
/// sums, which is what the series enclosures need to bound every neglected
/// remainder without sampling.
class Majorant {
 public:
  Majorant() = default;
  explicit Majorant(std::vector<MajorantTerm> terms, Index valid_from = 1);

  static Majorant term(double coef, double power, double base, Index valid_from = 1);
  static Majorant constant(double c, Index valid_from = 1) { return term(c, 0.0, 1.0, valid_from); }

  const std::vector<MajorantTerm>& terms() const { return terms_; }
  Index valid_from() const { return valid_from_; }
  bool is_zero() const { return terms_.empty(); }

  double eval(Index s) const;

  /// True when every term has a finite sum.
  bool summable() const;

  /// Upper bound on sum_{s >= n} m(s); +inf when not summable.
  double tail_sum(Index n) const;

  /// Envelope M with M(n) >= sum_{s >= n} m(s) for n >= M.valid_from().
  std::optional<Majorant> tail_sum_fn() const;

  /// Envelope P with P(s) >= sum_{t=1}^{s-1} m(t).
  Majorant partial_sum_fn() const;

  /// Envelope of m^p via (u_1 + ... + u_k)^p <= k^{p-1} (u_1^p + ... + u_k^p).
  Majorant pow(double p) const;

  Majorant scaled(double k) const;
  Majorant starting_at(Index n) const;

  friend Majorant operator+(const Majorant& lhs, const Majorant& rhs);
  friend Majorant operator*(const Majorant& lhs, const Majorant& rhs);

 private:
  std::vector<MajorantTerm> terms_;
  Index valid_from_ = 1;
};

}  // namespace qdiff

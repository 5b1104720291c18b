#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qdiff/majorant.hpp"
#include "qdiff/types.hpp"

namespace qdiff {

class SequenceSpec;

namespace seq {

/// n -> c * rho^n
struct Geometric {
  double c = 1.0;
  double rho = 0.5;
  bool operator==(const Geometric&) const = default;
};

/// n -> c * n^alpha
struct Power {
  double c = 1.0;
  double alpha = -2.0;
  bool operator==(const Power&) const = default;
};

/// n -> c * (-1)^n
struct Alternating {
  double c = 1.0;
  bool operator==(const Alternating&) const = default;
};

/// n -> c / ((2n-1)(2n+1))
struct OddProductReciprocal {
  double c = 1.0;
  bool operator==(const OddProductReciprocal&) const = default;
};

/// n -> c / (n(n+1)(n+2)(n+3))
struct RisingFourReciprocal {
  double c = 1.0;
  bool operator==(const RisingFourReciprocal&) const = default;
};

/// n -> offset + c * rho^n  (one-minus-geometric is offset = 1, c = -1)
struct AffineGeometric {
  double offset = 1.0;
  double c = -1.0;
  double rho = 0.5;
  bool operator==(const AffineGeometric&) const = default;
};

struct Constant {
  double c = 0.0;
  bool operator==(const Constant&) const = default;
};

/// Explicit values for start <= n <= end. Past the end the sequence either
/// continues as `tail` (a closed form), vanishes (`finite_support`), or is
/// unknown; an unknown continuation has no tail majorant.
struct Table {
  Index start = 1;
  std::vector<double> values;
  std::shared_ptr<const SequenceSpec> tail;
  bool finite_support = false;

  Index end() const { return start + static_cast<Index>(values.size()) - 1; }
  bool operator==(const Table& other) const;
};

}  // namespace seq

using SequenceForm = std::variant<seq::Geometric, seq::Power, seq::Alternating, seq::OddProductReciprocal,
                                  seq::RisingFourReciprocal, seq::AffineGeometric, seq::Constant, seq::Table>;

enum class Summability { summable, divergent, unknown };

/// Exact value range of a sequence over n >= from. `exact` is false when part
/// of the range could not be determined (open tables, unbounded kinds).
struct ValueRange {
  double inf = 0.0;
  double sup = 0.0;
  bool inf_attained = true;
  bool sup_attained = true;
  std::optional<double> limit;
  bool exact = true;

  double sup_abs() const;
  bool sup_abs_attained() const;
};

/// A real sequence on indices n >= 1 drawn from a closed-form vocabulary,
/// so that every tail it produces has an analytic bound.
class SequenceSpec {
 public:
  SequenceSpec(SequenceForm form, std::string name = {});

  const SequenceForm& form() const { return form_; }
  const std::string& name() const { return name_; }
  std::string kind() const;

  double eval(Index n) const;

  /// T(n) >= sum_{t>=n} |term(t)|. Throws DivergenceError when no such bound
  /// exists (non-summable or unknown continuation).
  double tail_majorant(Index n) const;

  Summability summability() const;
  Majorant abs_majorant() const;
  std::optional<Majorant> tail_majorant_fn() const;

  /// Envelope of |1/term(n)|; throws PreconditionError when the sequence can
  /// vanish or its reciprocal cannot be bounded.
  Majorant inv_abs_majorant() const;
  Summability inv_summability() const;

  /// true / false when decidable; nullopt when an open table hides the answer.
  std::optional<bool> nonvanishing() const;

  ValueRange range(Index from = 1) const;

  bool operator==(const SequenceSpec& other) const { return form_ == other.form_; }

 private:
  SequenceForm form_;
  std::string name_;
};

SequenceSpec zero_sequence();

namespace fn {

/// x -> slope * x + intercept
struct Linear {
  double slope = 1.0;
  double intercept = 0.0;
  bool operator==(const Linear&) const = default;
};

/// x -> amplitude * sin(frequency * x)^power
struct SinePower {
  int power = 1;
  double amplitude = 1.0;
  double frequency = 1.0;
  bool operator==(const SinePower&) const = default;
};

/// x -> sum_i coeffs[i] x^i
struct Polynomial {
  std::vector<double> coeffs;
  bool operator==(const Polynomial&) const = default;
};

/// Piecewise-linear interpolation through (xs[i], ys[i]), constant outside.
struct Table {
  std::vector<double> xs;
  std::vector<double> ys;
  bool operator==(const Table&) const = default;
};

}  // namespace fn

using FunctionForm = std::variant<fn::Linear, fn::SinePower, fn::Polynomial, fn::Table>;

/// The nonlinearity f together with whatever analytic bounds its kind admits:
/// a global bound P, and on [-M, M] a bound Q(M) and Lipschitz constant L(M).
class FunctionSpec {
 public:
  explicit FunctionSpec(FunctionForm form);

  const FunctionForm& form() const { return form_; }
  std::string kind() const;

  double eval(double x) const;
  std::optional<double> global_bound() const;
  std::optional<double> local_bound(double M) const;
  std::optional<double> lipschitz(double M) const;

  bool operator==(const FunctionSpec&) const = default;

 private:
  FunctionForm form_;
};

struct FMeta {
  double Q = 0.0;
  double L = 0.0;
  bool analytic = true;
};

/// Bound Q and Lipschitz constant L of f on [-M, M]: analytic when the kind
/// provides them, otherwise a dense-grid estimate (step M/1e4) inflated by 1.1.
FMeta estimate_f_meta(const FunctionSpec& f, double M);

/// Data of  Delta(r_n Delta(x_n + q_n x_{n-tau})) = a_n f(x_{n-sigma}) + b_n.
class ProblemSpec {
 public:
  ProblemSpec(Index tau, Index sigma, SequenceSpec r, SequenceSpec a, SequenceSpec b, SequenceSpec q, FunctionSpec f);

  Index tau() const { return tau_; }
  Index sigma() const { return sigma_; }
  Index beta() const { return std::max(tau_, sigma_); }
  const SequenceSpec& r() const { return r_; }
  const SequenceSpec& a() const { return a_; }
  const SequenceSpec& b() const { return b_; }
  const SequenceSpec& q() const { return q_; }
  const FunctionSpec& f() const { return f_; }

  bool operator==(const ProblemSpec&) const = default;

 private:
  Index tau_;
  Index sigma_;
  SequenceSpec r_, a_, b_, q_;
  FunctionSpec f_;
};

}  // namespace qdiff

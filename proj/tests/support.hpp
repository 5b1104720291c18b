#pragma once

// Shared fixtures, seeded generators and brute-force oracles for the tests.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <random>
#include <vector>

#include "qdiff/model.hpp"
#include "qdiff/types.hpp"

namespace qdiff::testing {

inline ProblemSpec make(Index tau, Index sigma, SequenceForm r, SequenceForm a, SequenceForm b, SequenceForm q,
                        FunctionForm f) {
  return ProblemSpec(tau, sigma, SequenceSpec(std::move(r), "r"), SequenceSpec(std::move(a), "a"),
                     SequenceSpec(std::move(b), "b"), SequenceSpec(std::move(q), "q"), FunctionSpec(std::move(f)));
}

/// r = (-1)^n, q = 1 - 2^-n, a = (3/4) 2^-n, b = 0, f = sin^6, tau = 3, sigma = 1.
inline ProblemSpec example1() {
  return make(3, 1, seq::Alternating{1.0}, seq::Geometric{0.75, 0.5}, seq::Constant{0.0},
              seq::AffineGeometric{1.0, -1.0, 0.5}, fn::SinePower{6, 1.0, 1.0});
}

/// example1 with forcing b = (1/4) 2^-n, so the cascade has a nonzero limit.
inline ProblemSpec example1_forced() {
  return make(3, 1, seq::Alternating{1.0}, seq::Geometric{0.75, 0.5}, seq::Geometric{0.25, 0.5},
              seq::AffineGeometric{1.0, -1.0, 0.5}, fn::SinePower{6, 1.0, 1.0});
}

/// r = (-1)^n, a = 2^-n, b = 1/(n(n+1)(n+2)(n+3)), q = 0.4, f(x) = x/10.
inline ProblemSpec example2() {
  return make(3, 1, seq::Alternating{1.0}, seq::Geometric{1.0, 0.5}, seq::RisingFourReciprocal{1.0},
              seq::Constant{0.4}, fn::Linear{0.1, 0.0});
}

inline ProblemSpec zero_problem(Index tau = 1, Index sigma = 0, double q = 0.5) {
  return make(tau, sigma, seq::Constant{1.0}, seq::Constant{0.0}, seq::Constant{0.0}, seq::Constant{q},
              fn::Linear{1.0, 0.0});
}

/// a = 1/((2n-1)(2n+1)), r = sqrt(n): full tails converge, partial ones do not.
inline ProblemSpec remark_full_only() {
  return make(2, 1, seq::Power{1.0, 0.5}, seq::OddProductReciprocal{1.0}, seq::Constant{0.0}, seq::Constant{0.5},
              fn::SinePower{1, 1.0, 1.0});
}

/// a = n, r = 2^n: partial tails converge, full ones do not.
inline ProblemSpec remark_partial_only() {
  return make(2, 1, seq::Geometric{1.0, 2.0}, seq::Power{1.0, 1.0}, seq::Constant{0.0}, seq::Constant{0.5},
              fn::SinePower{1, 1.0, 1.0});
}

/// q = 2 (shifted operator pair), r = 1, a = 2^-n, b = 2^-n / 4, f = sin.
inline ProblemSpec shifted_q2() {
  return make(2, 1, seq::Constant{1.0}, seq::Geometric{1.0, 0.5}, seq::Geometric{0.25, 0.5}, seq::Constant{2.0},
              fn::SinePower{1, 1.0, 1.0});
}

/// x_n = 2^-n solves this one exactly: r = 1, q = 1/2, f = 0, b_n = (1 + 2^{tau-1}) 2^-n / 4.
inline ProblemSpec manufactured(Index tau, Index sigma = 0) {
  const double c = (1.0 + std::ldexp(1.0, static_cast<int>(tau) - 1)) / 4.0;
  return make(tau, sigma, seq::Constant{1.0}, seq::Constant{0.0}, seq::Geometric{c, 0.5}, seq::Constant{0.5},
              fn::Linear{0.0, 0.0});
}

inline Window manufactured_solution(Index start, Index end) {
  std::vector<double> v;
  for (Index n = start; n <= end; ++n) v.push_back(std::ldexp(1.0, -static_cast<int>(n)));
  return Window(start, v);
}

/// Seed from QDIFF_SEED when set, so failures can be replayed.
inline std::uint64_t seed(std::uint64_t fallback) {
  if (const char* s = std::getenv("QDIFF_SEED")) return std::strtoull(s, nullptr, 10);
  return fallback;
}

class Gen {
 public:
  explicit Gen(std::uint64_t s) : rng_(s) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  Index index(Index lo, Index hi) { return std::uniform_int_distribution<Index>(lo, hi)(rng_); }
  bool coin() { return index(0, 1) == 1; }

  Window window(Index start, Index end, double radius) {
    std::vector<double> v;
    for (Index n = start; n <= end; ++n) v.push_back(uniform(-radius, radius));
    return Window(start, v);
  }

  /// Random problem from well-behaved kinds: geometric a, b; constant or
  /// alternating r; |q| < 1; sine-power or linear f.
  ProblemSpec problem(Index max_tau = 4) {
    const Index tau = index(1, max_tau);
    const Index sigma = index(0, tau - 1);
    const SequenceForm r = coin() ? SequenceForm(seq::Constant{uniform(0.5, 2.0)})
                                  : SequenceForm(seq::Alternating{uniform(0.5, 2.0)});
    const SequenceForm a = seq::Geometric{uniform(-1.0, 1.0), uniform(0.2, 0.7)};
    const SequenceForm b = seq::Geometric{uniform(-1.0, 1.0), uniform(0.2, 0.7)};
    const SequenceForm q = seq::Constant{uniform(-0.6, 0.6)};
    const FunctionForm f = coin() ? FunctionForm(fn::SinePower{static_cast<int>(index(1, 4)), 1.0, 1.0})
                                  : FunctionForm(fn::Linear{uniform(-0.5, 0.5), 0.0});
    return make(tau, sigma, r, a, b, q, f);
  }

 private:
  std::mt19937_64 rng_;
};

/// sum_{s=n}^{N} |1/r_s| sum_{t=s}^{N} (|a_t| Q + |b_t|) in long double.
inline long double naive_double_tail(const ProblemSpec& p, double Q, Index n, Index N) {
  long double inner = 0.0L, outer = 0.0L;
  for (Index s = N; s >= n; --s) {
    inner += std::abs(p.a().eval(s)) * static_cast<long double>(Q) + std::abs(p.b().eval(s));
    outer += inner / std::abs(p.r().eval(s));
  }
  return outer;
}

/// (T2 x)_n with the tail flavor, summed directly to horizon H (x read as 0 outside).
inline long double naive_T2_tail(const ProblemSpec& p, const Window& x, Index n, Index H) {
  long double total = 0.0L;
  for (Index s = n; s <= H; ++s) {
    long double inner = 0.0L;
    for (Index t = s; t <= H; ++t) inner += p.a().eval(t) * p.f().eval(x.at(t - p.sigma())) + p.b().eval(t);
    total += inner / p.r().eval(s);
  }
  return total;
}

/// (T2 x)_n with partial inner sums over t in [max(sigma, 1), s - 1].
inline long double naive_T2_partial(const ProblemSpec& p, const Window& x, Index n, Index H) {
  long double total = 0.0L;
  const Index t0 = std::max<Index>(1, p.sigma());
  for (Index s = n; s <= H; ++s) {
    long double inner = 0.0L;
    for (Index t = t0; t <= s - 1; ++t) inner += p.a().eval(t) * p.f().eval(x.at(t - p.sigma())) + p.b().eval(t);
    total += inner / p.r().eval(s);
  }
  return -total;
}

/// Delta(r Delta(x + w q x_{.-tau}))_n - a_n f(x_{n-sigma}) - b_n, written out term by term.
inline long double naive_residual(const ProblemSpec& p, const Window& x, Index n, double w = 1.0) {
  auto y = [&](Index m) -> long double {
    return static_cast<long double>(x.at(m)) + static_cast<long double>(w) * p.q().eval(m) * x.at(m - p.tau());
  };
  const long double z0 = p.r().eval(n) * (y(n + 1) - y(n));
  const long double z1 = p.r().eval(n + 1) * (y(n + 2) - y(n + 1));
  return (z1 - z0) - static_cast<long double>(p.a().eval(n)) * p.f().eval(x.at(n - p.sigma())) - p.b().eval(n);
}

inline double sup_abs_diff(const Window& x, const Window& y) {
  double m = 0.0;
  for (Index n = std::min(x.start(), y.start()); n <= std::max(x.end(), y.end()); ++n)
    m = std::max(m, std::abs(x.at(n) - y.at(n)));
  return m;
}

inline double sup_abs(const Window& x) {
  double m = 0.0;
  for (double v : x.values()) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace qdiff::testing

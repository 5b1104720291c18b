#include "qdiff/operators.hpp"

#include <algorithm>
#include <cmath>

#include "qdiff/errors.hpp"

namespace qdiff {

Index min_horizon(const ProblemSpec& problem, Flavor flavor, Index end) {
  return end + std::max<Index>(0, -problem.sigma()) + (flavor == Flavor::shifted ? problem.tau() : 0);
}

OperatorPair::OperatorPair(const ProblemSpec& problem, const OperatorConfig& cfg, Index start, Index end)
    : problem_(problem), cfg_(cfg), start_(start), end_(end) {
  if (start < 1 || end < start) throw PreconditionError("operator window needs 1 <= start <= end");
  if (cfg.n0 < 1) throw PreconditionError("n0 must be >= 1");
  if (!(cfg.scale > 0.0)) throw PreconditionError("scale w must be > 0");
  if (cfg.flavor != Flavor::shifted && cfg.scale > 1.0) throw PreconditionError("scale w must lie in (0, 1]");
  if (!(cfg.radius > 0.0)) throw PreconditionError("ball radius must be > 0");
  const Index need = min_horizon(problem, cfg.flavor, end);
  H_ = cfg.horizon == 0 ? need : cfg.horizon;
  if (H_ < need) {
    throw PreconditionError("horizon " + std::to_string(H_) + " below the required " + std::to_string(need));
  }
  cfg_.horizon = H_;
  active_from_ = cfg.flavor == Flavor::shifted ? cfg.n0 : cfg.n0 + problem.beta();
  Q_ = cfg.f_bound ? *cfg.f_bound : estimate_f_meta(problem.f(), cfg.radius).Q;

  const std::size_t len = static_cast<std::size_t>(H_ + 2);
  r_.assign(len, 0.0);
  a_.assign(len, 0.0);
  b_.assign(len, 0.0);
  q_.assign(len, 0.0);
  for (Index n = 1; n <= H_ + 1; ++n) {
    const std::size_t i = static_cast<std::size_t>(n);
    r_[i] = problem.r().eval(n);
    a_[i] = problem.a().eval(n);
    b_[i] = problem.b().eval(n);
    q_[i] = problem.q().eval(n);
  }
  if (cfg.flavor == Flavor::shifted) {
    for (Index n = std::max(active_from_, start_); n <= end_; ++n) {
      if (!(cfg.scale * q(n + problem.tau()) > 1.0))
        throw PreconditionError("shifted operators need w q_n > 1; fails at n = " + std::to_string(n + problem.tau()));
    }
  }

  // Truncation bounds. e is the last inner index whose read x_{t-sigma} lies in the window.
  const Index e = end_ + problem.sigma();
  const double two_q = 2.0 * Q_;
  const Flavor series_flavor = cfg.flavor == Flavor::partial ? Flavor::partial : Flavor::tail;
  const double outer =
      tail_profile(problem.r(), problem.a(), problem.b(), Q_, series_flavor, problem.sigma(), H_ + 1, H_ + 1, 2 * H_ + 64)
          .at(H_ + 1)
          .hi;
  const Index lo = std::max(active_from_, start_);
  std::vector<double> err(len, 0.0);  // err[m] bounds the truncation of the inner series started at m

  if (series_flavor == Flavor::tail) {
    const double rest = Q_ * problem.a().tail_majorant(H_ + 1) + problem.b().tail_majorant(H_ + 1);
    double beyond = 0.0, ir_sum = 0.0, bw = 0.0;
    for (Index s = H_; s >= std::min(lo, H_); --s) {
      const double ir = 1.0 / std::abs(r(s));
      if (s > e) beyond += two_q * std::abs(a(s));
      ir_sum += ir;
      bw += ir * beyond;
      err[static_cast<std::size_t>(s)] = ir_sum * rest + outer + bw;
    }
  } else {
    // partial: inner sums over t in [sigma, s-1]; out-of-window reads for t > e
    std::vector<double> v2(len, 0.0);
    double acc = 0.0;
    for (Index s = std::max<Index>(1, e + 2); s <= H_; ++s) {
      acc += two_q * std::abs(a(s - 1));
      v2[static_cast<std::size_t>(s)] = acc;
    }
    double bw = 0.0;
    for (Index s = H_; s >= std::min(lo, H_); --s) {
      bw += v2[static_cast<std::size_t>(s)] / std::abs(r(s));
      err[static_cast<std::size_t>(s)] = outer + bw;
    }
  }

  trunc_profile_.assign(static_cast<std::size_t>(end_ - start_ + 1), 0.0);
  for (Index n = lo; n <= end_; ++n) {
    double t2 = 0.0, t1 = 0.0;
    if (cfg.flavor == Flavor::shifted) {
      const Index m = n + problem.tau();
      const double scale = 1.0 / (cfg.scale * std::abs(q(m)));
      t2 = scale * err[static_cast<std::size_t>(m)];
      if (m > end_) t1 = scale * cfg.radius;
    } else {
      t2 = err[static_cast<std::size_t>(n)];
    }
    trunc_t1_ = std::max(trunc_t1_, t1);
    trunc_t2_ = std::max(trunc_t2_, t2);
    trunc_profile_[static_cast<std::size_t>(n - start_)] = t1 + t2;
  }
}

void OperatorPair::check_window(const Window& x) const {
  if (x.start() != start_ || x.end() != end_) {
    throw PreconditionError("window [" + std::to_string(x.start()) + ", " + std::to_string(x.end()) +
                            "] does not match the prepared range [" + std::to_string(start_) + ", " +
                            std::to_string(end_) + "]");
  }
}

std::vector<double> OperatorPair::tail_sums(const Window& x, Index lo) const {
  std::vector<double> U(static_cast<std::size_t>(H_ + 2), 0.0);
  const Index sigma = problem_.sigma();
  const FunctionSpec& f = problem_.f();
  double inner = 0.0, outer = 0.0;
  for (Index s = H_; s >= lo; --s) {
    inner += a(s) * f.eval(x.at(s - sigma)) + b(s);
    outer += inner / r(s);
    U[static_cast<std::size_t>(s)] = outer;
  }
  return U;
}

Window OperatorPair::T1(const Window& x) const {
  check_window(x);
  Window out = Window::zeros(start_, end_);
  const Index tau = problem_.tau();
  const double w = cfg_.scale;
  for (Index n = std::max(active_from_, start_); n <= end_; ++n) {
    if (cfg_.flavor == Flavor::shifted) {
      out[n] = -x.at(n + tau) / (w * q(n + tau));
    } else {
      out[n] = -w * q(n) * x.at(n - tau);
    }
  }
  return out;
}

Window OperatorPair::T2(const Window& x) const {
  check_window(x);
  Window out = Window::zeros(start_, end_);
  const Index lo = std::max(active_from_, start_);
  if (lo > end_) return out;

  if (cfg_.flavor == Flavor::tail) {
    const auto U = tail_sums(x, lo);
    for (Index n = lo; n <= end_; ++n) out[n] = U[static_cast<std::size_t>(n)];
    return out;
  }
  if (cfg_.flavor == Flavor::shifted) {
    const Index tau = problem_.tau();
    const auto U = tail_sums(x, lo + tau);
    for (Index n = lo; n <= end_; ++n) out[n] = U[static_cast<std::size_t>(n + tau)] / (cfg_.scale * q(n + tau));
    return out;
  }

  // partial: V(s) = sum_{t=t0}^{s-1} h_t, out(n) = -sum_{s=n}^{H} V(s)/r_s
  const Index sigma = problem_.sigma();
  const Index t0 = std::max<Index>(1, sigma);
  const FunctionSpec& f = problem_.f();
  std::vector<double> V(static_cast<std::size_t>(H_ + 2), 0.0);
  double acc = 0.0;
  for (Index s = 1; s <= H_; ++s) {
    V[static_cast<std::size_t>(s)] = acc;
    if (s >= t0) acc += a(s) * f.eval(x.at(s - sigma)) + b(s);
  }
  double tail = 0.0;
  for (Index s = H_; s >= lo; --s) {
    tail += V[static_cast<std::size_t>(s)] / r(s);
    if (s <= end_) out[s] = -tail;
  }
  return out;
}

Window OperatorPair::apply(const Window& x, const Window& y) const {
  Window out = T1(x);
  const Window t2 = T2(y);
  for (Index n = start_; n <= end_; ++n) out[n] += t2[n];
  return out;
}

Window apply_T1(const ProblemSpec& problem, const Window& x, const OperatorConfig& cfg) {
  OperatorConfig c = cfg;
  if (c.flavor == Flavor::shifted) c.flavor = Flavor::tail;
  if (!c.f_bound) c.f_bound = 0.0;  // T1 never evaluates f
  return OperatorPair(problem, c, x.start(), x.end()).T1(x);
}

namespace {

OperatorOutput apply_T2_flavor(const ProblemSpec& problem, const Window& x, OperatorConfig cfg, Flavor flavor) {
  cfg.flavor = flavor;
  OperatorPair pair(problem, cfg, x.start(), x.end());
  return OperatorOutput{pair.T2(x), pair.truncation_error_T2()};
}

}  // namespace

OperatorOutput apply_T2_tail(const ProblemSpec& problem, const Window& x, const OperatorConfig& cfg) {
  return apply_T2_flavor(problem, x, cfg, Flavor::tail);
}

OperatorOutput apply_T2_partial(const ProblemSpec& problem, const Window& x, const OperatorConfig& cfg) {
  return apply_T2_flavor(problem, x, cfg, Flavor::partial);
}

OperatorOutput apply_shifted(const ProblemSpec& problem, const Window& x, const OperatorConfig& cfg) {
  OperatorConfig c = cfg;
  c.flavor = Flavor::shifted;
  OperatorPair pair(problem, c, x.start(), x.end());
  return OperatorOutput{pair.apply(x, x), pair.truncation_error()};
}

}  // namespace qdiff

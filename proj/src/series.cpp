#include "qdiff/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qdiff/errors.hpp"
#include "tail_engine.hpp"

namespace qdiff {
namespace detail {
namespace {

constexpr double kUnitRoundoff = std::numeric_limits<double>::epsilon() / 2.0;

bool identically_zero(const SequenceSpec& s) {
  try {
    return s.tail_majorant(1) == 0.0;
  } catch (const DivergenceError&) {
    return false;
  }
}

/// Nonnegative sum with a running (first-order, doubled) bound on its rounding
/// error; each added term carries `rel` units of relative evaluation error and
/// an absolute error `abs_in` inherited from its inputs.
struct RunningSum {
  double sum = 0.0;
  double err = 0.0;

  void add(double term, double rel, double abs_in = 0.0) {
    sum += term;
    err += abs_in + rel * kUnitRoundoff * term + kUnitRoundoff * sum;
  }
  double lo() const { return std::max(0.0, sum - 2.0 * err); }
  double hi(double extra = 0.0) const { return (sum + extra) * (1.0 + 4.0 * kUnitRoundoff) + 2.0 * err; }
};

}  // namespace

TailEngine::TailEngine(const SequenceSpec& r, const SequenceSpec& a, const SequenceSpec& b, double weight_a,
                       Flavor flavor, Index sigma)
    : r_(r),
      a_(a),
      b_(b),
      weight_a_(weight_a),
      flavor_(flavor == Flavor::partial ? Flavor::partial : Flavor::tail),
      inner_start_(std::max<Index>(1, sigma)),
      a_used_(weight_a > 0.0 && !identically_zero(a)),
      b_used_(!identically_zero(b)),
      inv_r_maj_(r.inv_abs_majorant()) {
  if (!(weight_a >= 0.0) || !std::isfinite(weight_a)) throw PreconditionError("series weight must be finite and >= 0");

  std::optional<Majorant> tail_fn = Majorant();
  if (a_used_) {
    auto m = a.tail_majorant_fn();
    tail_fn = m ? std::optional<Majorant>(*tail_fn + m->scaled(weight_a)) : std::nullopt;
  }
  if (b_used_ && tail_fn) {
    auto m = b.tail_majorant_fn();
    tail_fn = m ? std::optional<Majorant>(*tail_fn + *m) : std::nullopt;
  }
  g_tail_fn_ = tail_fn;

  try {
    Majorant abs_maj;
    if (a_used_) abs_maj = abs_maj + a.abs_majorant().scaled(weight_a);
    if (b_used_) abs_maj = abs_maj + b.abs_majorant();
    g_partial_fn_ = abs_maj.partial_sum_fn();
  } catch (const DivergenceError&) {
    g_partial_fn_.reset();
  }

  Index need = inv_r_maj_.valid_from();
  if (g_tail_fn_) need = std::max(need, g_tail_fn_->valid_from());
  if (g_partial_fn_) need = std::max(need, g_partial_fn_->valid_from());
  try {
    need = std::max(need, value_envelope(1.0).valid_from());
  } catch (const DivergenceError&) {
    // no envelope: only lp evaluation needs it and will report the divergence
  }
  min_cutoff_ = std::max<Index>(1, need - 1);
}

double TailEngine::g(Index t) const {
  double v = 0.0;
  if (a_used_) v += weight_a_ * std::abs(a_.eval(t));
  if (b_used_) v += std::abs(b_.eval(t));
  return v;
}

double TailEngine::inv_r(Index s) const { return 1.0 / std::abs(r_.eval(s)); }

double TailEngine::first_term(Index n) const {
  if (flavor_ == Flavor::tail) return inv_r(n) * g(n);
  double v = 0.0;
  for (Index t = inner_start_; t < n; ++t) v += g(t);
  return inv_r(n) * v;
}

double TailEngine::g_tail(Index n) const {
  double v = 0.0;
  if (a_used_) v += weight_a_ * a_.tail_majorant(n);
  if (b_used_) v += b_.tail_majorant(n);
  return v;
}

double TailEngine::outer_tail(Index cutoff, double inner_at_cutoff) const {
  const Index next = cutoff + 1;
  if (flavor_ == Flavor::tail) {
    if (!g_tail_fn_) throw DivergenceError("inner tails sum_{t>=s} |a_t|, |b_t| are not summable");
    const double v = (inv_r_maj_ * *g_tail_fn_).tail_sum(next);
    if (!std::isfinite(v)) throw DivergenceError("|1/r_s| growth defeats the decay of the inner tails");
    return v;
  }
  const double ir_tail = inv_r_maj_.tail_sum(next);
  double v = 0.0;
  if (inner_at_cutoff > 0.0) {
    if (!std::isfinite(ir_tail))
      throw DivergenceError("sum |1/r_s| diverges while the partial inner sums stay positive");
    v += inner_at_cutoff * ir_tail;
  }
  if (g_tail_fn_) {
    const double rest = g_tail(next);
    if (rest > 0.0) {
      if (!std::isfinite(ir_tail)) throw DivergenceError("sum |1/r_s| diverges while the inner sums grow");
      v += rest * ir_tail;
    }
  } else {
    if (!g_partial_fn_) throw DivergenceError("no envelope for the partial inner sums");
    const double extra = (inv_r_maj_ * *g_partial_fn_).tail_sum(next);
    if (!std::isfinite(extra)) throw DivergenceError("|1/r_s| does not decay fast enough for the growing inner sums");
    v += extra;
  }
  return v;
}

Majorant TailEngine::value_envelope(double inner_at_cutoff) const {
  std::optional<Majorant> env;
  if (flavor_ == Flavor::tail) {
    if (!g_tail_fn_) throw DivergenceError("inner tails are not summable");
    env = (inv_r_maj_ * *g_tail_fn_).tail_sum_fn();
  } else if (g_tail_fn_) {
    // inner_at_cutoff already includes the remaining inner mass here
    env = inv_r_maj_.scaled(inner_at_cutoff).tail_sum_fn();
  } else {
    if (!g_partial_fn_) throw DivergenceError("no envelope for the partial inner sums");
    env = (inv_r_maj_.scaled(inner_at_cutoff) + inv_r_maj_ * *g_partial_fn_).tail_sum_fn();
  }
  if (!env) throw DivergenceError("outer series has no summable envelope");
  return *env;
}

TailProfile TailEngine::run(Index from, Index to, Index cutoff) const {
  if (from < 1 || to < from) throw PreconditionError("tail profile needs 1 <= from <= to");
  const Index N = std::max({cutoff, to, min_cutoff_});
  TailProfile prof;
  prof.from = from;
  prof.cutoff = N;
  const std::size_t len = static_cast<std::size_t>(to - from + 1);
  prof.lo.assign(len, 0.0);
  prof.hi.assign(len, 0.0);

  if (flavor_ == Flavor::tail) {
    const double rest = g_tail(N + 1);
    const double outer = outer_tail(N, 0.0);
    RunningSum inner, acc, ir_sum;
    for (Index s = N; s >= from; --s) {
      const double ir = inv_r(s);
      inner.add(g(s), 8.0);
      acc.add(ir * inner.sum, 10.0, ir * inner.err);
      ir_sum.add(ir, 8.0);
      if (s <= to) {
        const std::size_t i = static_cast<std::size_t>(s - from);
        prof.lo[i] = acc.lo();
        prof.hi[i] = acc.hi(ir_sum.sum * rest + outer) + 2.0 * ir_sum.err * rest;
      }
    }
    return prof;
  }

  // partial flavor: V(s) = sum_{t=inner_start}^{s-1} g_t for s in [from, N+1]
  std::vector<double> V(static_cast<std::size_t>(N + 2 - from), 0.0);
  std::vector<double> V_err(V.size(), 0.0);
  RunningSum run_sum;
  for (Index t = inner_start_; t < from; ++t) run_sum.add(g(t), 8.0);
  for (Index s = from; s <= N + 1; ++s) {
    V[static_cast<std::size_t>(s - from)] = run_sum.sum;
    V_err[static_cast<std::size_t>(s - from)] = run_sum.err;
    if (s >= inner_start_) run_sum.add(g(s), 8.0);
  }
  const double outer = outer_tail(N, V.back() + 2.0 * V_err.back());
  RunningSum acc;
  for (Index s = N; s >= from; --s) {
    const std::size_t j = static_cast<std::size_t>(s - from);
    const double ir = inv_r(s);
    acc.add(ir * V[j], 10.0, ir * V_err[j]);
    if (s <= to) {
      const std::size_t i = static_cast<std::size_t>(s - from);
      prof.lo[i] = acc.lo();
      prof.hi[i] = acc.hi(outer);
    }
  }
  return prof;
}

TailProfile TailEngine::run_lp(double p, Index from, Index to, Index cutoff) const {
  if (!(p >= 1.0)) throw PreconditionError("p must be >= 1");
  const Index N = std::max({cutoff, to, min_cutoff_});
  TailProfile s = run(from, N, N);
  double cap = 0.0;
  if (flavor_ == Flavor::partial) {
    for (Index t = inner_start_; t <= N; ++t) cap += g(t);
    if (g_tail_fn_) cap += g_tail(N + 1);
  }
  const double outer = value_envelope(cap).pow(p).tail_sum(N + 1);
  if (!std::isfinite(outer)) throw DivergenceError("p-th powers of the double tails are not summable");

  TailProfile prof;
  prof.from = from;
  prof.cutoff = N;
  const std::size_t len = static_cast<std::size_t>(to - from + 1);
  prof.lo.assign(len, 0.0);
  prof.hi.assign(len, 0.0);
  RunningSum lo, hi;
  for (Index n = N; n >= from; --n) {
    const std::size_t j = static_cast<std::size_t>(n - from);
    lo.add(std::pow(s.lo[j], p), 4.0);
    hi.add(std::pow(s.hi[j], p), 4.0);
    if (n <= to) {
      prof.lo[j] = lo.lo();
      prof.hi[j] = hi.hi(outer);
    }
  }
  return prof;
}

namespace {

template <class Run>
TailProfile adapt(Index from, Index to, Index min_cutoff, double tol, Run&& run) {
  if (!(tol > 0.0)) throw PreconditionError("tolerance must be > 0");
  Index N = std::max({2 * to, from + 64, min_cutoff});
  for (;;) {
    TailProfile prof = run(N);
    const Enclosure e = prof.at(from);
    if (e.width() <= tol) return prof;
    if (N >= kMaxCutoff) {
      throw ToleranceError("enclosure width " + std::to_string(e.width()) + " above tolerance " + std::to_string(tol) +
                               " at cutoff cap",
                           e);
    }
    N = std::min(2 * N, kMaxCutoff);
  }
}

}  // namespace

TailProfile TailEngine::adaptive(Index from, Index to, double tol) const {
  return adapt(from, to, min_cutoff_, tol, [&](Index N) { return run(from, to, N); });
}

TailProfile TailEngine::adaptive_lp(double p, Index from, Index to, double tol) const {
  return adapt(from, to, min_cutoff_, tol, [&](Index N) { return run_lp(p, from, to, N); });
}

const SequenceSpec& zero_ref() {
  static const SequenceSpec zero = zero_sequence();
  return zero;
}

}  // namespace detail

using detail::TailEngine;
using detail::zero_ref;

std::string to_string(Flavor f) {
  switch (f) {
    case Flavor::tail:
      return "tail";
    case Flavor::partial:
      return "partial";
    case Flavor::shifted:
      return "shifted";
  }
  return "tail";
}

Flavor flavor_from_string(const std::string& s) {
  if (s == "tail") return Flavor::tail;
  if (s == "partial") return Flavor::partial;
  if (s == "shifted") return Flavor::shifted;
  throw ValidationError("flavor", "expected tail|partial|shifted, got '" + s + "'");
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::holds:
      return "holds";
    case Verdict::fails:
      return "fails";
    case Verdict::undecidable:
      return "undecidable-at-horizon";
  }
  return "undecidable-at-horizon";
}

Enclosure TailProfile::at(Index n) const {
  if (n < from || n > to()) throw PreconditionError("index outside tail profile");
  const std::size_t i = static_cast<std::size_t>(n - from);
  return Enclosure(lo[i], hi[i]);
}

namespace {

double default_tol(double first) { return 1e-12 * std::max(1.0, first); }

}  // namespace

Enclosure double_tail(const SequenceSpec& r, const SequenceSpec& a, const SequenceSpec& b, double Q, Index n,
                      std::optional<double> tol) {
  if (n < 1) throw PreconditionError("double_tail needs n >= 1");
  TailEngine eng(r, a, b, Q, Flavor::tail, 1);
  return eng.adaptive(n, n, tol.value_or(default_tol(eng.first_term(n)))).at(n);
}

Enclosure partial_double_tail(const SequenceSpec& r, const SequenceSpec& a, const SequenceSpec& b, double Q,
                              Index sigma, Index n, std::optional<double> tol) {
  if (n < 1) throw PreconditionError("partial_double_tail needs n >= 1");
  TailEngine eng(r, a, b, Q, Flavor::partial, sigma);
  return eng.adaptive(n, n, tol.value_or(default_tol(eng.first_term(n)))).at(n);
}

Enclosure lp_series(const SequenceSpec& r, const SequenceSpec& c, double p, Index n0, std::optional<double> tol,
                    Flavor flavor, Index sigma) {
  if (n0 < 1) throw PreconditionError("lp_series needs n0 >= 1");
  if (!(p >= 1.0)) throw PreconditionError("lp_series needs p >= 1");
  TailEngine eng(r, c, zero_ref(), 1.0, flavor, sigma);
  const double first = std::pow(eng.first_term(n0), p);
  return eng.adaptive_lp(p, n0, n0, tol.value_or(default_tol(first))).at(n0);
}

TailProfile tail_profile(const SequenceSpec& r, const SequenceSpec& a, const SequenceSpec& b, double Q, Flavor flavor,
                         Index sigma, Index from, Index to, Index cutoff) {
  TailEngine eng(r, a, b, Q, flavor, sigma);
  return eng.run(from, to, cutoff);
}

// ---------------------------------------------------------------------------
// n0 scans

namespace {

double q_sup(const ProblemSpec& problem, double scale) {
  const ValueRange rg = problem.q().range(1);
  return scale * rg.sup_abs();
}

double q_inf(const ProblemSpec& problem, double scale) {
  const ValueRange rg = problem.q().range(1);
  return scale * rg.inf;
}

// Doubles the cutoff until the profiles are tight at `from` (or the limit is
// reached), then returns the first index accepted by `ok`.
template <class Profiles, class Accept>
Index scan_first(Index from, Index limit, Index min_cutoff, Profiles&& profiles, Accept&& ok, Index& last_cutoff) {
  Index N = std::max({2 * from, from + 64, min_cutoff});
  for (;;) {
    N = std::min(N, std::max(limit, from));
    const bool tight = profiles(N);
    last_cutoff = N;
    if (tight || N >= limit) {
      for (Index n = from; n <= N; ++n)
        if (ok(n)) return n;
      if (N >= limit) return -1;
    }
    if (N >= kMaxCutoff) return -1;
    N = std::min(2 * N, kMaxCutoff);
  }
}

}  // namespace

N0Result find_n0(const ProblemSpec& problem, double M, Flavor flavor, const ScanOptions& opts) {
  if (!(M > 0.0)) throw PreconditionError("find_n0 needs M > 0");
  if (!(opts.scale > 0.0)) throw PreconditionError("scale w must be > 0");
  N0Result out;
  if (flavor == Flavor::shifted) {
    out.q_star = q_inf(problem, opts.scale);
    if (!(out.q_star > 1.0))
      throw PreconditionError("shifted flavor needs inf q > 1, got " + std::to_string(out.q_star));
    out.threshold = (1.0 - 1.0 / out.q_star) * M;
  } else {
    out.q_star = q_sup(problem, opts.scale);
    if (!(out.q_star < 1.0)) throw PreconditionError("need sup|q| < 1, got q* = " + std::to_string(out.q_star));
    out.threshold = (1.0 - out.q_star) * M;
  }
  const double Q = opts.f_bound ? *opts.f_bound : estimate_f_meta(problem.f(), M).Q;
  const Flavor series_flavor = flavor == Flavor::partial ? Flavor::partial : Flavor::tail;
  const Index from = problem.beta() + 1;

  TailEngine eng(problem.r(), problem.a(), problem.b(), Q, series_flavor, problem.sigma());
  std::optional<TailEngine> eng_a;
  if (opts.lipschitz) eng_a.emplace(problem.r(), problem.a(), zero_ref(), *opts.lipschitz, series_flavor, problem.sigma());

  const double tol = default_tol(eng.first_term(from));
  TailProfile prof, prof_a;
  auto kappa_at = [&](Index n) {
    const double sa = prof_a.at(n).hi;
    return flavor == Flavor::shifted ? (1.0 + sa) / out.q_star : out.q_star + sa;
  };
  auto profiles = [&](Index N) {
    prof = eng.run(from, N, N);
    bool tight = prof.at(from).width() <= tol;
    if (eng_a) {
      prof_a = eng_a->run(from, N, N);
      tight = tight && prof_a.at(from).width() <= tol;
    }
    return tight;
  };
  auto ok = [&](Index n) {
    if (!(prof.at(n).hi < out.threshold)) return false;
    return !eng_a || kappa_at(n) < 1.0;
  };
  Index cutoff = 0;
  const Index n0 = scan_first(from, opts.limit, std::max(eng.min_cutoff(), eng_a ? eng_a->min_cutoff() : 1), profiles,
                              ok, cutoff);
  if (n0 < 0) {
    throw ScanExhausted("no n0 <= " + std::to_string(cutoff) + " satisfies the ball condition" +
                            (eng_a ? std::string(" with contraction") : std::string()),
                        cutoff, prof.hi.empty() ? std::nullopt : std::optional<Enclosure>(prof.at(prof.to())));
  }
  out.n0 = n0;
  out.S = prof.at(n0);
  if (eng_a) {
    out.S_a = prof_a.at(n0);
    out.kappa = kappa_at(n0);
  }
  return out;
}

N0LpResult find_n0_lp(const ProblemSpec& problem, double p, Flavor flavor, const ScanOptions& opts) {
  if (!(p >= 1.0)) throw PreconditionError("p must be >= 1");
  if (flavor == Flavor::shifted) throw PreconditionError("the lp construction has no shifted flavor");
  N0LpResult out;
  out.q_star = q_sup(problem, opts.scale);
  const double q_cap = std::pow(2.0, 1.0 - p);
  if (!(out.q_star < q_cap))
    throw PreconditionError("need q* < 2^{1-p} = " + std::to_string(q_cap) + ", got " + std::to_string(out.q_star));
  out.W = opts.f_bound ? *opts.f_bound : estimate_f_meta(problem.f(), 1.0).Q;
  out.rhs = 1.0 - std::pow(2.0, p - 1.0) * out.q_star;
  const double c4 = std::pow(4.0, p - 1.0);
  const double Wp = std::pow(out.W, p);
  const Index from = problem.beta() + 1;

  TailEngine eng_a(problem.r(), problem.a(), zero_ref(), 1.0, flavor, problem.sigma());
  TailEngine eng_b(problem.r(), zero_ref(), problem.b(), 1.0, flavor, problem.sigma());
  TailProfile A, B;
  const double tol = 1e-12;
  auto profiles = [&](Index N) {
    A = eng_a.run_lp(p, from, N, N);
    B = eng_b.run_lp(p, from, N, N);
    return A.at(from).width() <= tol && B.at(from).width() <= tol;
  };
  auto lhs_hi = [&](Index n) { return c4 * (Wp * A.at(n).hi + B.at(n).hi); };
  auto kappa_at = [&](Index n) { return out.q_star + *opts.lipschitz * std::pow(A.at(n).hi, 1.0 / p); };
  auto ok = [&](Index n) {
    if (!(lhs_hi(n) < out.rhs)) return false;
    return !opts.lipschitz || kappa_at(n) < 1.0;
  };
  Index cutoff = 0;
  const Index n0 =
      scan_first(from, opts.limit, std::max(eng_a.min_cutoff(), eng_b.min_cutoff()), profiles, ok, cutoff);
  if (n0 < 0) throw ScanExhausted("no n0 satisfies the lp ball condition", cutoff, std::nullopt);
  out.n0 = n0;
  out.A = A.at(n0);
  out.B = B.at(n0);
  out.lhs = Enclosure(c4 * (Wp * out.A.lo + out.B.lo), lhs_hi(n0));
  if (opts.lipschitz) out.kappa = kappa_at(n0);
  return out;
}

// ---------------------------------------------------------------------------
// H_sb scan

HsbScan scan_Hsb(const ProblemSpec& problem, double P, double C, double rho, double D, Index k_max) {
  if (!(C > 0.0 && C < 1.0)) throw PreconditionError("C must lie in (0, 1)");
  if (!(rho > 0.0 && rho < 1.0)) throw PreconditionError("schedule rho must lie in (0, 1)");
  if (!(D > 0.0)) throw PreconditionError("D must be > 0");
  if (k_max < 1) throw PreconditionError("k_max must be >= 1");
  TailEngine eng(problem.r(), problem.a(), problem.b(), P, Flavor::tail, 1);
  TailProfile prof = eng.run(1, k_max, 2 * k_max + 64);
  HsbScan out;
  out.D = D;
  out.ratio.resize(static_cast<std::size_t>(k_max));
  for (Index k = 1; k <= k_max; ++k) {
    const double w = 1.0 - std::pow(rho, static_cast<double>(k));
    const double bound = std::pow(rho, static_cast<double>(k)) * std::pow(C * w, static_cast<double>(k));
    const double s = prof.at(k).hi;
    out.ratio[static_cast<std::size_t>(k - 1)] = s == 0.0 ? 0.0 : (bound > 0.0 ? s / bound : std::numeric_limits<double>::infinity());
  }
  Index k0 = -1;
  for (Index k = k_max; k >= 1; --k) {
    if (out.ratio[static_cast<std::size_t>(k - 1)] <= D)
      k0 = k;
    else
      break;
  }
  if (k0 > 0) out.k0 = k0;
  return out;
}

// ---------------------------------------------------------------------------
// hypotheses

const std::vector<std::string>& hypothesis_ids() {
  static const std::vector<std::string> ids = {"Hfl", "Hs", "Hs'", "Hq", "Hq1", "Hsb", "Hsp", "Hqp", "H0", "H0'", "Hq=1"};
  return ids;
}

namespace {

HypothesisReport series_hypothesis(const ProblemSpec& problem, const std::string& id, Flavor flavor, Index horizon) {
  HypothesisReport rep;
  rep.id = id;
  const Index start = flavor == Flavor::partial ? std::max<Index>(1, problem.sigma() + 1) : 1;
  bool all_finite = true;
  for (const char part : {'a', 'b'}) {
    const SequenceSpec& seq = part == 'a' ? problem.a() : problem.b();
    const std::string key = std::string("S_") + part;
    try {
      TailEngine eng(problem.r(), part == 'a' ? seq : zero_ref(), part == 'b' ? seq : zero_ref(), 1.0, flavor,
                     problem.sigma());
      const Enclosure e = eng.run(start, start, horizon).at(start);
      rep.enclosures[key] = e;
      rep.witnesses[key + "_hi"] = e.hi;
    } catch (const DivergenceError& err) {
      all_finite = false;
      if (flavor == Flavor::tail && seq.summability() == Summability::divergent) {
        rep.verdict = Verdict::fails;
        rep.note += "sum |" + std::string(1, part) + "_t| diverges; ";
        continue;
      }
      if (flavor == Flavor::partial && problem.r().inv_summability() == Summability::divergent) {
        double inner = 0.0;
        for (Index t = std::max<Index>(1, problem.sigma()); t < horizon; ++t) inner += std::abs(seq.eval(t));
        if (inner > 0.0) {
          rep.verdict = Verdict::fails;
          rep.witnesses["inner_" + std::string(1, part) + "_at_horizon"] = inner;
          rep.note += "sum |1/r_s| diverges and the partial sums of |" + std::string(1, part) +
                      "| are positive at the horizon; ";
          continue;
        }
      }
      if (rep.verdict != Verdict::fails) rep.verdict = Verdict::undecidable;
      rep.note += std::string(1, part) + "-part: " + err.what() + "; ";
    }
  }
  if (all_finite) rep.verdict = Verdict::holds;
  return rep;
}

HypothesisReport lp_hypothesis(const ProblemSpec& problem, double p, Index horizon) {
  HypothesisReport rep;
  rep.id = "Hsp";
  rep.witnesses["p"] = p;
  bool all_finite = true;
  for (const char part : {'a', 'b'}) {
    const SequenceSpec& seq = part == 'a' ? problem.a() : problem.b();
    try {
      TailEngine eng(problem.r(), part == 'a' ? seq : zero_ref(), part == 'b' ? seq : zero_ref(), 1.0, Flavor::tail,
                     problem.sigma());
      const Enclosure e = eng.run_lp(p, 1, 1, horizon).at(1);
      rep.enclosures[std::string(part == 'a' ? "A" : "B")] = e;
      rep.witnesses[std::string(part == 'a' ? "A_hi" : "B_hi")] = e.hi;
    } catch (const DivergenceError& err) {
      all_finite = false;
      if (seq.summability() == Summability::divergent) {
        rep.verdict = Verdict::fails;
        rep.note += "sum |" + std::string(1, part) + "_t| diverges; ";
      } else {
        if (rep.verdict != Verdict::fails) rep.verdict = Verdict::undecidable;
        rep.note += std::string(1, part) + "-part: " + err.what() + "; ";
      }
    }
  }
  if (all_finite) rep.verdict = Verdict::holds;
  return rep;
}

}  // namespace

std::vector<HypothesisReport> check_hypotheses(const ProblemSpec& problem, const std::vector<std::string>& ids,
                                               Index horizon, const HypothesisParams& params) {
  if (horizon < 1) throw PreconditionError("horizon must be >= 1");
  const Index N = std::max<Index>(horizon, 64);
  const ValueRange qr = problem.q().range(1);
  std::vector<HypothesisReport> out;
  for (const auto& id : ids) {
    HypothesisReport rep;
    rep.id = id;
    if (id == "Hfl") {
      const FMeta meta = estimate_f_meta(problem.f(), params.M);
      rep.verdict = Verdict::holds;
      rep.witnesses["M"] = params.M;
      rep.witnesses["L"] = meta.L;
      rep.witnesses["Q"] = meta.Q;
      rep.note = meta.analytic ? "analytic bounds" : "dense-grid estimate";
    } else if (id == "Hs") {
      rep = series_hypothesis(problem, id, Flavor::tail, N);
    } else if (id == "Hs'") {
      rep = series_hypothesis(problem, id, Flavor::partial, N);
    } else if (id == "Hq" || id == "Hqp") {
      const double q_star = qr.sup_abs();
      rep.witnesses["q_star"] = q_star;
      const double cap = id == "Hq" ? 1.0 : std::pow(2.0, 1.0 - params.p);
      if (id == "Hqp") rep.witnesses["p"] = params.p;
      if (!qr.exact) {
        rep.verdict = Verdict::undecidable;
      } else if (q_star < cap && (id == "Hq" || q_star > 0.0)) {
        rep.verdict = Verdict::holds;
      } else {
        rep.verdict = Verdict::fails;
        rep.note = "sup|q_n| = " + std::to_string(q_star);
      }
    } else if (id == "Hq1") {
      rep.witnesses["q_star"] = qr.inf;
      rep.verdict = !qr.exact ? Verdict::undecidable : (qr.inf > 1.0 ? Verdict::holds : Verdict::fails);
    } else if (id == "Hq=1") {
      rep.witnesses["inf_q"] = qr.inf;
      rep.witnesses["sup_q"] = qr.sup;
      if (qr.limit) rep.witnesses["limit_q"] = *qr.limit;
      if (!qr.exact) {
        rep.verdict = Verdict::undecidable;
      } else {
        const bool inside = qr.inf > 0.0 && (qr.sup < 1.0 || (qr.sup == 1.0 && !qr.sup_attained));
        const bool to_one = qr.limit && *qr.limit == 1.0;
        rep.verdict = inside && to_one ? Verdict::holds : Verdict::fails;
      }
    } else if (id == "Hsb") {
      rep.witnesses["C"] = params.C;
      rep.witnesses["rho"] = params.rho;
      const auto P = problem.f().global_bound();
      if (!P) {
        rep.verdict = Verdict::undecidable;
        rep.note = "f has no global bound";
      } else {
        try {
          const HsbScan scan = scan_Hsb(problem, *P, params.C, params.rho, params.D, params.k_max);
          rep.witnesses["P"] = *P;
          rep.witnesses["D"] = scan.D;
          rep.witnesses["ratio_at_kmax"] = scan.ratio.back();
          if (scan.k0) {
            rep.verdict = Verdict::holds;
            rep.witnesses["k0"] = static_cast<double>(*scan.k0);
          } else {
            rep.verdict = Verdict::undecidable;
            rep.note = "no k0 within the scanned range";
          }
        } catch (const DivergenceError& e) {
          rep.verdict = problem.a().summability() == Summability::divergent ||
                                problem.b().summability() == Summability::divergent
                            ? Verdict::fails
                            : Verdict::undecidable;
          rep.note = e.what();
        }
      }
    } else if (id == "Hsp") {
      rep = lp_hypothesis(problem, params.p, N);
    } else if (id == "H0" || id == "H0'") {
      rep.witnesses["tau"] = static_cast<double>(problem.tau());
      rep.witnesses["sigma"] = static_cast<double>(problem.sigma());
      const bool delays = problem.tau() > problem.sigma() && problem.sigma() >= 0;
      if (!delays) {
        rep.verdict = Verdict::fails;
      } else if (id == "H0") {
        rep.verdict = Verdict::holds;
      } else {
        const auto nv = problem.q().nonvanishing();
        rep.verdict = !nv ? Verdict::undecidable : (*nv ? Verdict::holds : Verdict::fails);
      }
    } else {
      throw ValidationError("hypotheses", "unknown hypothesis id '" + id + "'");
    }
    out.push_back(std::move(rep));
  }
  return out;
}

}  // namespace qdiff

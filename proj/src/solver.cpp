#include "qdiff/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qdiff/errors.hpp"
#include "qdiff/verify.hpp"

namespace qdiff {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double sup_diff(const Window& x, const Window& y) {
  double m = 0.0;
  for (Index n = x.start(); n <= x.end(); ++n) m = std::max(m, std::abs(x[n] - y[n]));
  return m;
}

double sup_abs(const Window& x) {
  double m = 0.0;
  for (double v : x.values()) m = std::max(m, std::abs(v));
  return m;
}

void validate(const ProblemSpec& problem, const SolveConfig& cfg) {
  if (!(cfg.M > 0.0)) throw PreconditionError("M must be > 0");
  if (!(cfg.tol_fp > 0.0) || !(cfg.tol_res > 0.0)) throw PreconditionError("tolerances must be > 0");
  if (cfg.max_iter < 1) throw PreconditionError("max_iter must be >= 1");
  const Index min_len = problem.tau() + std::abs(problem.sigma()) + 10;
  if (cfg.window_len < min_len)
    throw PreconditionError("window_len must be >= tau + |sigma| + 10 = " + std::to_string(min_len));
  if (!(cfg.scale > 0.0)) throw PreconditionError("scale w must be > 0");
}

}  // namespace

SolveResult solve_bounded(const ProblemSpec& problem, const SolveConfig& cfg) {
  validate(problem, cfg);
  const FMeta meta = estimate_f_meta(problem.f(), cfg.M);
  ScanOptions opts;
  opts.scale = cfg.scale;
  opts.f_bound = meta.Q;
  opts.lipschitz = meta.L;
  opts.limit = cfg.scan_limit;

  N0Result nr;
  try {
    nr = find_n0(problem, cfg.M, cfg.flavor, opts);
  } catch (const ScanExhausted& e) {
    throw SolveError(std::string("not certifiably contractive, enlarge n0: ") + e.what());
  }

  SolveResult res;
  res.M = cfg.M;
  res.scale = cfg.scale;
  res.flavor = cfg.flavor;
  res.q_star = nr.q_star;
  res.Q = meta.Q;
  res.L = meta.L;
  res.n0 = std::max(nr.n0, cfg.n0_hint.value_or(0));
  res.S = nr.S;
  res.kappa = *nr.kappa;
  if (res.n0 != nr.n0) {
    // conditions are monotone in n0; re-enclose at the adopted index
    const Flavor sf = cfg.flavor == Flavor::partial ? Flavor::partial : Flavor::tail;
    const Index cut = 2 * res.n0 + 256;
    res.S = tail_profile(problem.r(), problem.a(), problem.b(), meta.Q, sf, problem.sigma(), res.n0, res.n0, cut)
                .at(res.n0);
    const double sa = tail_profile(problem.r(), problem.a(), zero_sequence(), meta.L, sf, problem.sigma(), res.n0,
                                   res.n0, cut)
                          .at(res.n0)
                          .hi;
    res.kappa = cfg.flavor == Flavor::shifted ? (1.0 + sa) / nr.q_star : nr.q_star + sa;
    if (!(res.kappa < 1.0) || !(res.S.hi < nr.threshold))
      throw SolveError("adopted n0 = " + std::to_string(res.n0) + " fails the ball or contraction condition");
  }

  const Index start = cfg.flavor == Flavor::shifted ? res.n0 : res.n0 + problem.beta();
  const Index end = start + cfg.window_len - 1;
  res.horizon = cfg.horizon > 0 ? cfg.horizon : min_horizon(problem, cfg.flavor, end) + cfg.window_len;

  OperatorConfig ocfg;
  ocfg.n0 = res.n0;
  ocfg.horizon = res.horizon;
  ocfg.scale = cfg.scale;
  ocfg.flavor = cfg.flavor;
  ocfg.f_bound = meta.Q;
  ocfg.radius = cfg.M;
  const OperatorPair ops(problem, ocfg, start, end);
  res.truncation_error = ops.truncation_error();

  Window x = Window::zeros(start, end);
  const double ball = cfg.M * (1.0 + 1e-12) + res.truncation_error;
  bool converged = false;
  for (int it = 1; it <= cfg.max_iter; ++it) {
    Window y = ops.apply(x, x);
    const double step = sup_diff(x, y);
    const double size = sup_abs(y);
    if (size > ball) {
      throw SolveError("iterate " + std::to_string(it) + " left the M-ball: sup|x| = " + std::to_string(size) +
                       " > " + std::to_string(ball));
    }
    x = std::move(y);
    res.steps.push_back(step);
    if (step < cfg.tol_fp) {
      res.iterations = it;
      converged = true;
      break;
    }
  }
  if (!converged) throw SolveError("no convergence within max_iter = " + std::to_string(cfg.max_iter));

  res.defect = sup_diff(x, ops.apply(x, x));
  res.solution = x;

  certify_residual(problem, res, cfg.tol_res);
  return res;
}

void certify_residual(const ProblemSpec& problem, SolveResult& res, double tol_res) {
  if (problem.sigma() < 0) {
    // the residual oracle is restricted to sigma >= 0
    res.residual_sup = std::numeric_limits<double>::quiet_NaN();
    return;
  }
  res.residual_from = res.flavor == Flavor::shifted ? res.solution.start() + problem.tau() : res.solution.start();
  res.residual_to = res.solution.end() - 2;
  const ResidualReport rep = residual(problem, res.solution, res.scale, res.residual_from, res.residual_to);
  res.residual_sup = rep.sup;

  double r_max = 0.0, wq_max = 0.0, scale_max = 0.0;
  for (Index n = res.residual_from; n <= res.residual_to + 2; ++n) {
    r_max = std::max(r_max, std::abs(problem.r().eval(n)));
    wq_max = std::max(wq_max, std::abs(res.scale * problem.q().eval(n)));
  }
  for (double s : rep.scale) scale_max = std::max(scale_max, s);
  const double relation_factor = res.flavor == Flavor::shifted ? wq_max : 1.0;
  const double roundoff = 8.0 * r_max * static_cast<double>(res.horizon) * kEps * (res.S.hi + res.M) * relation_factor +
                          64.0 * kEps * scale_max;
  res.residual_bound = 4.0 * r_max * relation_factor * res.defect + roundoff;
  if (res.residual_sup > res.residual_bound) {
    throw SolveError("residual " + std::to_string(res.residual_sup) + " exceeds the defect-propagation bound " +
                     std::to_string(res.residual_bound));
  }
  if (!(res.residual_sup < tol_res)) {
    throw SolveError("residual " + std::to_string(res.residual_sup) + " not below tol_res " +
                     std::to_string(tol_res));
  }
}

double fixed_point_defect(const ProblemSpec& problem, const Window& x, const OperatorConfig& cfg) {
  const OperatorPair ops(problem, cfg, x.start(), x.end());
  return sup_diff(x, ops.apply(x, x));
}

double relation_defect(const ProblemSpec& problem, const Window& x, double scale, Index from, Index to,
                       Index horizon) {
  if (from > to) throw PreconditionError("relation_defect needs from <= to");
  if (horizon < to) throw PreconditionError("horizon must be >= to");
  const Index tau = problem.tau();
  const Index sigma = problem.sigma();
  double G = 0.0, U = 0.0, sup = 0.0;
  for (Index s = horizon; s >= from; --s) {
    G += problem.a().eval(s) * problem.f().eval(x.at(s - sigma)) + problem.b().eval(s);
    U += G / problem.r().eval(s);
    if (s <= to) sup = std::max(sup, std::abs(x.at(s) + scale * problem.q().eval(s) * x.at(s - tau) - U));
  }
  return sup;
}

Window backfill(const ProblemSpec& problem, const Window& x, double scale, Index horizon) {
  const Index tau = problem.tau();
  const Index sigma = problem.sigma();
  if (!(tau > sigma && sigma >= 0)) throw PreconditionError("backfill needs tau > sigma >= 0");
  const Index beta = problem.beta();
  if (x.start() <= beta) return x;
  if (horizon < x.end()) throw PreconditionError("horizon must cover the window");

  std::vector<double> vals(static_cast<std::size_t>(x.end() - beta + 1), 0.0);
  std::copy(x.values().begin(), x.values().end(), vals.begin() + (x.start() - beta));
  Window out(beta, std::move(vals));

  const Index first_m = x.start() + tau - 1;
  double G = 0.0, U = 0.0;
  auto absorb = [&](Index s) {
    G += problem.a().eval(s) * problem.f().eval(out.at(s - sigma)) + problem.b().eval(s);
    U += G / problem.r().eval(s);
  };
  for (Index s = horizon; s > first_m; --s) absorb(s);
  for (Index m = first_m; m >= beta + tau; --m) {
    absorb(m);
    const double wq = scale * problem.q().eval(m);
    if (wq == 0.0) throw PreconditionError("q vanishes at n = " + std::to_string(m));
    out[m - tau] = (U - out.at(m)) / wq;
  }
  return out;
}

Window backfill(const ProblemSpec& problem, const SolveResult& res) {
  if (res.flavor == Flavor::partial) {
    throw PreconditionError("partial-flavor solutions cannot be backfilled: the inner sums read the prefix being filled");
  }
  return backfill(problem, res.solution, res.scale, res.horizon);
}

}  // namespace qdiff

#include "qdiff/lp.hpp"

#include <algorithm>
#include <cmath>

#include "qdiff/errors.hpp"
#include "qdiff/operators.hpp"

namespace qdiff {
namespace {

// A rounding-limited enclosure is still a valid one.
Enclosure lp_series_best(const SequenceSpec& r, const SequenceSpec& c, double p, Index n0, Flavor flavor, Index sigma) {
  try {
    return lp_series(r, c, p, n0, std::nullopt, flavor, sigma);
  } catch (const ToleranceError& e) {
    return e.best();
  }
}

}  // namespace

double lp_norm(const Window& x, double p) {
  if (!(p >= 1.0)) throw PreconditionError("p must be >= 1");
  double s = 0.0;
  for (double v : x.values()) s += std::pow(std::abs(v), p);
  return std::pow(s, 1.0 / p);
}

std::vector<TailPoint> lp_tail_profile(const Window& x, double p, const std::vector<Index>& checkpoints) {
  if (!(p >= 1.0)) throw PreconditionError("p must be >= 1");
  std::vector<double> suffix(x.size() + 1, 0.0);
  for (Index n = x.end(); n >= x.start(); --n) {
    const auto i = static_cast<std::size_t>(n - x.start());
    suffix[i] = suffix[i + 1] + std::pow(std::abs(x[n]), p);
  }
  std::vector<TailPoint> out;
  out.reserve(checkpoints.size());
  for (Index l : checkpoints) {
    const Index c = std::clamp(l, x.start(), x.end() + 1);
    out.emplace_back(l, suffix[static_cast<std::size_t>(c - x.start())]);
  }
  return out;
}

std::vector<Index> geometric_checkpoints(Index start, Index end) {
  std::vector<Index> out;
  for (Index step = 1; start + step - 1 <= end; step *= 2) out.push_back(start + step - 1);
  if (out.empty() || out.back() != end) out.push_back(end);
  return out;
}

LpResult solve_lp(const ProblemSpec& problem, const LpConfig& cfg) {
  if (!(cfg.p >= 1.0)) throw PreconditionError("p must be >= 1");
  if (cfg.flavor == Flavor::shifted) throw PreconditionError("the lp construction has no shifted flavor");
  if (!(cfg.tol_fp > 0.0) || !(cfg.tol_res > 0.0)) throw PreconditionError("tolerances must be > 0");
  if (cfg.max_iter < 1) throw PreconditionError("max_iter must be >= 1");
  const Index min_len = problem.tau() + std::abs(problem.sigma()) + 10;
  if (cfg.window_len < min_len)
    throw PreconditionError("window_len must be >= tau + |sigma| + 10 = " + std::to_string(min_len));

  const double p = cfg.p;
  const FMeta meta = estimate_f_meta(problem.f(), 1.0);
  ScanOptions opts;
  opts.f_bound = meta.Q;
  opts.lipschitz = meta.L;
  opts.limit = cfg.scan_limit;

  LpResult out;
  out.p = p;
  try {
    out.cert = find_n0_lp(problem, p, cfg.flavor, opts);
  } catch (const ScanExhausted& e) {
    throw SolveError(std::string("not certifiably contractive in l^p, enlarge n0: ") + e.what());
  }
  const Index sigma = problem.sigma();
  const double c4 = std::pow(4.0, p - 1.0);
  const double Wp = std::pow(meta.Q, p);
  if (cfg.n0_hint && *cfg.n0_hint > out.cert.n0) {
    N0LpResult& c = out.cert;
    c.n0 = *cfg.n0_hint;
    c.A = lp_series_best(problem.r(), problem.a(), p, c.n0, cfg.flavor, sigma);
    c.B = lp_series_best(problem.r(), problem.b(), p, c.n0, cfg.flavor, sigma);
    c.lhs = Enclosure(c4 * (Wp * c.A.lo + c.B.lo), c4 * (Wp * c.A.hi + c.B.hi));
    c.kappa = c.q_star + meta.L * std::pow(c.A.hi, 1.0 / p);
    if (!(c.lhs.hi < c.rhs) || !(*c.kappa < 1.0))
      throw SolveError("adopted n0 = " + std::to_string(c.n0) + " fails the lp ball or contraction condition");
  }

  SolveResult& res = out.solve;
  res.M = 1.0;
  res.scale = 1.0;
  res.flavor = cfg.flavor;
  res.q_star = out.cert.q_star;
  res.Q = meta.Q;
  res.L = meta.L;
  res.n0 = out.cert.n0;
  res.kappa = *out.cert.kappa;
  res.S = tail_profile(problem.r(), problem.a(), problem.b(), meta.Q, cfg.flavor, sigma, res.n0, res.n0,
                       2 * res.n0 + 256)
              .at(res.n0);

  const Index start = res.n0 + problem.beta();
  const Index end = start + cfg.window_len - 1;
  res.horizon = cfg.horizon > 0 ? cfg.horizon : min_horizon(problem, cfg.flavor, end) + cfg.window_len;

  OperatorConfig ocfg;
  ocfg.n0 = res.n0;
  ocfg.horizon = res.horizon;
  ocfg.flavor = cfg.flavor;
  ocfg.f_bound = meta.Q;
  ocfg.radius = 1.0;
  const OperatorPair ops(problem, ocfg, start, end);
  res.truncation_error = ops.truncation_error();
  double trunc_p = 0.0;
  for (double t : ops.truncation_profile()) trunc_p += std::pow(t, p);
  const double ball = 1.0 + 1e-12 + std::pow(trunc_p, 1.0 / p);

  Window x = Window::zeros(start, end);
  bool converged = false;
  for (int it = 1; it <= cfg.max_iter; ++it) {
    Window y = ops.apply(x, x);
    double step = 0.0;
    for (Index n = start; n <= end; ++n) step += std::pow(std::abs(y[n] - x[n]), p);
    step = std::pow(step, 1.0 / p);
    const double size = lp_norm(y, p);
    if (size > ball) {
      throw SolveError("iterate " + std::to_string(it) + " left the unit l^p ball: norm " + std::to_string(size));
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

  const Window tx = ops.apply(x, x);
  for (Index n = start; n <= end; ++n) res.defect = std::max(res.defect, std::abs(tx[n] - x[n]));
  res.solution = x;
  certify_residual(problem, res, cfg.tol_res);

  out.norm = lp_norm(x, p);
  out.tail_profile = lp_tail_profile(x, p, geometric_checkpoints(start, end));

  // x_n = -q_n x_{n-tau} + U_n past the window, split with (u + v)^p <= 2^{p-1}(u^p + v^p)
  const double c2 = std::pow(2.0, p - 1.0);
  const double qp = c2 * std::pow(out.cert.q_star, p);
  double last_block = 0.0;
  for (Index n = std::max(start, end - problem.tau() + 1); n <= end; ++n) last_block += std::pow(std::abs(x[n]), p);
  const double A_end = lp_series_best(problem.r(), problem.a(), p, end + 1, cfg.flavor, sigma).hi;
  const double B_end = lp_series_best(problem.r(), problem.b(), p, end + 1, cfg.flavor, sigma).hi;
  out.neglected_tail = (qp * last_block + c4 * (Wp * A_end + B_end)) / (1.0 - qp);
  return out;
}

}  // namespace qdiff

#include "qdiff/approx.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

#include "qdiff/errors.hpp"
#include "qdiff/series.hpp"

namespace qdiff {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double sup_abs(const Window& x, Index from, Index to) {
  double m = 0.0;
  for (Index n = std::max(from, x.start()); n <= std::min(to, x.end()); ++n) m = std::max(m, std::abs(x[n]));
  return m;
}

}  // namespace

double ApproxConfig::w(Index k) const { return 1.0 - std::pow(rho, static_cast<double>(k)); }

double ApproxConfig::radius(Index k) const { return D * std::pow(C * w(k), static_cast<double>(k)); }

HsbCertificate check_Hsb(const ProblemSpec& problem, const ApproxConfig& cfg, std::optional<double> P) {
  HsbCertificate cert;
  cert.D = cfg.D;
  if (P) {
    cert.P = *P;
  } else if (cfg.P) {
    cert.P = *cfg.P;
  } else if (auto g = problem.f().global_bound()) {
    cert.P = *g;
  } else {
    throw PreconditionError("f has no known global bound; supply P");
  }
  if (!(cert.P >= 0.0)) throw PreconditionError("P must be >= 0");

  // the backfill divides by w_k q_m for m >= beta + tau
  const ValueRange qr = problem.q().range(problem.beta() + problem.tau());
  cert.q_inf = qr.inf;
  if (!(cfg.C < qr.inf)) {
    throw PreconditionError("C = " + std::to_string(cfg.C) + " is not below inf q = " + std::to_string(qr.inf) +
                            " over n >= " + std::to_string(problem.beta() + problem.tau()));
  }

  HsbScan scan = scan_Hsb(problem, cert.P, cfg.C, cfg.rho, cfg.D, cfg.k_scan);
  cert.ratio = std::move(scan.ratio);
  if (!scan.k0) {
    const double last = cert.ratio.empty() ? 0.0 : cert.ratio.back();
    throw ScanExhausted("no k0 up to k = " + std::to_string(cfg.k_scan) +
                            " with S(k) <= D (1 - w_k)(C w_k)^k; last ratio " + std::to_string(last),
                        cfg.k_scan, std::nullopt);
  }
  cert.k0 = *scan.k0;
  return cert;
}

AuxiliarySolution solve_auxiliary(const ProblemSpec& problem, Index k, const ApproxConfig& cfg,
                                  const HsbCertificate& cert) {
  if (k < cert.k0) {
    throw PreconditionError("k = " + std::to_string(k) + " lies below the certified k0 = " + std::to_string(cert.k0));
  }
  AuxiliarySolution out;
  out.k = k;
  out.w = cfg.w(k);
  out.M = cfg.radius(k);
  SolveConfig sc = cfg.solve;
  sc.M = out.M;
  sc.scale = out.w;
  sc.flavor = Flavor::tail;
  sc.n0_hint = k;
  out.result = solve_bounded(problem, sc);
  out.full = backfill(problem, out.result);
  return out;
}

ApproxReport approximate_limit(const ProblemSpec& problem, const ApproxConfig& cfg) {
  ApproxReport rep;
  rep.cert = check_Hsb(problem, cfg);
  const Index k_lo = cfg.k_min > 0 ? cfg.k_min : rep.cert.k0;
  const Index k_hi = cfg.k_max > 0 ? cfg.k_max : k_lo + 6;
  if (k_lo < rep.cert.k0) {
    throw PreconditionError("k_min = " + std::to_string(k_lo) + " lies below the certified k0 = " +
                            std::to_string(rep.cert.k0));
  }
  if (k_hi <= k_lo) throw PreconditionError("the cascade needs k_max > k_min");

  std::vector<std::future<AuxiliarySolution>> jobs;
  for (Index k = k_lo; k <= k_hi; ++k) {
    jobs.push_back(std::async(std::launch::async, [&problem, &cfg, &rep, k] {
      return solve_auxiliary(problem, k, cfg, rep.cert);
    }));
  }
  for (auto& j : jobs) rep.solves.push_back(j.get());

  rep.common_from = problem.beta();
  rep.common_to = std::numeric_limits<Index>::max();
  for (const auto& s : rep.solves) rep.common_to = std::min(rep.common_to, s.full.end());

  for (std::size_t i = 0; i + 1 < rep.solves.size(); ++i) {
    std::vector<double> d;
    double m = 0.0;
    for (Index n = rep.common_from; n <= rep.common_to; ++n) {
      d.push_back(std::abs(rep.solves[i + 1].full.at(n) - rep.solves[i].full.at(n)));
      m = std::max(m, d.back());
    }
    rep.diffs.push_back(std::move(d));
    rep.diff_max.push_back(m);
  }
  bool monotone = true;
  for (std::size_t i = 1; i < rep.diff_max.size(); ++i) monotone = monotone && rep.diff_max[i] <= rep.diff_max[i - 1];
  const double last_diff = rep.diff_max.back();
  rep.converged = monotone && last_diff <= cfg.tol_c;
  if (rep.converged) {
    rep.message = "coordinate differences decrease to " + std::to_string(last_diff);
  } else {
    rep.message = "no numerical convergence detected: ";
    rep.message += monotone ? "last difference " + std::to_string(last_diff) + " above tol_c"
                            : std::string("coordinate differences do not decrease");
  }

  const AuxiliarySolution& last = rep.solves.back();
  const auto first = last.full.values().begin();
  rep.limit = Window(rep.common_from, std::vector<double>(first, first + (rep.common_to - rep.common_from + 1)));
  // the backfilled relation holds from beta + tau on, so the equation does too
  if (problem.sigma() >= 0) {
    rep.limit_residual = residual(problem, rep.limit, 1.0, problem.beta() + problem.tau(), rep.common_to - 2);
  }

  // uniform bound of the existence proof
  const double P = rep.cert.P;
  const double sum_gaps = cfg.rho / (1.0 - cfg.rho);
  double head = 0.0;
  if (rep.cert.k0 > 1) {
    const TailProfile prof = tail_profile(problem.r(), problem.a(), problem.b(), P, Flavor::tail, problem.sigma(), 1,
                                          rep.cert.k0 - 1, 2 * rep.cert.k0 + 4096);
    for (double h : prof.hi) head += h;
  }
  rep.uniform_bound = (2.0 * cfg.D + cfg.D * sum_gaps + head) / (cfg.C * cfg.w(1));
  rep.uniform_bound_ok = true;
  rep.tail_bound_ok = true;
  for (const auto& s : rep.solves) {
    const double slack = 1e-12 * s.M + s.result.truncation_error;
    rep.uniform_bound_ok = rep.uniform_bound_ok && sup_abs(s.full, 0, s.full.end()) <= rep.uniform_bound;
    rep.tail_bound_ok = rep.tail_bound_ok && sup_abs(s.full, s.k + problem.tau(), s.full.end()) <= s.M + slack;
  }

  // unscaled relation defect of the last solution versus its scaled one
  const Index rel_from = problem.beta() + problem.tau();
  const Index rel_to = last.full.end();
  rep.scaled_defect = relation_defect(problem, last.full, last.w, rel_from, rel_to, last.result.horizon);
  rep.unscaled_defect = relation_defect(problem, last.full, 1.0, rel_from, rel_to, last.result.horizon);
  double q_sup = 0.0;
  for (Index m = rel_from; m <= rel_to; ++m) q_sup = std::max(q_sup, std::abs(problem.q().eval(m)));
  const double x_sup = sup_abs(last.full, 0, last.full.end());
  rep.unscaled_defect_bound =
      rep.scaled_defect + q_sup * (1.0 - last.w) * x_sup + 64.0 * kEps * static_cast<double>(last.result.horizon) *
                                                                 (x_sup + last.result.S.hi + 1e-300);
  rep.defect_bound_ok = rep.unscaled_defect <= rep.unscaled_defect_bound;
  return rep;
}

}  // namespace qdiff

#include "qdiff/verify.hpp"

#include <algorithm>
#include <cmath>

#include "qdiff/errors.hpp"

namespace qdiff {

ResidualReport residual(const ProblemSpec& problem, const Window& x, double q_scale, std::optional<Index> from,
                        std::optional<Index> to) {
  const Index tau = problem.tau();
  const Index sigma = problem.sigma();
  if (sigma < 0) throw PreconditionError("residual oracle does not support sigma < 0");
  const Index lo_ok = 1 + std::max(tau, sigma);
  const Index hi_ok = x.end() - 2;
  const Index lo = from.value_or(std::max(lo_ok, x.start()));
  const Index hi = to.value_or(hi_ok);
  if (hi < lo) throw CoverageError("empty residual range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  if (lo < lo_ok) {
    throw CoverageError("index " + std::to_string(lo) + " reads x below index 1 (needs n >= " + std::to_string(lo_ok) +
                        ")");
  }
  if (hi > hi_ok) {
    throw CoverageError("index " + std::to_string(hi) + " reads x past the window end " + std::to_string(x.end()));
  }

  const SequenceSpec& r = problem.r();
  const SequenceSpec& q = problem.q();
  auto y = [&](Index n) { return x.at(n) + q_scale * q.eval(n) * x.at(n - tau); };
  auto y_abs = [&](Index n) { return std::abs(x.at(n)) + std::abs(q_scale * q.eval(n) * x.at(n - tau)); };

  ResidualReport rep;
  rep.first = lo;
  rep.values.reserve(static_cast<std::size_t>(hi - lo + 1));
  rep.scale.reserve(static_cast<std::size_t>(hi - lo + 1));
  rep.argmax = lo;
  for (Index n = lo; n <= hi; ++n) {
    const double rn = r.eval(n), rn1 = r.eval(n + 1);
    const double yn = y(n), yn1 = y(n + 1), yn2 = y(n + 2);
    const double forcing = problem.a().eval(n) * problem.f().eval(x.at(n - sigma));
    const double bn = problem.b().eval(n);
    const double res = rn1 * (yn2 - yn1) - rn * (yn1 - yn) - forcing - bn;
    rep.values.push_back(res);
    rep.scale.push_back(std::abs(rn1) * (y_abs(n + 2) + y_abs(n + 1)) + std::abs(rn) * (y_abs(n + 1) + y_abs(n)) +
                        std::abs(forcing) + std::abs(bn));
    if (std::abs(res) > rep.sup) {
      rep.sup = std::abs(res);
      rep.argmax = n;
    }
  }
  return rep;
}

Window forward_recurrence(const ProblemSpec& problem, const Window& seed, Index steps, double q_scale) {
  const Index tau = problem.tau();
  const Index sigma = problem.sigma();
  if (sigma < 0) throw PreconditionError("forward recurrence is implicit for sigma < 0");
  if (steps < 0) throw PreconditionError("steps must be >= 0");
  const Index e0 = seed.end();
  if (e0 < problem.beta() + 2) {
    throw CoverageError("seed must end at index >= beta + 2 = " + std::to_string(problem.beta() + 2));
  }
  const SequenceSpec& r = problem.r();
  const SequenceSpec& q = problem.q();

  std::vector<double> vals(seed.values().begin(), seed.values().end());
  vals.resize(vals.size() + static_cast<std::size_t>(steps), 0.0);
  Window out(seed.start(), std::move(vals));
  auto y = [&](Index n) { return out.at(n) + q_scale * q.eval(n) * out.at(n - tau); };
  auto h = [&](Index n) { return problem.a().eval(n) * problem.f().eval(out.at(n - sigma)) + problem.b().eval(n); };

  // z_{e0-1} from the seed, then z_{e0}
  double z = r.eval(e0 - 1) * (y(e0) - y(e0 - 1));
  z += h(e0 - 1);
  double yn = y(e0);
  for (Index n = e0; n < e0 + steps; ++n) {
    const double y_next = yn + z / r.eval(n);
    const double wq = q_scale * q.eval(n + 1);
    out[n + 1] = tau == 0 ? y_next / (1.0 + wq) : y_next - wq * out.at(n + 1 - tau);
    z += h(n);
    yn = y_next;
  }
  return out;
}

}  // namespace qdiff

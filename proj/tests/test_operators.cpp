#include <cmath>

#include "doctest.h"
#include "qdiff/errors.hpp"
#include "qdiff/operators.hpp"
#include "support.hpp"

using namespace qdiff;

namespace {

/// x followed by random ball values up to index `to`.
Window extend(testing::Gen& g, const Window& x, Index to, double radius) {
  std::vector<double> v(x.values().begin(), x.values().end());
  for (Index n = x.end() + 1; n <= to; ++n) v.push_back(g.uniform(-radius, radius));
  return Window(x.start(), v);
}

double sup_norm(const Window& x) { return testing::sup_abs(x); }

}  // namespace

TEST_SUITE("operators") {
  TEST_CASE("contraction, Lipschitz and ball properties on random pairs") {
    const ProblemSpec p = testing::example2();
    const double M = 1.0;
    const FMeta meta = estimate_f_meta(p.f(), M);
    const N0Result cert = find_n0(p, M, Flavor::tail, ScanOptions{1.0, meta.Q, meta.L, 100000});
    OperatorConfig cfg;
    cfg.n0 = cert.n0;
    cfg.f_bound = meta.Q;
    cfg.radius = M;
    const Index start = cert.n0 + p.beta(), end = start + 79;
    const OperatorPair ops(p, cfg, start, end);
    const double S_a = tail_profile(p.r(), p.a(), zero_sequence(), meta.L, Flavor::tail, p.sigma(), cert.n0, cert.n0,
                                    4 * end)
                           .at(cert.n0)
                           .hi;
    testing::Gen g(testing::seed(41));
    for (int trial = 0; trial < 200; ++trial) {
      const Window x = g.window(start, end, M), y = g.window(start, end, M);
      Window dx = x;
      for (Index n = start; n <= end; ++n) dx[n] = x[n] - y[n];
      const double dist = sup_norm(dx);
      CHECK(testing::sup_abs_diff(ops.T1(x), ops.T1(y)) <= cert.q_star * dist + 1e-12);
      CHECK(testing::sup_abs_diff(ops.T2(x), ops.T2(y)) <= S_a * dist + 1e-14);
      CHECK(sup_norm(ops.apply(x, y)) <= M + ops.truncation_error());
    }
  }

  TEST_CASE("tail T2 truncation bound holds against long direct sums") {
    testing::Gen g(testing::seed(42));
    for (int trial = 0; trial < 8; ++trial) {
      const ProblemSpec p = g.problem(3);
      OperatorConfig cfg;
      cfg.n0 = p.beta() + 1;
      cfg.radius = 1.0;
      const Index start = cfg.n0 + p.beta(), end = start + 24;
      const OperatorPair ops(p, cfg, start, end);
      const Window x = g.window(start, end, 1.0);
      const Index far = end + 200;
      const Window ext = extend(g, x, far + 1, 1.0);
      const Window t2 = ops.T2(x);
      for (Index n = start; n <= end; ++n) {
        const double err = std::abs(t2[n] - static_cast<double>(testing::naive_T2_tail(p, ext, n, far)));
        CHECK(err <= ops.truncation_profile()[static_cast<std::size_t>(n - start)] + 1e-13);
      }
    }
  }

  TEST_CASE("partial T2 against direct sums") {
    testing::Gen g(testing::seed(43));
    const ProblemSpec p = testing::remark_partial_only();
    OperatorConfig cfg;
    cfg.n0 = 3;
    cfg.flavor = Flavor::partial;
    const Index start = cfg.n0 + p.beta(), end = start + 20;
    const OperatorPair ops(p, cfg, start, end);
    for (int trial = 0; trial < 5; ++trial) {
      const Window x = g.window(start, end, 1.0);
      const Window ext = extend(g, x, end + 120, 1.0);
      const Window t2 = ops.T2(x);
      for (Index n = start; n <= end; ++n) {
        const double err = std::abs(t2[n] - static_cast<double>(testing::naive_T2_partial(p, ext, n, end + 100)));
        CHECK(err <= ops.truncation_profile()[static_cast<std::size_t>(n - start)] + 1e-12);
      }
    }
    CHECK(apply_T2_partial(p, Window::zeros(start, end), cfg).values[start] ==
          doctest::Approx(static_cast<double>(testing::naive_T2_partial(p, Window::zeros(start, end), start, 400)))
              .epsilon(1e-6));
  }

  TEST_CASE("shifted pair against direct sums") {
    testing::Gen g(testing::seed(44));
    const ProblemSpec p = testing::shifted_q2();
    OperatorConfig cfg;
    cfg.n0 = 3;
    cfg.flavor = Flavor::shifted;
    const Index start = cfg.n0, end = start + 30;
    const OperatorPair ops(p, cfg, start, end);
    CHECK(ops.active_from() == 3);
    for (int trial = 0; trial < 5; ++trial) {
      const Window x = g.window(start, end, 1.0);
      const Window ext = extend(g, x, end + 260, 1.0);
      const Window tx = ops.apply(x, x);
      for (Index n = start; n <= end; ++n) {
        const Index m = n + p.tau();
        const long double exact = (-ext.at(m) + testing::naive_T2_tail(p, ext, m, end + 250)) / p.q().eval(m);
        CHECK(std::abs(tx[n] - static_cast<double>(exact)) <=
              ops.truncation_profile()[static_cast<std::size_t>(n - start)] + 1e-13);
      }
    }
    OperatorConfig bad = cfg;
    bad.scale = 0.4;  // w q = 0.8 < 1
    CHECK_THROWS_AS(OperatorPair(p, bad, start, end), PreconditionError);
  }

  TEST_CASE("negative sigma reads ahead and extends the horizon") {
    testing::Gen g(testing::seed(45));
    const ProblemSpec p = testing::make(2, -1, seq::Constant{1.0}, seq::Geometric{1.0, 0.5}, seq::Geometric{0.5, 0.5},
                                        seq::Constant{0.3}, fn::SinePower{1, 1.0, 1.0});
    OperatorConfig cfg;
    cfg.n0 = 3;
    const Index start = 5, end = 30;
    CHECK(min_horizon(p, Flavor::tail, end) == end + 1);
    const OperatorPair ops(p, cfg, start, end);
    const Window x = g.window(start, end, 1.0);
    const Window ext = extend(g, x, end + 230, 1.0);
    const OperatorOutput out = apply_T2_tail(p, x, cfg);
    for (Index n = start; n <= end; ++n) {
      const double err = std::abs(out.values[n] - static_cast<double>(testing::naive_T2_tail(p, ext, n, end + 200)));
      CHECK(err <= ops.truncation_profile()[static_cast<std::size_t>(n - start)] + 1e-13);
    }
  }

  TEST_CASE("prefix below n0 + beta stays zero") {
    const ProblemSpec p = testing::example2();
    OperatorConfig cfg;
    cfg.n0 = 6;
    const Window x = Window::zeros(1, 40);
    const Window t = OperatorPair(p, cfg, 1, 40).apply(x, x);
    for (Index n = 1; n < 9; ++n) CHECK(t[n] == 0.0);
    CHECK(t[9] != 0.0);
    CHECK(apply_T1(p, testing::Gen(1).window(1, 40, 1.0), cfg)[8] == 0.0);
  }

  TEST_CASE("configuration errors") {
    const ProblemSpec p = testing::example2();
    OperatorConfig cfg;
    cfg.n0 = 4;
    cfg.horizon = 10;
    CHECK_THROWS_AS(OperatorPair(p, cfg, 7, 20), PreconditionError);
    cfg.horizon = 0;
    cfg.scale = 1.5;
    CHECK_THROWS_AS(OperatorPair(p, cfg, 7, 20), PreconditionError);
    cfg.scale = 1.0;
    const OperatorPair ops(p, cfg, 7, 20);
    CHECK_THROWS_AS(ops.T1(Window::zeros(7, 21)), PreconditionError);
  }
}

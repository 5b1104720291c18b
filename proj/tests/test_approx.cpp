#include <cmath>

#include "doctest.h"
#include "qdiff/approx.hpp"
#include "qdiff/errors.hpp"
#include "support.hpp"

using namespace qdiff;

TEST_SUITE("approx") {
  TEST_CASE("schedule") {
    ApproxConfig cfg;
    CHECK(cfg.w(1) == 0.375);
    for (Index k = 1; k < 30; ++k) CHECK(cfg.w(k) < cfg.w(k + 1));
    CHECK(cfg.radius(2) == doctest::Approx(std::pow(0.9 * (1 - 0.625 * 0.625), 2)));
  }

  TEST_CASE("certification on Example 1") {
    const HsbCertificate c = check_Hsb(testing::example1(), ApproxConfig{});
    CHECK(c.k0 == 11);
    CHECK(c.P == 1.0);
    CHECK(c.q_inf == doctest::Approx(1.0 - 1.0 / 64));
    for (std::size_t k = c.k0; k <= c.ratio.size(); ++k) CHECK(c.ratio[k - 1] <= 1.0);
    CHECK(c.ratio[c.k0 - 2] > 1.0);
  }

  TEST_CASE("trivial and failing certifications") {
    const ProblemSpec zero = testing::zero_problem(2, 1, 0.95);
    CHECK(check_Hsb(zero, ApproxConfig{}, 1.0).k0 == 1);
    CHECK_THROWS_AS(check_Hsb(zero, ApproxConfig{}), PreconditionError);
    // S(k) decays like 1/k, slower than any geometric budget
    const ProblemSpec poly = testing::make(2, 1, seq::Constant{1.0}, seq::Power{1.0, -3.0}, seq::Constant{0.0},
                                           seq::Constant{0.95}, fn::SinePower{1, 1.0, 1.0});
    CHECK_THROWS_AS(check_Hsb(poly, ApproxConfig{}), ScanExhausted);
    ApproxConfig big_c;
    big_c.C = 0.99;
    CHECK_THROWS_AS(check_Hsb(zero, big_c, 1.0), PreconditionError);
  }

  TEST_CASE("auxiliary solutions respect the tail bound") {
    const ProblemSpec p = testing::example1_forced();
    ApproxConfig cfg;
    cfg.solve.window_len = 120;
    const HsbCertificate c = check_Hsb(p, cfg);
    CHECK(c.k0 == 13);
    for (Index k : {c.k0, c.k0 + 3}) {
      const AuxiliarySolution s = solve_auxiliary(p, k, cfg, c);
      CHECK(s.result.n0 == k);
      CHECK(s.full.start() == p.beta());
      for (Index n = k + p.tau(); n <= s.full.end(); ++n) CHECK(std::abs(s.full[n]) <= s.M + s.result.truncation_error);
      CHECK(s.result.residual_sup < 1e-8);
    }
    CHECK_THROWS_AS(solve_auxiliary(p, c.k0 - 1, cfg, c), PreconditionError);
  }

  TEST_CASE("cascade on zero data") {
    ApproxConfig cfg;
    cfg.P = 1.0;
    const ApproxReport r = approximate_limit(testing::zero_problem(2, 1, 0.95), cfg);
    CHECK(r.converged);
    CHECK(testing::sup_abs(r.limit) == 0.0);
    CHECK(r.limit_residual.sup == 0.0);
  }

  TEST_CASE("cascade on the forced problem keeps the proof bounds") {
    ApproxConfig cfg;
    cfg.solve.window_len = 120;
    const ApproxReport r = approximate_limit(testing::example1_forced(), cfg);
    CHECK(r.solves.size() == 7);
    CHECK(r.diff_max.size() == 6);
    CHECK(r.uniform_bound_ok);
    CHECK(r.tail_bound_ok);
    CHECK(r.defect_bound_ok);
    CHECK(r.diff_max.back() < 1e-5);
    CHECK(r.limit_residual.sup < 1e-5);
    if (!r.converged) CHECK(r.message.find("no numerical convergence") != std::string::npos);
  }
}

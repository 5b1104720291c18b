#include <cmath>

#include "doctest.h"
#include "qdiff/errors.hpp"
#include "qdiff/solver.hpp"
#include "qdiff/verify.hpp"
#include "support.hpp"

using namespace qdiff;

TEST_SUITE("solver") {
  TEST_CASE("Example 2 bounded solution") {
    const ProblemSpec p = testing::example2();
    const SolveResult r = solve_bounded(p, SolveConfig{});
    CHECK(r.kappa < 1.0);
    CHECK(r.defect < 1e-10);
    CHECK(r.residual_sup < 1e-8);
    CHECK(r.residual_sup <= r.residual_bound);
    CHECK(r.residual_to - r.residual_from + 1 >= 200);
    CHECK(testing::sup_abs(r.solution) <= r.M + r.truncation_error);
    // the certificate is an independent residual evaluation
    for (Index n = r.residual_from; n <= r.residual_to; n += 17)
      CHECK(std::abs(static_cast<double>(testing::naive_residual(p, r.solution, n))) < 1e-8);
    for (std::size_t i = 1; i < r.steps.size(); ++i) CHECK(r.steps[i] <= r.kappa * r.steps[i - 1] * (1 + 1e-9) + 1e-15);
  }

  TEST_CASE("zero data gives the zero solution") {
    const SolveResult r = solve_bounded(testing::zero_problem(), SolveConfig{});
    CHECK(testing::sup_abs(r.solution) == 0.0);
    CHECK(r.residual_sup == 0.0);
  }

  TEST_CASE("random problems converge with certified residuals") {
    testing::Gen g(testing::seed(51));
    for (int trial = 0; trial < 20; ++trial) {
      const ProblemSpec p = g.problem();
      SolveConfig cfg;
      cfg.window_len = 120;
      cfg.M = g.uniform(0.5, 2.0);
      const SolveResult r = solve_bounded(p, cfg);
      CHECK(r.residual_sup < 1e-8);
      CHECK(r.residual_sup <= r.residual_bound);
      CHECK(relation_defect(p, r.solution, 1.0, r.solution.start(), r.solution.end(), r.horizon) <= 2 * r.defect + 1e-13);
    }
  }

  TEST_CASE("partial flavor solves the remark family with divergent full tails") {
    const ProblemSpec p = testing::remark_partial_only();
    SolveConfig cfg;
    cfg.flavor = Flavor::partial;
    cfg.window_len = 60;
    const SolveResult r = solve_bounded(p, cfg);
    CHECK(r.residual_sup < 1e-8);
    CHECK_THROWS_AS(backfill(p, r), PreconditionError);
  }

  TEST_CASE("shifted flavor for q = 2") {
    SolveConfig cfg;
    cfg.flavor = Flavor::shifted;
    const SolveResult r = solve_bounded(testing::shifted_q2(), cfg);
    CHECK(r.q_star == 2.0);
    CHECK(r.kappa < 1.0);
    CHECK(r.residual_sup < 1e-8);
  }

  TEST_CASE("n0 hint is honoured") {
    SolveConfig cfg;
    cfg.n0_hint = 20;
    const SolveResult r = solve_bounded(testing::example2(), cfg);
    CHECK(r.n0 == 20);
    CHECK(r.solution.start() == 23);
    CHECK(r.residual_sup < 1e-8);
  }

  TEST_CASE("backfill recovers a manufactured solution") {
    for (Index tau : {1, 2, 4}) {
      const ProblemSpec p = testing::manufactured(tau, 0);
      const Window exact = testing::manufactured_solution(30, 120);
      const Window full = backfill(p, exact, 1.0, 400);
      CHECK(full.start() == p.beta());
      for (Index n = p.beta(); n <= 120; ++n)
        CHECK(std::abs(full[n] - std::ldexp(1.0, -static_cast<int>(n))) <= 1e-9 * std::ldexp(1.0, -static_cast<int>(n)) + 1e-15);
    }
  }

  TEST_CASE("backfilled Example 2 solution satisfies the equation from beta + tau") {
    const ProblemSpec p = testing::example2();
    SolveConfig cfg;
    cfg.n0_hint = 12;
    const SolveResult r = solve_bounded(p, cfg);
    const Window full = backfill(p, r);
    CHECK(full.start() == 3);
    const ResidualReport rep = residual(p, full, 1.0, p.beta() + p.tau(), full.end() - 2);
    CHECK(rep.sup < 1e-8);
  }

  TEST_CASE("failure modes") {
    CHECK_THROWS_AS(solve_bounded(testing::example1(), SolveConfig{}), PreconditionError);  // q* = 1
    SolveConfig small;
    small.window_len = 5;
    CHECK_THROWS_AS(solve_bounded(testing::example2(), small), PreconditionError);
    SolveConfig tight;
    tight.max_iter = 2;
    CHECK_THROWS_AS(solve_bounded(testing::example2(), tight), SolveError);
    SolveConfig unreachable;
    unreachable.tol_res = 1e-30;
    CHECK_THROWS_AS(solve_bounded(testing::example2(), unreachable), SolveError);
    const ProblemSpec sigma_ge_tau = testing::make(1, 1, seq::Constant{1.0}, seq::Constant{0.0}, seq::Constant{0.0},
                                                   seq::Constant{0.5}, fn::Linear{});
    CHECK_THROWS_AS(backfill(sigma_ge_tau, Window::zeros(5, 20), 1.0, 40), PreconditionError);
  }
}

#include <cmath>

#include "doctest.h"
#include "qdiff/errors.hpp"
#include "qdiff/verify.hpp"
#include "support.hpp"

using namespace qdiff;

TEST_SUITE("verify") {
  TEST_CASE("manufactured solution has vanishing residual") {
    const ProblemSpec p = testing::manufactured(3, 1);
    const Window x = testing::manufactured_solution(1, 60);
    const ResidualReport r = residual(p, x);
    CHECK(r.first == 4);
    CHECK(r.last() == 58);
    for (std::size_t i = 0; i < r.values.size(); ++i) CHECK(std::abs(r.values[i]) <= 1e-15 * r.scale[i]);
  }

  TEST_CASE("residual matches the term-by-term oracle") {
    testing::Gen g(testing::seed(61));
    for (int trial = 0; trial < 30; ++trial) {
      const ProblemSpec p = g.problem();
      const Window x = g.window(1, 40, 2.0);
      const double w = g.uniform(0.2, 1.0);
      const ResidualReport r = residual(p, x, w);
      for (Index n = r.first; n <= r.last(); ++n)
        CHECK(std::abs(r.at(n) - static_cast<double>(testing::naive_residual(p, x, n, w))) <= 1e-14 * (1 + r.scale[n - r.first]));
    }
  }

  TEST_CASE("Example 1 alternating sequence is not a solution") {
    const ProblemSpec p = testing::example1();
    std::vector<double> v;
    for (Index n = 1; n <= 40; ++n) v.push_back(n % 2 == 0 ? 1.0 : -1.0);
    const ResidualReport r = residual(p, Window(1, v));
    const double gap = 1.0 - std::pow(std::sin(1.0), 6);
    for (Index n = r.first; n <= r.last(); ++n)
      CHECK(r.at(n) == doctest::Approx(0.75 * gap * std::ldexp(1.0, -static_cast<int>(n))).epsilon(1e-9));
    CHECK(r.sup > 0.0);
  }

  TEST_CASE("forward recurrence produces exact continuations") {
    testing::Gen g(testing::seed(62));
    for (int trial = 0; trial < 30; ++trial) {
      const ProblemSpec p = g.problem();
      const Window seed = g.window(1, p.beta() + 2, 0.5);
      const Window x = forward_recurrence(p, seed, 40, g.uniform(0.5, 1.0));
      CHECK(x.end() == seed.end() + 40);
    }
    const ProblemSpec p = testing::example2();
    const Window seed = testing::Gen(7).window(1, 6, 0.3);
    const Window x = forward_recurrence(p, seed, 50);
    const ResidualReport r = residual(p, x, 1.0, seed.end() - 1, x.end() - 2);
    for (std::size_t i = 0; i < r.values.size(); ++i) CHECK(std::abs(r.values[i]) <= 1e-12 * r.scale[i]);
    // the recurrence reproduces a manufactured solution from its first terms
    const ProblemSpec m = testing::manufactured(2, 1);
    const Window exact = testing::manufactured_solution(1, 60);
    const Window head(1, std::vector<double>(exact.values().begin(), exact.values().begin() + 4));
    const Window cont = forward_recurrence(m, head, 56);
    CHECK(testing::sup_abs_diff(cont, exact) <= 1e-12);
  }

  TEST_CASE("coverage and domain errors") {
    const ProblemSpec p = testing::example2();
    const Window x = Window::zeros(1, 20);
    CHECK_THROWS_AS(residual(p, x, 1.0, 2, 10), CoverageError);
    CHECK_THROWS_AS(residual(p, x, 1.0, 5, 19), CoverageError);
    CHECK_THROWS_AS(forward_recurrence(p, Window::zeros(1, 3), 5), CoverageError);
    const ProblemSpec neg = testing::make(2, -1, seq::Constant{1.0}, seq::Constant{0.0}, seq::Constant{0.0},
                                          seq::Constant{0.5}, fn::Linear{});
    CHECK_THROWS_AS(residual(neg, x), PreconditionError);
  }
}

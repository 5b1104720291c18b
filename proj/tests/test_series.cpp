#include <chrono>
#include <cmath>

#include "doctest.h"
#include "qdiff/errors.hpp"
#include "qdiff/series.hpp"
#include "support.hpp"

using namespace qdiff;

namespace {

const HypothesisReport& find(const std::vector<HypothesisReport>& reps, const std::string& id) {
  for (const auto& r : reps)
    if (r.id == id) return r;
  throw std::runtime_error("missing " + id);
}

}  // namespace

TEST_SUITE("series") {
  TEST_CASE("Example 1 double tail is 3 2^-k") {
    const ProblemSpec p = testing::example1();
    for (Index k = 1; k <= 20; ++k) {
      const Enclosure e = double_tail(p.r(), p.a(), p.b(), 1.0, k);
      const double exact = 3.0 * std::ldexp(1.0, -static_cast<int>(k));
      CHECK(e.contains(exact));
      CHECK(e.width() <= 1e-12);
    }
  }

  TEST_CASE("double tail agrees with direct long-double summation") {
    testing::Gen g(testing::seed(31));
    for (int trial = 0; trial < 40; ++trial) {
      const ProblemSpec p = g.problem();
      const double Q = g.uniform(0.0, 2.0);
      const Index n = g.index(1, 30);
      const Enclosure e = double_tail(p.r(), p.a(), p.b(), Q, n);
      const long double direct = testing::naive_double_tail(p, Q, n, n + 3000);
      CHECK(e.lo <= static_cast<double>(direct) * (1 + 1e-13) + 1e-300);
      CHECK(e.hi >= static_cast<double>(direct) * (1 - 1e-13));
    }
  }

  TEST_CASE("partial double tail of the second remark family sums to 2") {
    const ProblemSpec p = testing::remark_partial_only();
    const Enclosure e = partial_double_tail(p.r(), p.a(), p.b(), 1.0, 1, 1);
    CHECK(e.contains(2.0));
    CHECK(e.width() <= 1e-10);
  }

  TEST_CASE("Example 2 lp series") {
    const ProblemSpec p = testing::example2();
    const Enclosure a = lp_series(p.r(), p.a(), 1.0, 1, 1e-10);
    CHECK(a.contains(4.0));
    CHECK(a.width() <= 1e-10);
    // sum_n 1/(6 n (n+1)) telescopes to 1/6
    const Enclosure b = lp_series(p.r(), p.b(), 1.0, 1, 1e-6);
    CHECK(b.contains(1.0 / 6.0));
    CHECK_FALSE(b.contains(1.0 / 12.0));
    // the a-part tail from n0 is 2^{3-n0}
    for (Index n0 : {2, 5, 9}) CHECK(lp_series(p.r(), p.a(), 1.0, n0, 1e-12).contains(std::ldexp(8.0, -static_cast<int>(n0))));
  }

  TEST_CASE("lp series at p = 2 against a direct sum") {
    const ProblemSpec p = testing::example2();
    long double direct = 0.0L;
    for (Index n = 1; n <= 200; ++n) {
      const long double inner = std::ldexp(2.0L, -static_cast<int>(n) + 1);  // sum_{s>=n} sum_{t>=s} 2^-t
      direct += inner * inner;
    }
    CHECK(lp_series(p.r(), p.a(), 2.0, 1, 1e-12).contains(static_cast<double>(direct)));
  }

  TEST_CASE("tail profiles are nonincreasing in n") {
    const ProblemSpec p = testing::example2();
    const TailProfile prof = tail_profile(p.r(), p.a(), p.b(), 0.1, Flavor::tail, 1, 1, 100, 1000);
    for (Index n = 2; n <= 100; ++n) CHECK(prof.at(n).hi <= prof.at(n - 1).hi);
  }

  TEST_CASE("find_n0 returns the first certified index") {
    const ProblemSpec p = testing::example1();
    ScanOptions opts;
    opts.scale = 0.5;
    const N0Result r = find_n0(p, 1.0, Flavor::tail, opts);
    CHECK(r.n0 == 4);
    CHECK(r.q_star == 0.5);
    CHECK(r.S.hi < r.threshold);

    // forced problem with a small ball: check minimality against the oracle
    const ProblemSpec forced = testing::example1_forced();
    const N0Result s = find_n0(forced, 0.05, Flavor::tail, opts);
    const double Q = estimate_f_meta(forced.f(), 0.05).Q;
    CHECK(static_cast<double>(testing::naive_double_tail(forced, Q, s.n0, 4000)) < 0.5 * 0.05);
    if (s.n0 > forced.beta() + 1)
      CHECK(static_cast<double>(testing::naive_double_tail(forced, Q, s.n0 - 1, 4000)) >= 0.5 * 0.05 * (1 - 1e-9));
  }

  TEST_CASE("find_n0 preconditions") {
    CHECK_THROWS_AS(find_n0(testing::example1(), 1.0, Flavor::tail), PreconditionError);
    CHECK_THROWS_AS(find_n0(testing::example2(), 1.0, Flavor::shifted), PreconditionError);
    CHECK(find_n0(testing::shifted_q2(), 1.0, Flavor::shifted).n0 >= 3);
  }

  TEST_CASE("find_n0_lp on Example 2") {
    const N0LpResult r = find_n0_lp(testing::example2(), 1.0);
    CHECK(r.n0 == 4);
    CHECK(r.q_star == 0.4);
    CHECK(r.lhs.hi < r.rhs);
    CHECK(r.A.contains(0.5));
    CHECK_THROWS_AS(find_n0_lp(testing::example2(), 3.0), PreconditionError);  // 0.4 >= 2^{-2}
  }

  TEST_CASE("H_sb scan on Example 1") {
    const HsbScan s = scan_Hsb(testing::example1(), 1.0, 0.9, 0.625, 1.0, 400);
    REQUIRE(s.k0.has_value());
    CHECK(*s.k0 == 11);
    // oracle: 3 (8/9)^k < (1 - (5/8)^k)^k from k0 on, not at k0 - 1
    auto holds = [](Index k) {
      const double kd = static_cast<double>(k);
      return 3.0 * std::pow(8.0 / 9.0, kd) < std::pow(1.0 - std::pow(0.625, kd), kd);
    };
    for (Index k = *s.k0; k <= 400; ++k) CHECK(holds(k));
    CHECK_FALSE(holds(*s.k0 - 1));
    CHECK(*scan_Hsb(testing::example1_forced(), 1.0, 0.9, 0.625, 1.0, 400).k0 == 13);
  }

  TEST_CASE("remark families separate the two summability hypotheses") {
    const auto start = std::chrono::steady_clock::now();
    const auto full = check_hypotheses(testing::remark_full_only(), {"Hs", "Hs'"});
    CHECK(find(full, "Hs").verdict == Verdict::holds);
    CHECK(find(full, "Hs'").verdict == Verdict::fails);
    const auto partial = check_hypotheses(testing::remark_partial_only(), {"Hs", "Hs'"});
    CHECK(find(partial, "Hs").verdict == Verdict::fails);
    CHECK(find(partial, "Hs'").verdict == Verdict::holds);
    CHECK(std::chrono::steady_clock::now() - start < std::chrono::seconds(1));
  }

  TEST_CASE("hypothesis verdicts on the examples") {
    const auto ex1 = check_hypotheses(testing::example1(), {"Hq", "Hq=1", "Hsb", "Hfl", "H0"});
    CHECK(find(ex1, "Hq").verdict == Verdict::fails);
    CHECK(find(ex1, "Hq=1").verdict == Verdict::holds);
    CHECK(find(ex1, "Hsb").verdict == Verdict::holds);
    CHECK(find(ex1, "Hsb").witnesses.at("k0") == 11);
    CHECK(find(ex1, "H0").verdict == Verdict::holds);
    const auto ex2 = check_hypotheses(testing::example2(), {"Hq", "Hsp", "Hqp", "Hs"});
    for (const auto& r : ex2) CHECK_MESSAGE(r.verdict == Verdict::holds, r.id);
    const auto sh = check_hypotheses(testing::shifted_q2(), {"Hq1", "Hq"});
    CHECK(find(sh, "Hq1").verdict == Verdict::holds);
    CHECK(find(sh, "Hq").verdict == Verdict::fails);
    CHECK_THROWS_AS(check_hypotheses(testing::example2(), {"Hbogus"}), ValidationError);
  }
}

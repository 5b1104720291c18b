#include <memory>
#include <sstream>

#include "doctest.h"
#include "qdiff/errors.hpp"
#include "qdiff/io.hpp"
#include "support.hpp"

using namespace qdiff;
using io::Json;

namespace {

std::string error_path(const Json& j) {
  try {
    io::problem_from_json(j);
  } catch (const ValidationError& e) {
    return e.path();
  }
  return "<none>";
}

Json ex1_json() {
  return Json::parse(R"({"tau": 3, "sigma": 1,
    "r": {"kind": "alternating", "c": 1},
    "a": {"kind": "geometric", "c": 0.75, "rho": 0.5},
    "b": {"kind": "constant", "c": 0},
    "q": {"kind": "one-minus-geometric", "rho": 0.5},
    "f": {"kind": "sine-power", "power": 6}})");
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("Example 1 parses to the fixture") {
    const ProblemSpec p = io::problem_from_json(ex1_json());
    CHECK(p.tau() == 3);
    CHECK(p.sigma() == 1);
    CHECK(p == testing::example1());
  }

  TEST_CASE("round trip for every kind") {
    seq::Table tail_table;
    tail_table.values = {0.5, 0.25};
    tail_table.tail = std::make_shared<const SequenceSpec>(seq::Geometric{1.0, 0.5});
    seq::Table finite;
    finite.start = 1;
    finite.values = {1.0, -2.0};
    finite.finite_support = true;
    const std::vector<SequenceForm> seqs = {seq::Geometric{2.0, 0.3},      seq::Power{1.0, -2.5},
                                            seq::Alternating{3.0},         seq::OddProductReciprocal{1.0},
                                            seq::RisingFourReciprocal{2.0}, seq::AffineGeometric{2.0, 0.5, 0.25},
                                            seq::AffineGeometric{1.0, -1.0, 0.5}, seq::Constant{0.4},
                                            tail_table,                    finite};
    for (const auto& s : seqs) {
      const SequenceSpec spec(s);
      CHECK(io::sequence_from_json(io::to_json(spec), "x") == spec);
    }
    const std::vector<FunctionForm> fns = {fn::Linear{0.1, 0.2}, fn::SinePower{6, 2.0, 0.5}, fn::Polynomial{{1, 2, 3}},
                                           fn::Table{{-1, 0, 1}, {0, 1, 0}}};
    for (const auto& f : fns) CHECK(io::function_from_json(io::to_json(FunctionSpec(f)), "f") == FunctionSpec(f));
    const ProblemSpec p = testing::example2();
    CHECK(io::problem_from_json(Json::parse(io::to_json(p).dump())) == p);
  }

  TEST_CASE("schema errors carry field paths") {
    Json j = ex1_json();
    j.erase("r");
    CHECK(error_path(j) == "r");
    j = ex1_json();
    j["a"].erase("rho");
    CHECK(error_path(j) == "a.rho");
    j = ex1_json();
    j["q"]["kind"] = "mystery";
    CHECK(error_path(j) == "q.kind");
    j = ex1_json();
    j["tau"] = 1.5;
    CHECK(error_path(j) == "tau");
    j = ex1_json();
    j["f"]["powr"] = 2;
    CHECK(error_path(j) == "f.powr");
    j = ex1_json();
    j["a"] = Json::parse(R"({"kind": "table", "values": [1, 2, 3]})");
    CHECK_THROWS_AS(io::problem_from_json(j), ValidationError);
    j = ex1_json();
    j["a"] = Json::parse(R"({"kind": "table", "values": [1, "x"]})");
    CHECK(error_path(j) == "a.values[1]");
  }

  TEST_CASE("CSV round trip and errors") {
    const Window x(3, {0.1, -2.5e-17, 1.0 / 3.0});
    std::stringstream ss;
    io::write_csv(ss, x);
    CHECK(ss.str().rfind("n,x\n3,", 0) == 0);
    CHECK(io::read_csv(ss) == x);
    std::stringstream gap("n,x\n1,0.5\n3,0.25\n");
    CHECK_THROWS_AS(io::read_csv(gap), ValidationError);
    std::stringstream header("i,v\n1,0\n");
    CHECK_THROWS_AS(io::read_csv(header), ValidationError);
    std::stringstream junk("n,x\n1,abc\n");
    CHECK_THROWS_AS(io::read_csv(junk), ValidationError);
  }

  TEST_CASE("reports serialize") {
    HypothesisReport h;
    h.id = "Hq";
    h.verdict = Verdict::undecidable;
    h.witnesses["q_star"] = 1.0;
    const Json j = io::to_json(h);
    CHECK(j["verdict"] == "undecidable-at-horizon");
    CHECK(j["witnesses"]["q_star"] == 1.0);
    CHECK(io::to_json(Enclosure(1.0, 2.0))["hi"] == 2.0);
  }
}

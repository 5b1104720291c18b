#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"
#include "qdiff/approx.hpp"
#include "qdiff/lp.hpp"
#include "qdiff/model.hpp"
#include "qdiff/series.hpp"
#include "qdiff/solver.hpp"
#include "qdiff/verify.hpp"

namespace qdiff::io {

using Json = nlohmann::json;

/// Problem files look like
///   {"tau": 3, "sigma": 1,
///    "r": {"kind": "alternating", "c": 1},
///    "a": {"kind": "geometric", "c": 0.75, "rho": 0.5},
///    "b": {"kind": "constant", "c": 0},
///    "q": {"kind": "one-minus-geometric", "rho": 0.5},
///    "f": {"kind": "sine-power", "power": 6}}
/// `b` may be omitted (zero). Errors carry the offending field path.
ProblemSpec problem_from_json(const Json& j);
Json to_json(const ProblemSpec& problem);

SequenceSpec sequence_from_json(const Json& j, const std::string& path);
Json to_json(const SequenceSpec& s);
FunctionSpec function_from_json(const Json& j, const std::string& path);
Json to_json(const FunctionSpec& f);

ProblemSpec read_problem(const std::string& path);

/// CSV with header `n,x` and one row per index; indices must be consecutive.
void write_csv(std::ostream& os, const Window& x);
void write_csv(const std::string& path, const Window& x);
Window read_csv(std::istream& is, const std::string& name = "csv");
Window read_csv(const std::string& path);

Json to_json(const Enclosure& e);
Json to_json(const HypothesisReport& r);
Json to_json(const SolveResult& r);
Json to_json(const ResidualReport& r);
Json to_json(const AuxiliarySolution& s);
Json to_json(const ApproxReport& r);
Json to_json(const LpResult& r);

void write_json(const std::string& path, const Json& j);

}  // namespace qdiff::io

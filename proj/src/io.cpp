#include "qdiff/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "qdiff/errors.hpp"

namespace qdiff::io {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

void expect_object(const Json& j, const std::string& path) {
  if (!j.is_object()) throw ValidationError(path, "expected an object");
}

void allow_keys(const Json& j, const std::string& path, std::initializer_list<const char*> keys) {
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) throw ValidationError(join(path, k), "unknown field");
  }
}

double number(const Json& j, const std::string& key, const std::string& path, std::optional<double> fallback = {}) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    throw ValidationError(join(path, key), "missing required field");
  }
  const Json& v = j.at(key);
  if (!v.is_number()) throw ValidationError(join(path, key), "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ValidationError(join(path, key), "must be finite");
  return d;
}

Index integer(const Json& j, const std::string& key, const std::string& path, std::optional<Index> fallback = {}) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    throw ValidationError(join(path, key), "missing required field");
  }
  const Json& v = j.at(key);
  if (!v.is_number_integer()) throw ValidationError(join(path, key), "expected an integer");
  return v.get<Index>();
}

std::vector<double> numbers(const Json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key)) throw ValidationError(join(path, key), "missing required field");
  const Json& v = j.at(key);
  if (!v.is_array()) throw ValidationError(join(path, key), "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw ValidationError(join(path, key) + "[" + std::to_string(i) + "]", "expected a number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

std::string kind_of(const Json& j, const std::string& path) {
  expect_object(j, path);
  if (!j.contains("kind")) throw ValidationError(join(path, "kind"), "missing required field");
  if (!j.at("kind").is_string()) throw ValidationError(join(path, "kind"), "expected a string");
  return j.at("kind").get<std::string>();
}

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

SequenceSpec sequence_from_json(const Json& j, const std::string& path) {
  const std::string kind = kind_of(j, path);
  if (kind == "geometric") {
    allow_keys(j, path, {"kind", "c", "rho"});
    return SequenceSpec(seq::Geometric{number(j, "c", path, 1.0), number(j, "rho", path)}, path);
  }
  if (kind == "power") {
    allow_keys(j, path, {"kind", "c", "alpha"});
    return SequenceSpec(seq::Power{number(j, "c", path, 1.0), number(j, "alpha", path)}, path);
  }
  if (kind == "alternating") {
    allow_keys(j, path, {"kind", "c"});
    return SequenceSpec(seq::Alternating{number(j, "c", path, 1.0)}, path);
  }
  if (kind == "odd-product-reciprocal") {
    allow_keys(j, path, {"kind", "c"});
    return SequenceSpec(seq::OddProductReciprocal{number(j, "c", path, 1.0)}, path);
  }
  if (kind == "rising-four-reciprocal") {
    allow_keys(j, path, {"kind", "c"});
    return SequenceSpec(seq::RisingFourReciprocal{number(j, "c", path, 1.0)}, path);
  }
  if (kind == "affine-geometric") {
    allow_keys(j, path, {"kind", "offset", "c", "rho"});
    return SequenceSpec(seq::AffineGeometric{number(j, "offset", path), number(j, "c", path), number(j, "rho", path)},
                        path);
  }
  if (kind == "one-minus-geometric") {
    allow_keys(j, path, {"kind", "rho"});
    return SequenceSpec(seq::AffineGeometric{1.0, -1.0, number(j, "rho", path)}, path);
  }
  if (kind == "constant") {
    allow_keys(j, path, {"kind", "c"});
    return SequenceSpec(seq::Constant{number(j, "c", path)}, path);
  }
  if (kind == "table") {
    allow_keys(j, path, {"kind", "start", "values", "tail", "finite_support"});
    seq::Table t;
    t.start = integer(j, "start", path, 1);
    t.values = numbers(j, "values", path);
    if (t.values.empty()) throw ValidationError(join(path, "values"), "must not be empty");
    if (j.contains("finite_support")) {
      if (!j.at("finite_support").is_boolean()) throw ValidationError(join(path, "finite_support"), "expected a boolean");
      t.finite_support = j.at("finite_support").get<bool>();
    }
    if (j.contains("tail")) {
      if (t.finite_support) throw ValidationError(join(path, "tail"), "conflicts with finite_support");
      t.tail = std::make_shared<const SequenceSpec>(sequence_from_json(j.at("tail"), join(path, "tail")));
    }
    return SequenceSpec(std::move(t), path);
  }
  throw ValidationError(join(path, "kind"), "unknown sequence kind '" + kind + "'");
}

Json to_json(const SequenceSpec& s) {
  return std::visit(overloaded{
                        [](const seq::Geometric& g) { return Json{{"kind", "geometric"}, {"c", g.c}, {"rho", g.rho}}; },
                        [](const seq::Power& p) { return Json{{"kind", "power"}, {"c", p.c}, {"alpha", p.alpha}}; },
                        [](const seq::Alternating& a) { return Json{{"kind", "alternating"}, {"c", a.c}}; },
                        [](const seq::OddProductReciprocal& o) {
                          return Json{{"kind", "odd-product-reciprocal"}, {"c", o.c}};
                        },
                        [](const seq::RisingFourReciprocal& o) {
                          return Json{{"kind", "rising-four-reciprocal"}, {"c", o.c}};
                        },
                        [](const seq::AffineGeometric& g) {
                          if (g.offset == 1.0 && g.c == -1.0) return Json{{"kind", "one-minus-geometric"}, {"rho", g.rho}};
                          return Json{{"kind", "affine-geometric"}, {"offset", g.offset}, {"c", g.c}, {"rho", g.rho}};
                        },
                        [](const seq::Constant& c) { return Json{{"kind", "constant"}, {"c", c.c}}; },
                        [](const seq::Table& t) {
                          Json j{{"kind", "table"}, {"start", t.start}, {"values", t.values}};
                          if (t.tail) j["tail"] = to_json(*t.tail);
                          if (t.finite_support) j["finite_support"] = true;
                          return j;
                        },
                    },
                    s.form());
}

FunctionSpec function_from_json(const Json& j, const std::string& path) {
  const std::string kind = kind_of(j, path);
  if (kind == "linear") {
    allow_keys(j, path, {"kind", "slope", "intercept"});
    return FunctionSpec(fn::Linear{number(j, "slope", path, 1.0), number(j, "intercept", path, 0.0)});
  }
  if (kind == "sine-power") {
    allow_keys(j, path, {"kind", "power", "amplitude", "frequency"});
    return FunctionSpec(fn::SinePower{static_cast<int>(integer(j, "power", path, 1)), number(j, "amplitude", path, 1.0),
                                      number(j, "frequency", path, 1.0)});
  }
  if (kind == "polynomial") {
    allow_keys(j, path, {"kind", "coeffs"});
    return FunctionSpec(fn::Polynomial{numbers(j, "coeffs", path)});
  }
  if (kind == "table") {
    allow_keys(j, path, {"kind", "xs", "ys"});
    return FunctionSpec(fn::Table{numbers(j, "xs", path), numbers(j, "ys", path)});
  }
  throw ValidationError(join(path, "kind"), "unknown function kind '" + kind + "'");
}

Json to_json(const FunctionSpec& f) {
  return std::visit(overloaded{
                        [](const fn::Linear& l) {
                          return Json{{"kind", "linear"}, {"slope", l.slope}, {"intercept", l.intercept}};
                        },
                        [](const fn::SinePower& s) {
                          return Json{{"kind", "sine-power"},
                                      {"power", s.power},
                                      {"amplitude", s.amplitude},
                                      {"frequency", s.frequency}};
                        },
                        [](const fn::Polynomial& p) { return Json{{"kind", "polynomial"}, {"coeffs", p.coeffs}}; },
                        [](const fn::Table& t) { return Json{{"kind", "table"}, {"xs", t.xs}, {"ys", t.ys}}; },
                    },
                    f.form());
}

ProblemSpec problem_from_json(const Json& j) {
  expect_object(j, "");
  allow_keys(j, "", {"tau", "sigma", "r", "a", "b", "q", "f", "name", "note"});
  auto member = [&](const char* key) -> const Json& {
    if (!j.contains(key)) throw ValidationError(key, "missing required field");
    return j.at(key);
  };
  const Index tau = integer(j, "tau", "");
  const Index sigma = integer(j, "sigma", "");
  SequenceSpec r = sequence_from_json(member("r"), "r");
  SequenceSpec a = sequence_from_json(member("a"), "a");
  SequenceSpec b = j.contains("b") ? sequence_from_json(j.at("b"), "b") : zero_sequence();
  SequenceSpec q = sequence_from_json(member("q"), "q");
  FunctionSpec f = function_from_json(member("f"), "f");
  return ProblemSpec(tau, sigma, std::move(r), std::move(a), std::move(b), std::move(q), std::move(f));
}

Json to_json(const ProblemSpec& p) {
  return Json{{"tau", p.tau()},       {"sigma", p.sigma()},   {"r", to_json(p.r())}, {"a", to_json(p.a())},
              {"b", to_json(p.b())}, {"q", to_json(p.q())}, {"f", to_json(p.f())}};
}

ProblemSpec read_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path, "cannot open problem file");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ValidationError(path, std::string("malformed JSON: ") + e.what());
  }
  return problem_from_json(j);
}

void write_csv(std::ostream& os, const Window& x) {
  os << "n,x\n" << std::setprecision(17);
  for (Index n = x.start(); n <= x.end(); ++n) os << n << ',' << x[n] << '\n';
}

void write_csv(const std::string& path, const Window& x) {
  std::ofstream out(path);
  if (!out) throw ValidationError(path, "cannot open for writing");
  write_csv(out, x);
}

Window read_csv(std::istream& is, const std::string& name) {
  std::string line;
  if (!std::getline(is, line)) throw ValidationError(name, "empty CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "n,x") throw ValidationError(name, "expected header 'n,x', got '" + line + "'");
  std::optional<Index> start;
  std::vector<double> values;
  std::size_t row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = name + ":" + std::to_string(row);
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ValidationError(where, "expected 'n,x'");
    Index n = 0;
    double v = 0.0;
    try {
      std::size_t used = 0;
      n = std::stoll(line.substr(0, comma), &used);
      if (used != comma) throw std::invalid_argument("n");
      const std::string rest = line.substr(comma + 1);
      v = std::stod(rest, &used);
      if (used != rest.size()) throw std::invalid_argument("x");
    } catch (const std::exception&) {
      throw ValidationError(where, "cannot parse '" + line + "'");
    }
    if (!start) start = n;
    if (n != *start + static_cast<Index>(values.size())) throw ValidationError(where, "indices must be consecutive");
    values.push_back(v);
  }
  if (!start) throw ValidationError(name, "no data rows");
  if (*start < 0) throw ValidationError(name, "indices must be nonnegative");
  return Window(*start, std::move(values));
}

Window read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path, "cannot open CSV file");
  return read_csv(in, path);
}

Json to_json(const Enclosure& e) { return Json{{"lo", number_or_null(e.lo)}, {"hi", number_or_null(e.hi)}}; }

Json to_json(const HypothesisReport& r) {
  Json w = Json::object();
  for (const auto& [k, v] : r.witnesses) w[k] = number_or_null(v);
  Json e = Json::object();
  for (const auto& [k, v] : r.enclosures) e[k] = to_json(v);
  return Json{{"id", r.id}, {"verdict", to_string(r.verdict)}, {"witnesses", w}, {"enclosures", e}, {"note", r.note}};
}

Json to_json(const SolveResult& r) {
  return Json{{"flavor", to_string(r.flavor)},
              {"M", r.M},
              {"scale", r.scale},
              {"n0", r.n0},
              {"kappa", number_or_null(r.kappa)},
              {"q_star", r.q_star},
              {"Q", r.Q},
              {"L", r.L},
              {"S", to_json(r.S)},
              {"iterations", r.iterations},
              {"defect", r.defect},
              {"truncation_error", number_or_null(r.truncation_error)},
              {"horizon", r.horizon},
              {"window", {{"start", r.solution.start()}, {"end", r.solution.end()}}},
              {"residual", {{"from", r.residual_from},
                            {"to", r.residual_to},
                            {"sup", number_or_null(r.residual_sup)},
                            {"bound", number_or_null(r.residual_bound)}}}};
}

Json to_json(const ResidualReport& r) {
  Json values = Json::array();
  for (double v : r.values) values.push_back(number_or_null(v));
  return Json{{"from", r.first}, {"to", r.last()}, {"sup", number_or_null(r.sup)}, {"argmax", r.argmax},
              {"values", values}};
}

Json to_json(const AuxiliarySolution& s) {
  return Json{{"k", s.k}, {"w", s.w}, {"M", s.M}, {"solve", to_json(s.result)},
              {"full_window", {{"start", s.full.start()}, {"end", s.full.end()}}}};
}

Json to_json(const ApproxReport& r) {
  Json solves = Json::array();
  for (const auto& s : r.solves) solves.push_back(to_json(s));
  return Json{{"k0", r.cert.k0},
              {"D", r.cert.D},
              {"P", r.cert.P},
              {"q_inf", r.cert.q_inf},
              {"solves", solves},
              {"common_window", {{"start", r.common_from}, {"end", r.common_to}}},
              {"diff_max", r.diff_max},
              {"converged", r.converged},
              {"message", r.message},
              {"limit_residual_sup", number_or_null(r.limit_residual.sup)},
              {"uniform_bound", r.uniform_bound},
              {"uniform_bound_ok", r.uniform_bound_ok},
              {"tail_bound_ok", r.tail_bound_ok},
              {"scaled_defect", r.scaled_defect},
              {"unscaled_defect", r.unscaled_defect},
              {"unscaled_defect_bound", r.unscaled_defect_bound},
              {"defect_bound_ok", r.defect_bound_ok}};
}

Json to_json(const LpResult& r) {
  Json profile = Json::array();
  for (const auto& [l, t] : r.tail_profile) profile.push_back(Json{{"l", l}, {"t", t}});
  Json j = to_json(r.solve);
  j["p"] = r.p;
  j["norm"] = r.norm;
  j["tail_profile"] = profile;
  j["neglected_tail"] = r.neglected_tail;
  j["lp_condition"] = {{"lhs", to_json(r.cert.lhs)}, {"rhs", r.cert.rhs}, {"A", to_json(r.cert.A)},
                       {"B", to_json(r.cert.B)}, {"W", r.cert.W}};
  return j;
}

void write_json(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw ValidationError(path, "cannot open for writing");
  out << j.dump(2) << '\n';
}

}  // namespace qdiff::io

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qdiff/approx.hpp"
#include "qdiff/errors.hpp"
#include "qdiff/io.hpp"
#include "qdiff/lp.hpp"
#include "qdiff/series.hpp"
#include "qdiff/solver.hpp"
#include "qdiff/verify.hpp"

namespace py = pybind11;
using qdiff::io::Json;

namespace {

qdiff::ProblemSpec parse(const std::string& problem_json) {
  Json j;
  try {
    j = Json::parse(problem_json);
  } catch (const Json::parse_error& e) {
    throw qdiff::ValidationError("", std::string("malformed JSON: ") + e.what());
  }
  return qdiff::io::problem_from_json(j);
}

Json window_json(const qdiff::Window& x) {
  return Json{{"start", x.start()}, {"values", std::vector<double>(x.values().begin(), x.values().end())}};
}

qdiff::Window window_from(qdiff::Index start, const std::vector<double>& values) {
  return qdiff::Window(start, values);
}

std::string double_tail(const std::string& problem_json, double Q, qdiff::Index n) {
  const auto p = parse(problem_json);
  return qdiff::io::to_json(qdiff::double_tail(p.r(), p.a(), p.b(), Q, n)).dump();
}

std::string check(const std::string& problem_json, const std::vector<std::string>& ids, double C, double rho) {
  const auto p = parse(problem_json);
  qdiff::HypothesisParams params;
  params.C = C;
  params.rho = rho;
  Json out = Json::array();
  for (const auto& r : qdiff::check_hypotheses(p, ids.empty() ? qdiff::hypothesis_ids() : ids, 4096, params))
    out.push_back(qdiff::io::to_json(r));
  return out.dump();
}

std::string solve(const std::string& problem_json, double M, double w, const std::string& flavor, qdiff::Index window,
                  double tol_fp, double tol_res) {
  const auto p = parse(problem_json);
  qdiff::SolveConfig c;
  c.M = M;
  c.scale = w;
  c.flavor = qdiff::flavor_from_string(flavor);
  c.window_len = window;
  c.tol_fp = tol_fp;
  c.tol_res = tol_res;
  const auto res = qdiff::solve_bounded(p, c);
  Json j = qdiff::io::to_json(res);
  j["solution"] = window_json(res.solution);
  return j.dump();
}

std::string solve_lp(const std::string& problem_json, double p_exp, qdiff::Index window) {
  const auto p = parse(problem_json);
  qdiff::LpConfig c;
  c.p = p_exp;
  c.window_len = window;
  const auto res = qdiff::solve_lp(p, c);
  Json j = qdiff::io::to_json(res);
  j["solution"] = window_json(res.solve.solution);
  return j.dump();
}

std::string approximate(const std::string& problem_json, double C, double rho, qdiff::Index k_min, qdiff::Index k_max) {
  const auto p = parse(problem_json);
  qdiff::ApproxConfig c;
  c.C = C;
  c.rho = rho;
  c.k_min = k_min;
  c.k_max = k_max;
  const auto rep = qdiff::approximate_limit(p, c);
  Json j = qdiff::io::to_json(rep);
  j["limit"] = window_json(rep.limit);
  return j.dump();
}

std::string residual(const std::string& problem_json, qdiff::Index start, const std::vector<double>& values, double w) {
  const auto p = parse(problem_json);
  return qdiff::io::to_json(qdiff::residual(p, window_from(start, values), w)).dump();
}

std::string forward(const std::string& problem_json, qdiff::Index start, const std::vector<double>& values,
                    qdiff::Index steps, double w) {
  const auto p = parse(problem_json);
  return window_json(qdiff::forward_recurrence(p, window_from(start, values), steps, w)).dump();
}

}  // namespace

PYBIND11_MODULE(_qdiff, m) {
  m.doc() = "Native core of qdiff; results are returned as JSON text.";

  // translators run newest first, so the subclass is registered last
  py::register_exception<qdiff::Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<qdiff::ValidationError>(m, "ValidationError", PyExc_ValueError);

  m.def("validate", [](const std::string& s) { return qdiff::io::to_json(parse(s)).dump(); }, py::arg("problem"));
  m.def("double_tail", &double_tail, py::arg("problem"), py::arg("Q"), py::arg("n"));
  m.def("check", &check, py::arg("problem"), py::arg("ids") = std::vector<std::string>{}, py::arg("C") = 0.9,
        py::arg("rho") = 0.625);
  m.def("solve", &solve, py::arg("problem"), py::arg("M") = 1.0, py::arg("w") = 1.0, py::arg("flavor") = "tail",
        py::arg("window") = 256, py::arg("tol_fp") = 1e-12, py::arg("tol_res") = 1e-8);
  m.def("solve_lp", &solve_lp, py::arg("problem"), py::arg("p") = 1.0, py::arg("window") = 256);
  m.def("approximate", &approximate, py::arg("problem"), py::arg("C") = 0.9, py::arg("rho") = 0.625,
        py::arg("k_min") = 0, py::arg("k_max") = 0);
  m.def("residual", &residual, py::arg("problem"), py::arg("start"), py::arg("values"), py::arg("w") = 1.0);
  m.def("forward_recurrence", &forward, py::arg("problem"), py::arg("start"), py::arg("values"), py::arg("steps"),
        py::arg("w") = 1.0);
}

// qdiff: command-line front end for the bounded / l^p / approximation solvers.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "qdiff/approx.hpp"
#include "qdiff/errors.hpp"
#include "qdiff/io.hpp"
#include "qdiff/lp.hpp"
#include "qdiff/series.hpp"
#include "qdiff/solver.hpp"
#include "qdiff/verify.hpp"

namespace fs = std::filesystem;
using qdiff::io::Json;

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kInputError = 2;

struct Options {
  std::string problem;
  std::string out = ".";
  std::uint64_t seed = 0;
  double M = 1.0;
  double p = 1.0;
  double tol_fp = 1e-12;
  double tol_res = 1e-8;
  qdiff::Index window = 256;
  std::string flavor = "tail";
  double w = 1.0;
  int max_iter = 10000;
  qdiff::Index horizon = 0;
  double C = 0.9;
  double rho = 0.625;
  qdiff::Index kmin = 0;
  qdiff::Index kmax = 0;
  double tol_c = 1e-6;
  std::string hypotheses;
  std::string solution;
};

std::vector<std::string> split_ids(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

fs::path out_dir(const Options& o) {
  fs::path dir(o.out);
  fs::create_directories(dir);
  return dir;
}

void emit(const Options& o, const std::string& name, Json report) {
  report["seed"] = o.seed;
  qdiff::io::write_json((out_dir(o) / name).string(), report);
  std::cout << report.dump(2) << '\n';
}

qdiff::SolveConfig solve_config(const Options& o) {
  qdiff::SolveConfig c;
  c.M = o.M;
  c.tol_fp = o.tol_fp;
  c.tol_res = o.tol_res;
  c.window_len = o.window;
  c.flavor = qdiff::flavor_from_string(o.flavor);
  c.scale = o.w;
  c.max_iter = o.max_iter;
  c.horizon = o.horizon;
  return c;
}

int run_check(const Options& o) {
  const qdiff::ProblemSpec problem = qdiff::io::read_problem(o.problem);
  std::vector<std::string> ids = split_ids(o.hypotheses);
  if (ids.empty()) ids = qdiff::hypothesis_ids();
  qdiff::HypothesisParams params;
  params.M = o.M;
  params.p = o.p;
  params.C = o.C;
  params.rho = o.rho;
  if (o.kmax > 0) params.k_max = o.kmax;
  const auto reports = qdiff::check_hypotheses(problem, ids, o.horizon > 0 ? o.horizon : 4096, params);
  Json list = Json::array();
  bool failed = false;
  for (const auto& r : reports) {
    list.push_back(qdiff::io::to_json(r));
    failed = failed || r.verdict == qdiff::Verdict::fails;
  }
  emit(o, "check.json", Json{{"problem", o.problem}, {"hypotheses", list}});
  return failed ? kFailure : kOk;
}

int run_solve(const Options& o) {
  const qdiff::ProblemSpec problem = qdiff::io::read_problem(o.problem);
  const qdiff::SolveResult res = qdiff::solve_bounded(problem, solve_config(o));
  qdiff::io::write_csv((out_dir(o) / "solution.csv").string(), res.solution);
  emit(o, "solve.json", qdiff::io::to_json(res));
  return kOk;
}

int run_solve_lp(const Options& o) {
  const qdiff::ProblemSpec problem = qdiff::io::read_problem(o.problem);
  qdiff::LpConfig c;
  c.p = o.p;
  c.tol_fp = o.tol_fp;
  c.tol_res = o.tol_res;
  c.window_len = o.window;
  c.flavor = qdiff::flavor_from_string(o.flavor);
  c.max_iter = o.max_iter;
  c.horizon = o.horizon;
  const qdiff::LpResult res = qdiff::solve_lp(problem, c);
  qdiff::io::write_csv((out_dir(o) / "solution.csv").string(), res.solve.solution);
  emit(o, "solve_lp.json", qdiff::io::to_json(res));
  return kOk;
}

int run_approx(const Options& o) {
  const qdiff::ProblemSpec problem = qdiff::io::read_problem(o.problem);
  qdiff::ApproxConfig c;
  c.C = o.C;
  c.rho = o.rho;
  c.k_min = o.kmin;
  c.k_max = o.kmax;
  c.tol_c = o.tol_c;
  c.solve = solve_config(o);
  const qdiff::ApproxReport rep = qdiff::approximate_limit(problem, c);

  const fs::path dir = out_dir(o);
  qdiff::io::write_csv((dir / "limit.csv").string(), rep.limit);
  std::ofstream diffs(dir / "diffs.csv");
  diffs << "n";
  for (std::size_t i = 0; i < rep.diffs.size(); ++i) diffs << ",d_" << rep.solves[i].k;
  diffs << '\n' << std::setprecision(17);
  for (qdiff::Index n = rep.common_from; n <= rep.common_to; ++n) {
    diffs << n;
    for (const auto& d : rep.diffs) diffs << ',' << d[static_cast<std::size_t>(n - rep.common_from)];
    diffs << '\n';
  }
  emit(o, "approx.json", qdiff::io::to_json(rep));
  return kOk;
}

int run_verify(const Options& o) {
  const qdiff::ProblemSpec problem = qdiff::io::read_problem(o.problem);
  const qdiff::Window x = qdiff::io::read_csv(o.solution);
  const qdiff::ResidualReport rep = qdiff::residual(problem, x, o.w);
  Json j = qdiff::io::to_json(rep);
  j["problem"] = o.problem;
  j["solution"] = o.solution;
  j["w"] = o.w;
  emit(o, "verify.json", j);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bounded, l^p and approximated solutions of neutral second-order difference equations"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--seed", o.seed, "Seed recorded in every report")->capture_default_str();

  auto problem_opt = [&](CLI::App* sub) {
    sub->add_option("--problem", o.problem, "Problem JSON file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "Output directory for reports and CSV")->capture_default_str();
    sub->add_option("--seed", o.seed, "Seed recorded in every report")->capture_default_str();
  };
  auto solver_opts = [&](CLI::App* sub) {
    sub->add_option("--tol-fp", o.tol_fp, "Fixed-point step tolerance")->capture_default_str();
    sub->add_option("--tol-res", o.tol_res, "Required residual bound")->capture_default_str();
    sub->add_option("--window", o.window, "Window length")->capture_default_str();
    sub->add_option("--flavor", o.flavor, "Operator flavor")
        ->check(CLI::IsMember({"tail", "partial", "shifted"}))
        ->capture_default_str();
    sub->add_option("--max-iter", o.max_iter, "Iteration budget")->capture_default_str();
    sub->add_option("--horizon", o.horizon, "Summation horizon (0: automatic)")->capture_default_str();
  };

  std::function<int(const Options&)> action;

  auto* check = app.add_subcommand("check", "Check hypotheses on a problem");
  problem_opt(check);
  check->add_option("--hypotheses", o.hypotheses, "Comma-separated ids (default: all)");
  check->add_option("--M", o.M, "Ball radius")->capture_default_str();
  check->add_option("--p", o.p, "Exponent for Hsp/Hqp")->capture_default_str();
  check->add_option("--C", o.C, "Constant C of Hsb")->capture_default_str();
  check->add_option("--rho", o.rho, "Schedule w_k = 1 - rho^k")->capture_default_str();
  check->add_option("--kmax", o.kmax, "Largest k scanned for Hsb (0: 400)")->capture_default_str();
  check->add_option("--horizon", o.horizon, "Partial-sum horizon (0: 4096)")->capture_default_str();
  check->callback([&] { action = run_check; });

  auto* solve = app.add_subcommand("solve", "Bounded solution by fixed-point iteration");
  problem_opt(solve);
  solver_opts(solve);
  solve->add_option("--M", o.M, "Ball radius")->capture_default_str();
  solve->add_option("--w", o.w, "Multiplier of q")->capture_default_str();
  solve->callback([&] { action = run_solve; });

  auto* solve_lp = app.add_subcommand("solve-lp", "l^p solution in the unit ball");
  problem_opt(solve_lp);
  solver_opts(solve_lp);
  solve_lp->add_option("--p", o.p, "Exponent p >= 1")->capture_default_str();
  solve_lp->callback([&] { action = run_solve_lp; });

  auto* approx = app.add_subcommand("approx", "Approximation cascade for q_n -> 1");
  problem_opt(approx);
  solver_opts(approx);
  approx->add_option("--C", o.C, "Constant C")->capture_default_str();
  approx->add_option("--rho", o.rho, "Schedule w_k = 1 - rho^k")->capture_default_str();
  approx->add_option("--kmin", o.kmin, "First k (0: certified k0)")->capture_default_str();
  approx->add_option("--kmax", o.kmax, "Last k (0: kmin + 6)")->capture_default_str();
  approx->add_option("--tol-c", o.tol_c, "Coordinate convergence tolerance")->capture_default_str();
  approx->callback([&] { action = run_approx; });

  auto* verify = app.add_subcommand("verify", "Residual of a solution CSV");
  problem_opt(verify);
  verify->add_option("--solution", o.solution, "Solution CSV (n,x)")->required()->check(CLI::ExistingFile);
  verify->add_option("--w", o.w, "Multiplier of q")->capture_default_str();
  verify->callback([&] { action = run_verify; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    return action(o);
  } catch (const qdiff::ValidationError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const qdiff::CoverageError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const qdiff::Error& e) {
    std::cerr << "failed: " << e.what() << '\n';
    return kFailure;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInputError;
  }
}

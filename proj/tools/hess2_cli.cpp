// Command-line runner for the 2-Hessian solvers: single solves, convergence
// studies, direction-set dumps, and problem self-checks.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hess2/harness.hpp"

namespace {

using namespace hess2;

SchemeSpec parse_scheme(const std::string& s) {
  if (s == "naive") return {Scheme::Naive, 1};
  if (s.rfind("monotone", 0) == 0) {
    int nt = s.size() > 8 ? std::stoi(s.substr(8)) : 1;
    return {Scheme::Monotone, nt};
  }
  throw CLI::ValidationError("scheme", "expected naive or monotone<n>");
}

Method parse_method(const std::string& s) {
  if (s == "jacobi") return Method::Jacobi;
  if (s == "semi" || s == "semi_implicit") return Method::SemiImplicit;
  if (s == "newton") return Method::Newton;
  if (s == "parabolic") return Method::Parabolic;
  throw CLI::ValidationError("method", "expected jacobi|semi|newton|parabolic");
}

InitKind parse_init(const std::string& s) {
  if (s == "exact_plus_noise") return InitKind::ExactPlusNoise;
  if (s == "jacobi_warmstart") return InitKind::JacobiWarmstart;
  if (s == "poisson_sqrt2f") return InitKind::PoissonSqrt2f;
  if (s == "zero") return InitKind::ZeroInterior;
  throw CLI::ValidationError("init", "unknown initial guess kind");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dirichlet solver for the elliptic 2-Hessian equation in 3D"};
  app.set_config("--config", "", "Read options from a key=value file");
  app.require_subcommand(1);

  // solve
  auto* cmd_solve = app.add_subcommand("solve", "Run one solve");
  std::string problem = "ex1", scheme_str = "naive", method_str = "newton";
  std::string init_str = "jacobi_warmstart", report_path, field_path;
  int N = 15;
  double tol = 1e-10, noise = 0.01, alpha_coeff = 0.1, x0 = 0.5;
  std::int64_t max_iters = 200000;
  std::uint64_t seed = 0;
  std::vector<double> levels;
  cmd_solve->add_option("--problem", problem, "Problem name (ex1..ex8)");
  cmd_solve->add_option("--scheme", scheme_str, "naive or monotone<n_theta>");
  cmd_solve->add_option("--method", method_str, "jacobi|semi|newton|parabolic");
  cmd_solve->add_option("--init", init_str,
                        "exact_plus_noise|jacobi_warmstart|poisson_sqrt2f|zero");
  cmd_solve->add_option("-n,--grid", N, "Nodes per axis");
  cmd_solve->add_option("--tol", tol, "Residual stopping threshold");
  cmd_solve->add_option("--max-iters", max_iters);
  cmd_solve->add_option("--seed", seed, "RNG seed for the noisy init");
  cmd_solve->add_option("--noise", noise, "Noise amplitude for the init");
  cmd_solve->add_option("--alpha-coeff", alpha_coeff,
                        "Parabolic step coefficient c in alpha = c h^4");
  cmd_solve->add_option("--x0", x0, "Center coordinate for ex2/ex5");
  cmd_solve->add_option("--report", report_path, "Write SolveReport JSON here");
  cmd_solve->add_option("--field", field_path, "Write the solution field CSV here");
  cmd_solve->add_option("--levels", levels, "Level values flagged in the field CSV");

  // study
  auto* cmd_study = app.add_subcommand("study", "Convergence study");
  std::vector<std::string> scheme_list = {"naive"};
  std::vector<int> sizes = {15, 20, 25, 30, 35};
  std::string out_dir;
  bool report_json = false, level_set = false;
  cmd_study->add_option("--problem", problem);
  cmd_study->add_option("--schemes", scheme_list,
                        "One or more of naive, monotone<n_theta>");
  cmd_study->add_option("--method", method_str);
  cmd_study->add_option("--sizes", sizes, "Increasing grid sizes");
  cmd_study->add_option("--out-dir", out_dir, "Directory for CSV/JSON artifacts");
  cmd_study->add_option("--tol", tol);
  cmd_study->add_option("--max-iters", max_iters);
  cmd_study->add_option("--seed", seed);
  cmd_study->add_option("--noise", noise);
  cmd_study->add_option("--alpha-coeff", alpha_coeff);
  cmd_study->add_option("--x0", x0);
  cmd_study->add_flag("--report-json", report_json, "Write a JSON report per cell");
  cmd_study->add_flag("--level-set", level_set, "Write level-set CSV per cell");
  cmd_study->add_option("--levels", levels);

  // dirs
  auto* cmd_dirs = app.add_subcommand("dirs", "Dump a direction set");
  int n_theta = 1, dtheta_samples = 0;
  std::string dirs_path;
  cmd_dirs->add_option("--n-theta", n_theta, "Stencil width (1..6)");
  cmd_dirs->add_option("--out", dirs_path, "CSV output path");
  cmd_dirs->add_option("--dtheta-samples", dtheta_samples,
                       "Monte Carlo samples for the dtheta diagnostic");
  cmd_dirs->add_option("--seed", seed);

  // validate
  auto* cmd_validate = app.add_subcommand("validate", "Problem self-check");
  int samples = 1000;
  std::string validate_name = "all";
  cmd_validate->add_option("--problem", validate_name, "Problem name or 'all'");
  cmd_validate->add_option("--samples", samples);
  cmd_validate->add_option("--seed", seed);
  cmd_validate->add_option("--x0", x0);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cmd_solve) {
      auto problems = catalog(x0, x0, x0);
      const Problem& p = find_problem(problems, problem);
      SchemeSpec spec = parse_scheme(scheme_str);
      int band = spec.scheme == Scheme::Monotone ? spec.n_theta : 1;
      Grid3 grid = build_grid(N, p.domain, band);
      SolverConfig sc;
      sc.scheme = spec.scheme;
      sc.n_theta = spec.n_theta;
      sc.method = parse_method(method_str);
      sc.init = parse_init(init_str);
      sc.tol = tol;
      sc.max_iters = max_iters;
      sc.seed = seed;
      sc.noise_amplitude = noise;
      sc.parabolic_alpha_coeff = alpha_coeff;
      SolveReport rep = solve(p, grid, sc);
      std::cout << "problem=" << problem << " scheme=" << spec.label()
                << " N=" << N << " iterations=" << rep.iterations
                << " converged=" << (rep.converged ? "yes" : "no");
      if (!rep.residual_history.empty())
        std::cout << " residual=" << rep.residual_history.back();
      if (p.has_exact()) {
        ScalarField exact = sample_field(grid, p.u_exact);
        std::cout << " error_inf=" << max_norm_error(rep.final_field, exact);
      }
      if (!rep.failure.empty()) std::cout << " failure=\"" << rep.failure << '"';
      std::cout << "\n";
      if (!report_path.empty()) {
        std::ofstream out(report_path);
        out << to_json(rep) << "\n";
      }
      if (!field_path.empty())
        export_field_csv(rep.final_field, field_path, levels);
      return rep.converged || sc.method == Method::Parabolic ? 0 : 1;
    }

    if (*cmd_study) {
      RunConfig rc;
      rc.problem = problem;
      rc.schemes.clear();
      for (const std::string& s : scheme_list)
        rc.schemes.push_back(parse_scheme(s));
      rc.solver = parse_method(method_str);
      rc.grid_sizes = sizes;
      rc.out_dir = out_dir;
      rc.seed = seed;
      rc.tol = tol;
      rc.max_iters = max_iters;
      rc.noise_amplitude = noise;
      rc.parabolic_alpha_coeff = alpha_coeff;
      rc.x0 = x0;
      rc.export_report_json = report_json;
      rc.export_level_set = level_set;
      rc.levels = levels;
      auto tables = run_study(rc);
      std::cout << tables_to_text(tables);
      for (const auto& t : tables)
        for (const auto& r : t.rows)
          if (!r.note.empty() || (!r.converged && r.iterations > 0)) return 1;
      return 0;
    }

    if (*cmd_dirs) {
      DirectionSet ds = generate_directions(n_theta);
      std::cout << "n_theta=" << n_theta << " directions=" << ds.directions.size()
                << " triplets=" << ds.triplets.size() << "\n";
      if (dtheta_samples > 0)
        std::cout << "dtheta_estimate="
                  << estimate_dtheta(ds, dtheta_samples, seed) << "\n";
      if (!dirs_path.empty()) export_directions_csv(ds, dirs_path);
      return 0;
    }

    if (*cmd_validate) {
      auto problems = catalog(x0, x0, x0);
      bool all_pass = true;
      for (const Problem& p : problems) {
        if (validate_name != "all" && p.name != validate_name) continue;
        if (!p.hess_exact) {
          std::cout << p.name << ": skipped (no exact solution)\n";
          continue;
        }
        ValidationReport rep = validate_problem(p, samples, seed);
        std::cout << p.name << ": " << (rep.pass ? "pass" : "FAIL")
                  << " max_residual=" << rep.max_residual << "\n";
        all_pass = all_pass && rep.pass;
      }
      return all_pass ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

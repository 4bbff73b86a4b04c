#include "hess2/harness.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace hess2 {

std::string SchemeSpec::label() const {
  if (scheme == Scheme::Naive) return "naive";
  return "monotone" + std::to_string(n_theta);
}

double observed_order(double e1, double e2, int n1, int n2) {
  if (e1 <= 0 || e2 <= 0)
    throw std::invalid_argument("observed_order: errors must be positive");
  if (n2 <= n1)
    throw std::invalid_argument("observed_order: need n2 > n1");
  double h1 = 1.0 / (n1 - 1), h2 = 1.0 / (n2 - 1);
  return std::log(e1 / e2) / std::log(h1 / h2);
}

std::vector<ConvergenceTable> run_study(const RunConfig& config) {
  auto problems = catalog(config.x0, config.x0, config.x0);
  const Problem& problem = find_problem(problems, config.problem);
  if (!config.out_dir.empty())
    std::filesystem::create_directories(config.out_dir);

  std::vector<ConvergenceTable> tables;
  for (const SchemeSpec& spec : config.schemes) {
    ConvergenceTable table;
    table.problem = config.problem;
    table.scheme = spec;
    for (std::size_t row_i = 0; row_i < config.grid_sizes.size(); ++row_i) {
      int N = config.grid_sizes[row_i];
      if (row_i > 0 && N <= config.grid_sizes[row_i - 1])
        throw std::invalid_argument("run_study: grid sizes must be increasing");
      TableRow row;
      row.grid_size = N;
      try {
        int band = spec.scheme == Scheme::Monotone ? spec.n_theta : 1;
        Grid3 grid = build_grid(N, problem.domain, band);
        SolverConfig sc;
        sc.scheme = spec.scheme;
        sc.n_theta = spec.n_theta;
        sc.method = config.solver;
        sc.tol = config.tol;
        sc.max_iters = config.max_iters;
        sc.noise_amplitude = config.noise_amplitude;
        sc.parabolic_alpha_coeff = config.parabolic_alpha_coeff;
        sc.seed = config.seed;
        if (!problem.has_exact() && config.solver == Method::Parabolic)
          sc.init = InitKind::PoissonSqrt2f;
        SolveReport rep = solve(problem, grid, sc);
        row.iterations = rep.iterations;
        row.converged = rep.converged;
        row.note = rep.failure;
        if (problem.has_exact()) {
          ScalarField exact = sample_field(grid, problem.u_exact);
          row.error = max_norm_error(rep.final_field, exact);
          if (row_i > 0 && table.rows.back().error > 0 && row.error > 0)
            row.order = observed_order(table.rows.back().error, row.error,
                                       table.rows.back().grid_size, N);
        }
        if (!config.out_dir.empty()) {
          std::string base = config.out_dir + "/" + config.problem + "_" +
                             spec.label() + "_N" + std::to_string(N);
          if (config.export_report_json) {
            std::ofstream out(base + "_report.json");
            out << to_json(rep) << "\n";
          }
          if (config.export_level_set)
            export_level_sets(rep.final_field, config.levels,
                              base + "_levels.csv");
        }
      } catch (const std::exception& e) {
        row.note = e.what();
      }
      table.rows.push_back(std::move(row));
    }
    if (!config.out_dir.empty() && config.export_error_csv)
      write_table_csv(table, config.out_dir + "/" + config.problem + "_" +
                                 spec.label() + "_errors.csv");
    tables.push_back(std::move(table));
  }
  return tables;
}

void write_table_csv(const ConvergenceTable& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_table_csv: cannot open " + path);
  out.precision(17);
  out << "N,error_inf,observed_order,iterations,converged,note\n";
  for (const TableRow& r : table.rows) {
    out << r.grid_size << ',';
    if (std::isnan(r.error)) out << "";
    else out << r.error;
    out << ',';
    if (std::isnan(r.order)) out << "";
    else out << r.order;
    out << ',' << r.iterations << ',' << (r.converged ? 1 : 0) << ','
        << r.note << "\n";
  }
}

std::string tables_to_text(const std::vector<ConvergenceTable>& tables) {
  std::ostringstream os;
  for (const ConvergenceTable& t : tables) {
    os << "# " << t.problem << " / " << t.scheme.label() << "\n";
    os << "N\terror_inf\torder\titers\tstatus\n";
    for (const TableRow& r : t.rows) {
      os << r.grid_size << '\t';
      if (std::isnan(r.error)) os << "-";
      else { os.precision(4); os << std::scientific << r.error; }
      os << '\t';
      if (std::isnan(r.order)) os << "-";
      else { os.precision(2); os << std::fixed << r.order; }
      os << '\t' << r.iterations << '\t'
         << (r.note.empty() ? (r.converged ? "ok" : "not-converged") : r.note)
         << "\n";
    }
    os << "\n";
  }
  return os.str();
}

void export_level_sets(const ScalarField& field,
                       const std::vector<double>& levels,
                       const std::string& path) {
  export_field_csv(field, path, levels);
}

}  // namespace hess2

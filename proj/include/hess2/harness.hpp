// Configuration-driven runner: single solves, convergence studies over grid
// sizes and stencil widths, observed-order computation, and artifact export.
#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "hess2/problems.hpp"
#include "hess2/solvers.hpp"

namespace hess2 {

struct SchemeSpec {
  Scheme scheme = Scheme::Naive;
  int n_theta = 1;  // monotone only

  std::string label() const;
};

struct RunConfig {
  std::string problem = "ex1";
  std::vector<SchemeSpec> schemes = {{Scheme::Naive, 1}};
  Method solver = Method::Newton;
  std::vector<int> grid_sizes = {15, 20, 25, 30, 35};
  std::string out_dir;  // empty => no files written
  std::uint64_t seed = 0;
  double tol = 1e-10;
  std::int64_t max_iters = 200000;
  double noise_amplitude = 0.01;
  double parabolic_alpha_coeff = 0.1;
  double x0 = 0.5;  // center for ex2/ex5
  bool export_error_csv = true;
  bool export_report_json = false;
  bool export_level_set = false;
  std::vector<double> levels;
};

struct TableRow {
  int grid_size = 0;
  double error = std::numeric_limits<double>::quiet_NaN();  // NaN if no exact
  double order = std::numeric_limits<double>::quiet_NaN();  // NaN on first row
  std::int64_t iterations = 0;
  bool converged = false;
  std::string note;
};

struct ConvergenceTable {
  std::string problem;
  SchemeSpec scheme;
  std::vector<TableRow> rows;
};

// ln(e1/e2) / ln(h1/h2) with h = 1/(N-1).
double observed_order(double e1, double e2, int n1, int n2);

// One table per scheme; solver failures are recorded per row, not fatal.
std::vector<ConvergenceTable> run_study(const RunConfig& config);

void write_table_csv(const ConvergenceTable& table, const std::string& path);
std::string tables_to_text(const std::vector<ConvergenceTable>& tables);

// CSV of node coordinates and values with per-level flags, for offline
// isosurfacing.
void export_level_sets(const ScalarField& field,
                       const std::vector<double>& levels,
                       const std::string& path);

}  // namespace hess2

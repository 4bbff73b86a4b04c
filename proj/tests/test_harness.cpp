#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hess2/harness.hpp"

using namespace hess2;

TEST_CASE("observed_order") {
  CHECK(observed_order(2.393e-4, 1.298e-4, 15, 20) ==
        doctest::Approx(2.0).epsilon(0.005));
  CHECK(observed_order(1.669e-4, 1.052e-4, 20, 25) ==
        doctest::Approx(1.98).epsilon(0.005));
  CHECK(observed_order(5e-3, 5e-3, 10, 20) == doctest::Approx(0.0));
  CHECK_THROWS_AS(observed_order(0.0, 1e-4, 10, 20), std::invalid_argument);
  CHECK_THROWS_AS(observed_order(1e-4, 1e-5, 20, 20), std::invalid_argument);
}

TEST_CASE("scheme labels") {
  CHECK(SchemeSpec{Scheme::Naive, 1}.label() == "naive");
  CHECK(SchemeSpec{Scheme::Monotone, 2}.label() == "monotone2");
}

TEST_CASE("quadratic study is exact and deterministic") {
  RunConfig rc;
  rc.problem = "ex1";
  rc.schemes = {{Scheme::Naive, 1},
                {Scheme::Monotone, 1},
                {Scheme::Monotone, 2},
                {Scheme::Monotone, 3}};
  rc.grid_sizes = {9, 11};
  rc.tol = 1e-12;
  auto tables = run_study(rc);
  auto tables2 = run_study(rc);
  REQUIRE(tables.size() == 4);
  for (std::size_t s = 0; s < tables.size(); ++s) {
    REQUIRE(tables[s].rows.size() == 2);
    for (std::size_t r = 0; r < tables[s].rows.size(); ++r) {
      const TableRow& row = tables[s].rows[r];
      CHECK(row.converged);
      CHECK(row.error <= 1e-12);
      // bit-for-bit reproducibility
      CHECK(row.error == tables2[s].rows[r].error);
      CHECK(row.iterations == tables2[s].rows[r].iterations);
    }
  }
}

TEST_CASE("order column matches recomputation from the error column") {
  RunConfig rc;
  rc.problem = "ex4";
  rc.schemes = {{Scheme::Naive, 1}};
  rc.grid_sizes = {11, 15, 19};
  rc.tol = 1e-11;
  auto tables = run_study(rc);
  REQUIRE(tables.size() == 1);
  const auto& rows = tables[0].rows;
  REQUIRE(rows.size() == 3);
  CHECK(std::isnan(rows[0].order));
  for (std::size_t r = 1; r < rows.size(); ++r) {
    CHECK(rows[r].order ==
          doctest::Approx(observed_order(rows[r - 1].error, rows[r].error,
                                         rows[r - 1].grid_size,
                                         rows[r].grid_size)));
    // a smooth solution should show roughly second order even on small grids
    CHECK(rows[r].order > 1.5);
    CHECK(rows[r].order < 2.5);
  }
}

TEST_CASE("study rejects non-increasing grid sizes") {
  RunConfig rc;
  rc.grid_sizes = {15, 15};
  CHECK_THROWS_AS(run_study(rc), std::invalid_argument);
}

TEST_CASE("csv and text output") {
  RunConfig rc;
  rc.problem = "ex1";
  rc.schemes = {{Scheme::Naive, 1}};
  rc.grid_sizes = {9, 11};
  auto tables = run_study(rc);
  auto tmp = std::filesystem::temp_directory_path() / "hess2_table_test.csv";
  write_table_csv(tables[0], tmp.string());
  std::ifstream in(tmp);
  REQUIRE(in.good());
  std::string header;
  std::getline(in, header);
  CHECK(header.find("N") != std::string::npos);
  CHECK(header.find("error_inf") != std::string::npos);
  CHECK(header.find("observed_order") != std::string::npos);
  int data_lines = 0;
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) ++data_lines;
  CHECK(data_lines == 2);
  std::filesystem::remove(tmp);

  std::string text = tables_to_text(tables);
  CHECK(text.find("ex1") != std::string::npos);
  CHECK(text.find("naive") != std::string::npos);
}

TEST_CASE("no-exact-solution problems: profiles and level sets") {
  auto ps = catalog();
  auto tmp_dir = std::filesystem::temp_directory_path();

  SUBCASE("both schemes agree along the cube diagonal") {
    const Problem& ex7 = find_problem(ps, "ex7");
    const int N = 30;
    SolverConfig c;
    c.method = Method::Newton;
    c.tol = 1e-10;
    Grid3 gn = build_grid(N, ex7.domain, 1);
    c.scheme = Scheme::Naive;
    SolveReport rn = solve(ex7, gn, c);
    REQUIRE(rn.converged);
    Grid3 gm = build_grid(N, ex7.domain, 1);
    c.scheme = Scheme::Monotone;
    c.n_theta = 1;
    SolveReport rm = solve(ex7, gm, c);
    REQUIRE(rm.converged);
    double worst = 0;
    for (int i = 0; i < N; ++i)
      worst = std::max(worst, std::abs(rn.final_field.at(i, i, i) -
                                       rm.final_field.at(i, i, i)));
    CHECK(worst < 5e-3);

    // zero boundary data: the zero level set is exactly the boundary band
    auto tmp = tmp_dir / "hess2_ex7_levels.csv";
    export_level_sets(rn.final_field, {0.0}, tmp.string());
    std::ifstream in(tmp);
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      bool flagged = line.back() == '1';
      bool interior = line.find("interior") != std::string::npos;
      CHECK(flagged == !interior);
    }
    std::filesystem::remove(tmp);
  }

  SUBCASE("two-ball domain has a nonempty deep level set") {
    const Problem& ex8 = find_problem(ps, "ex8");
    const int N = 30;
    Grid3 g = build_grid(N, ex8.domain, 1);
    SolverConfig c;
    c.method = Method::Newton;
    c.tol = 1e-10;
    SolveReport rep = solve(ex8, g, c);
    REQUIRE(rep.converged);
    double umin = 0;
    for (std::int64_t idx : g.interior_nodes())
      umin = std::min(umin, rep.final_field.values[idx]);
    CHECK(umin < -0.039);  // the deepest published level is reached
    auto tmp = tmp_dir / "hess2_ex8_levels.csv";
    export_level_sets(rep.final_field, {-0.039}, tmp.string());
    std::ifstream in(tmp);
    std::string line;
    std::getline(in, line);
    int flagged_interior = 0;
    while (std::getline(in, line)) {
      if (line.empty() || line.back() != '1') continue;
      if (line.find("interior") != std::string::npos) ++flagged_interior;
    }
    CHECK(flagged_interior > 0);
    std::filesystem::remove(tmp);
  }
}

TEST_CASE("level-set export flags sign changes") {
  Grid3 g = build_grid(9);
  ScalarField u = sample_field(g, [](double x, double, double) { return x; });
  auto tmp = std::filesystem::temp_directory_path() / "hess2_levels_test.csv";
  export_level_sets(u, {0.5}, tmp.string());
  std::ifstream in(tmp);
  REQUIRE(in.good());
  std::string header;
  std::getline(in, header);
  CHECK(header.find("level_0") != std::string::npos);
  int flagged = 0, lines = 0;
  for (std::string line; std::getline(in, line);) {
    if (line.empty()) continue;
    ++lines;
    if (line.size() >= 1 && line.back() == '1') ++flagged;
  }
  CHECK(lines == g.num_nodes());
  // the plane x=0.5 crosses one grid slab: a full 9x9 sheet of nodes flags
  CHECK(flagged >= 9 * 9);
  std::filesystem::remove(tmp);

  // constant field away from the level: nothing flagged
  ScalarField c(g, 2.0);
  export_level_sets(c, {0.5}, tmp.string());
  std::ifstream in2(tmp);
  std::getline(in2, header);
  flagged = 0;
  for (std::string line; std::getline(in2, line);)
    if (!line.empty() && line.back() == '1') ++flagged;
  CHECK(flagged == 0);
  std::filesystem::remove(tmp);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "hess2/grid.hpp"
#include "hess2/monotone_scheme.hpp"
#include "oracles.hpp"

using namespace hess2;

namespace {

double quad_ex1(double x, double y, double z) {
  return x * x - 0.5 * y * y + 2 * z * z;
}

// Triplet as a canonical set of directions modulo negation, for comparison.
std::set<std::array<int, 3>> triplet_key(const DirectionSet& ds,
                                         const std::array<int, 3>& tri) {
  std::set<std::array<int, 3>> key;
  for (int d : tri) {
    IVec3 v = ds.directions[d];
    for (int c : v) {
      if (c > 0) break;
      if (c < 0) {
        for (int& w : v) w = -w;
        break;
      }
    }
    key.insert(v);
  }
  return key;
}

std::vector<double> apply_op(const SparseOperator& op,
                             const std::vector<double>& v) {
  std::vector<double> out(static_cast<std::size_t>(op.dim), 0.0);
  for (const SparseTriplet& t : op.entries) out[t.row] += t.value * v[t.col];
  return out;
}

}  // namespace

TEST_CASE("direction counts match the primitive-vector oracle") {
  const int expected[7] = {0, 26, 98, 290, 578, 1154, 1730};
  for (int nt = 1; nt <= 6; ++nt) {
    DirectionSet ds = generate_directions(nt);
    CHECK(static_cast<int>(ds.directions.size()) == expected[nt]);
    CHECK(oracle::primitive_vector_count(nt) == expected[nt]);
  }
  CHECK_THROWS_AS(generate_directions(0), std::invalid_argument);
  CHECK_THROWS_AS(generate_directions(7), std::invalid_argument);
}

TEST_CASE("direction set invariants") {
  for (int nt : {1, 2, 3}) {
    DirectionSet ds = generate_directions(nt);
    for (const IVec3& v : ds.directions) {
      CHECK(std::max({std::abs(v[0]), std::abs(v[1]), std::abs(v[2])}) <= nt);
      CHECK((v[0] | v[1] | v[2]) != 0);
      CHECK(std::gcd(std::abs(v[0]), std::gcd(std::abs(v[1]), std::abs(v[2]))) == 1);
    }
    std::set<std::set<std::array<int, 3>>> seen;
    for (const auto& tri : ds.triplets) {
      for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b) {
          const IVec3 &va = ds.directions[tri[a]], &vb = ds.directions[tri[b]];
          CHECK(va[0] * vb[0] + va[1] * vb[1] + va[2] * vb[2] == 0);
        }
      CHECK(seen.insert(triplet_key(ds, tri)).second);  // dedup
    }
  }
}

TEST_CASE("canonical triplets for n_theta = 1") {
  DirectionSet ds = generate_directions(1);
  REQUIRE(ds.triplets.size() == 4);
  std::set<std::set<std::array<int, 3>>> got;
  for (const auto& tri : ds.triplets) got.insert(triplet_key(ds, tri));
  std::set<std::set<std::array<int, 3>>> expected = {
      {{1, 1, 0}, {1, -1, 0}, {0, 0, 1}},
      {{1, 0, 1}, {1, 0, -1}, {0, 1, 0}},
      {{1, 0, 0}, {0, 1, 1}, {0, 1, -1}},
      {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  CHECK(got == expected);
}

TEST_CASE("sigma2 / in_gamma") {
  CHECK(sigma2(1, 1, 1) == 3);
  CHECK(sigma2(2, -1, 4) == 2);
  CHECK(sigma2(1, 2, 3) == 11);
  CHECK(in_gamma(2, -1, 4));
  CHECK(!in_gamma(-1, 0, 2));
  CHECK(in_gamma(1, 1, 1));
}

TEST_CASE("sigma_bar") {
  CHECK(sigma_bar(2, -1, 4) == 2);
  CHECK(sigma_bar(-1, 0, 2) == -1);
  SUBCASE("agrees with sigma2 on closed Gamma") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> unif(-3, 3);
    int taken = 0;
    while (taken < 5000) {
      double a = unif(rng), b = unif(rng), c = unif(rng);
      if (!(a + b >= 0 && a + c >= 0 && b + c >= 0)) continue;
      ++taken;
      CHECK(std::abs(sigma_bar(a, b, c) - sigma2(a, b, c)) <= 1e-12);
    }
  }
  SUBCASE("non-decreasing under coordinate increases") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> unif(-3, 3);
    std::uniform_real_distribution<double> step(0, 1);
    for (int t = 0; t < 5000; ++t) {
      double v[3] = {unif(rng), unif(rng), unif(rng)};
      double base = sigma_bar(v[0], v[1], v[2]);
      int c = static_cast<int>(rng() % 3);
      v[c] += step(rng);
      CHECK(sigma_bar(v[0], v[1], v[2]) >= base - 1e-12);
    }
  }
}

TEST_CASE("directional_second_diff") {
  Grid3 g = build_grid(11, {}, 2);
  ScalarField u = sample_field(g, quad_ex1);
  CHECK(directional_second_diff(u, 5, 5, 5, {1, 1, 0}) ==
        doctest::Approx(0.5).epsilon(1e-10));
  CHECK(directional_second_diff(u, 5, 5, 5, {1, 0, 1}) ==
        doctest::Approx(3).epsilon(1e-10));
  ScalarField lin = sample_field(g, [](double x, double y, double z) {
    return x - 2 * y + z;
  });
  CHECK(std::abs(directional_second_diff(lin, 5, 5, 5, {2, 1, -1})) < 1e-10);
  CHECK_THROWS_AS(directional_second_diff(u, 1, 5, 5, {-2, 0, 0}),
                  std::out_of_range);
}

TEST_CASE("s2_monotone on the quadratic, n_theta = 1") {
  Grid3 g = build_grid(11, {}, 1);
  ScalarField u = sample_field(g, quad_ex1);
  DirectionSet ds = generate_directions(1);
  MonotoneEval ev = s2_monotone(u, ds);
  // expected sigma_bar per canonical triplet from D^2u = diag(2,-1,4)
  std::map<std::set<std::array<int, 3>>, double> expected = {
      {{{1, 1, 0}, {1, -1, 0}, {0, 0, 1}}, 4.25},
      {{{1, 0, 1}, {1, 0, -1}, {0, 1, 0}}, 3.0},
      {{{1, 0, 0}, {0, 1, 1}, {0, 1, -1}}, 8.25},
      {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, 2.0}};
  auto axis_key = std::set<std::array<int, 3>>{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  std::int64_t center = g.index(5, 5, 5);
  for (int t = 0; t < static_cast<int>(ds.triplets.size()); ++t) {
    double d[3];
    for (int q = 0; q < 3; ++q)
      d[q] = directional_second_diff(u, 5, 5, 5, ds.directions[ds.triplets[t][q]]);
    CHECK(sigma_bar(d[0], d[1], d[2]) ==
          doctest::Approx(expected.at(triplet_key(ds, ds.triplets[t]))).epsilon(1e-9));
  }
  for (std::int64_t idx : g.interior_nodes())
    CHECK(ev.values.values[idx] == doctest::Approx(2).epsilon(1e-9));
  const ActiveTriplet& act = ev.active[g.interior_ordinal(center)];
  CHECK(triplet_key(ds, ds.triplets[act.triplet]) == axis_key);
  CHECK(act.diffs[0] == doctest::Approx(-1).epsilon(1e-9));
  CHECK(act.diffs[2] == doctest::Approx(4).epsilon(1e-9));
  CHECK(!act.negative_branch);
}

TEST_CASE("s2_monotone equals 3 for |x|^2/2 and min property holds") {
  Grid3 g = build_grid(9, {}, 2);
  ScalarField u = sample_field(g, [](double x, double y, double z) {
    return 0.5 * (x * x + y * y + z * z);
  });
  DirectionSet ds = generate_directions(2);
  MonotoneEval ev = s2_monotone(u, ds);
  for (std::int64_t idx : g.interior_nodes()) {
    CHECK(ev.values.values[idx] == doctest::Approx(3).epsilon(1e-9));
    auto [i, j, k] = g.ijk(idx);
    for (const auto& tri : ds.triplets) {
      double d[3];
      for (int q = 0; q < 3; ++q)
        d[q] = directional_second_diff(u, i, j, k, ds.directions[tri[q]]);
      CHECK(sigma_bar(d[0], d[1], d[2]) >= ev.values.values[idx] - 1e-12);
    }
  }
}

TEST_CASE("directional resolution error shrinks with wider stencils") {
  // smooth non-quadratic with known S2 value
  auto u3 = [](double x, double y, double z) {
    return std::exp(2 * x * x - y * y + 4 * z * z);
  };
  auto f3 = [](double x, double y, double z) {
    return 8 * (1 + 12 * x * x + 6 * y * y + 16 * z * z) *
           std::exp(2 * (2 * x * x - y * y + 4 * z * z));
  };
  double errs[3];
  for (int nt : {1, 2, 3}) {
    Grid3 g = build_grid(19, {}, nt);
    ScalarField u = sample_field(g, u3);
    ScalarField f = sample_field(g, f3);
    MonotoneEval ev = s2_monotone(u, generate_directions(nt));
    errs[nt - 1] = max_norm_error(ev.values, f);
  }
  CHECK(errs[1] < errs[0]);
  CHECK(errs[2] < errs[1]);
}

TEST_CASE("jacobian_monotone") {
  Grid3 g = build_grid(9, {}, 1);
  DirectionSet ds = generate_directions(1);
  // locate the axis triplet
  int axis_t = -1;
  for (int t = 0; t < static_cast<int>(ds.triplets.size()); ++t) {
    auto key = triplet_key(ds, ds.triplets[t]);
    if (key == std::set<std::array<int, 3>>{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}})
      axis_t = t;
  }
  REQUIRE(axis_t >= 0);

  SUBCASE("identity Hessian with axis triplet active") {
    ScalarField u = sample_field(g, [](double x, double y, double z) {
      return 0.5 * (x * x + y * y + z * z);
    });
    std::vector<ActiveTriplet> active(g.num_interior());
    for (auto& a : active) {
      a.triplet = axis_t;
      a.dirs = ds.triplets[axis_t];
      a.diffs = {1.0, 1.0, 1.0};
      a.negative_branch = false;
    }
    SparseOperator J = jacobian_monotone(u, ds, active);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> unif(-1, 1);
    ScalarField v(g, 0.0);
    for (std::int64_t idx : g.interior_nodes()) v.values[idx] = unif(rng);
    std::vector<double> vi;
    for (std::int64_t idx : g.interior_nodes()) vi.push_back(v.values[idx]);
    std::vector<double> Jv = apply_op(J, vi);
    const double ih2 = 1.0 / (g.h() * g.h());
    for (std::int64_t idx : g.interior_nodes()) {
      auto [i, j, k] = g.ijk(idx);
      double lap = (v.at(i + 1, j, k) + v.at(i - 1, j, k) + v.at(i, j + 1, k) +
                    v.at(i, j - 1, k) + v.at(i, j, k + 1) + v.at(i, j, k - 1) -
                    6 * v.at(i, j, k)) * ih2;
      CHECK(Jv[g.interior_ordinal(idx)] == doctest::Approx(2 * lap).epsilon(1e-9));
    }
  }

  SUBCASE("negative branch row is -2 d1 times the first direction stencil") {
    ScalarField u(g, 0.0);
    std::vector<ActiveTriplet> active(g.num_interior());
    for (auto& a : active) {
      a.triplet = axis_t;
      a.dirs = ds.triplets[axis_t];
      a.diffs = {-3.0, 1.0, 5.0};
      a.negative_branch = true;
    }
    SparseOperator J = jacobian_monotone(u, ds, active);
    const double ih2 = 1.0 / (g.h() * g.h());
    std::int64_t center = g.index(4, 4, 4);
    std::int64_t row = g.interior_ordinal(center);
    const IVec3& nu = ds.directions[ds.triplets[axis_t][0]];
    int nnz = 0;
    for (const SparseTriplet& t : J.entries) {
      if (t.row != row) continue;
      ++nnz;
      std::int64_t col_idx = g.interior_nodes()[t.col];
      if (col_idx == center) {
        CHECK(t.value == doctest::Approx(6 * -2 * ih2).epsilon(1e-12));
      } else {
        auto [i, j, k] = g.ijk(col_idx);
        bool is_nbr = (i == 4 + nu[0] && j == 4 + nu[1] && k == 4 + nu[2]) ||
                      (i == 4 - nu[0] && j == 4 - nu[1] && k == 4 - nu[2]);
        CHECK(is_nbr);
        CHECK(t.value == doctest::Approx(6 * ih2).epsilon(1e-12));
      }
    }
    CHECK(nnz == 3);
  }

  SUBCASE("finite-difference check away from ties") {
    ScalarField u = sample_field(g, [](double x, double y, double z) {
      return std::exp((x - 0.5) * (x - 0.5) / 2 + (y - 0.5) * (y - 0.5) / 2 +
                      (z - 0.5) * (z - 0.5) / 2) + 0.3 * x * x - 0.1 * y * y;
    });
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> unif(-1, 1);
    ScalarField v(g, 0.0);
    for (std::int64_t idx : g.interior_nodes()) v.values[idx] = unif(rng);
    MonotoneEval ev = s2_monotone(u, ds);
    SparseOperator J = jacobian_monotone(u, ds, ev.active);
    std::vector<double> vi;
    for (std::int64_t idx : g.interior_nodes()) vi.push_back(v.values[idx]);
    std::vector<double> Jv = apply_op(J, vi);
    const double eps = 1e-7;
    ScalarField up = u;
    for (std::int64_t idx : g.interior_nodes())
      up.values[idx] += eps * v.values[idx];
    MonotoneEval evp = s2_monotone(up, ds);
    for (std::int64_t idx : g.interior_nodes()) {
      std::int64_t ord = g.interior_ordinal(idx);
      if (evp.active[ord].triplet != ev.active[ord].triplet) continue;  // tie
      double fd = (evp.values.values[idx] - ev.values.values[idx]) / eps;
      CHECK(std::abs(fd - Jv[ord]) < 1e-4 * std::max(1.0, std::abs(Jv[ord])));
    }
  }
}

TEST_CASE("degenerate ellipticity under random perturbations") {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> unif(-1, 1);
  std::uniform_real_distribution<double> delta(0.0, 0.5);
  for (int nt : {1, 2}) {
    Grid3 g = build_grid(9, {}, nt);
    DirectionSet ds = generate_directions(nt);
    for (int trial = 0; trial < 25; ++trial) {
      ScalarField u(g, 0.0);
      for (auto& v : u.values) v = unif(rng);
      MonotoneEval base = s2_monotone(u, ds);
      // bump one random node up
      std::int64_t bump = static_cast<std::int64_t>(rng() % g.num_nodes());
      double d = delta(rng) + 1e-3;
      ScalarField up = u;
      up.values[bump] += d;
      MonotoneEval after = s2_monotone(up, ds);
      auto [bi, bj, bk] = g.ijk(bump);
      for (std::int64_t idx : g.interior_nodes()) {
        double before_v = base.values.values[idx];
        double after_v = after.values.values[idx];
        if (idx == bump) {
          CHECK(after_v <= before_v + 1e-12);  // center increase
        } else {
          auto [i, j, k] = g.ijk(idx);
          bool neighbor = std::max({std::abs(i - bi), std::abs(j - bj),
                                    std::abs(k - bk)}) <= nt;
          if (neighbor)
            CHECK(after_v >= before_v - 1e-12);
          else
            CHECK(after_v == before_v);
        }
      }
    }
  }
}

TEST_CASE("dtheta estimate is positive and shrinks with wider stencils") {
  double d1 = estimate_dtheta(generate_directions(1), 50, 123);
  double d3 = estimate_dtheta(generate_directions(3), 50, 123);
  CHECK(d1 > 0);
  CHECK(d3 < d1);
}

// The computational examples: exact solution (when known), right-hand side,
// boundary data, and domain.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hess2/grid.hpp"
#include "hess2/naive_scheme.hpp"  // HessianSample

namespace hess2 {

using HessianFn = std::function<HessianSample(double, double, double)>;
using PointPredicate = std::function<bool(double, double, double)>;

struct Problem {
  std::string name;
  SpatialFn u_exact;      // null when no exact solution is known
  SpatialFn f;
  SpatialFn g;            // defaults to u_exact when present
  HessianFn hess_exact;   // analytic Hessian of u_exact, null when unknown
  PointPredicate singular;  // points excluded from validation, may be null
  DomainSpec domain;
  std::map<std::string, double> params;

  bool has_exact() const { return static_cast<bool>(u_exact); }
};

// The eight examples: quadratic, smooth convex radial, smooth non-convex
// exponential, log radial, cone-like C^1, blow-up at a corner, f=1 on the
// box, and f=1 on a two-ball domain. x0 defaults to the cube center.
std::vector<Problem> catalog(double x0x = 0.5, double x0y = 0.5,
                             double x0z = 0.5);

const Problem& find_problem(const std::vector<Problem>& problems,
                            const std::string& name);

struct ValidationReport {
  std::string problem;
  int samples = 0;
  double max_residual = 0.0;
  bool pass = false;
  double worst_x = 0, worst_y = 0, worst_z = 0;
};

// Checks |S2[u_exact] - f| <= 1e-8 * max(1, |f|) at random interior points
// (singular set excluded) using the analytic Hessian.
ValidationReport validate_problem(const Problem& p, int samples,
                                  std::uint64_t seed = 0);

}  // namespace hess2

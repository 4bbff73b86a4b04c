// Monotone wide-stencil discretization of the 2-Hessian operator: lattice
// direction sets, the non-decreasing extension of sigma_2, pointwise min over
// orthogonal triplets, and the active-triplet (Danskin) Jacobian.
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "hess2/grid.hpp"
#include "hess2/naive_scheme.hpp"  // SparseOperator

namespace hess2 {

using IVec3 = std::array<int, 3>;

// Primitive lattice directions with max-norm <= n_theta, plus all pairwise
// orthogonal triplets of them deduplicated up to permutation and negation.
struct DirectionSet {
  int n_theta = 0;
  std::vector<IVec3> directions;
  std::vector<std::array<int, 3>> triplets;  // indices into directions
};

DirectionSet generate_directions(int n_theta);

void export_directions_csv(const DirectionSet& dirs, const std::string& path);

// Second elementary symmetric polynomial.
double sigma2(double l1, double l2, double l3);

// Non-decreasing extension of sigma2: sort ascending to (x,y,z), then
// x*max(y,|x|) + x*max(z,|x|) + max(y,|x|)*max(z,|x|).
double sigma_bar(double l1, double l2, double l3);

// All pairwise sums positive.
bool in_gamma(double l1, double l2, double l3);

// (u(x+h nu) + u(x-h nu) - 2u(x)) / (|nu|^2 h^2).
double directional_second_diff(const ScalarField& u, int i, int j, int k,
                               const IVec3& nu);

// Per interior node: the minimizing triplet, its three direction indices and
// second differences sorted ascending, and the sigma_bar branch taken.
struct ActiveTriplet {
  int triplet;
  std::array<int, 3> dirs;     // direction indices, sorted by diff
  std::array<double, 3> diffs; // ascending
  bool negative_branch;        // diffs[0] + diffs[1] < 0
};

struct MonotoneEval {
  ScalarField values;                 // min sigma_bar at interior, 0 elsewhere
  std::vector<ActiveTriplet> active;  // indexed by interior ordinal
};

// Requires boundary applied with band_width >= n_theta. Ties in the min are
// broken by lowest stored triplet index.
MonotoneEval s2_monotone(const ScalarField& u, const DirectionSet& dirs);

// Danskin Jacobian from the active triplet of each node.
SparseOperator jacobian_monotone(const ScalarField& u, const DirectionSet& dirs,
                                 const std::vector<ActiveTriplet>& active);

// Monte Carlo estimate of the directional resolution: max over random
// orthonormal frames of the best angular match in the triplet set.
// Diagnostic only.
double estimate_dtheta(const DirectionSet& dirs, int samples,
                       std::uint64_t seed);

}  // namespace hess2

// Naive (second-order accurate, non-monotone) discretization of the
// 2-Hessian operator from standard centered differences.
#pragma once

#include <cstdint>
#include <vector>

#include "hess2/grid.hpp"

namespace hess2 {

// Six second differences at one node (symmetric, value/length^2).
struct HessianSample {
  double dxx, dyy, dzz, dxy, dxz, dyz;
};

// The nine pair averages at a node: a1..a3 axis pairs, a4..a9 diagonal pairs.
struct NeighborAverages {
  double a[9];
};

// Entry of a sparse linear operator on interior unknowns.
struct SparseTriplet {
  std::int64_t row, col;
  double value;
};

struct SparseOperator {
  std::int64_t dim = 0;
  std::vector<SparseTriplet> entries;
};

// Centered second differences at an interior node; cross terms use the four
// diagonal neighbors over 4h^2.
HessianSample hessian_sample(const ScalarField& u, int i, int j, int k);

// Sum of the principal minors of the sampled Hessian.
double c_of_hessian(const HessianSample& hs);

NeighborAverages neighbor_averages(const ScalarField& u, int i, int j, int k);

// c(D^2h u) at every interior node; zero elsewhere.
ScalarField s2_naive(const ScalarField& u);

// One simultaneous (Jacobi) sweep of the per-node quadratic solve, taking the
// smaller root. A negative discriminant argument is clamped to zero;
// *clamped_nodes (optional) counts how often that happened.
ScalarField jacobi_update(const ScalarField& u, const ScalarField& f,
                          std::int64_t* clamped_nodes = nullptr);

// Linearization of s2_naive about u on interior unknowns, 19-point rows.
// Band values are treated as constants (Dirichlet elimination).
SparseOperator jacobian_naive(const ScalarField& u);

}  // namespace hess2

#include "hess2/naive_scheme.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace hess2 {

HessianSample hessian_sample(const ScalarField& u, int i, int j, int k) {
  const Grid3& g = *u.grid;
  if (!g.is_interior(i, j, k))
    throw std::invalid_argument("hessian_sample: node not interior");
  const double h2 = g.h() * g.h();
  auto v = [&](int a, int b, int c) { return u.at(a, b, c); };
  const double c0 = v(i, j, k);
  HessianSample hs;
  hs.dxx = (v(i + 1, j, k) - 2 * c0 + v(i - 1, j, k)) / h2;
  hs.dyy = (v(i, j + 1, k) - 2 * c0 + v(i, j - 1, k)) / h2;
  hs.dzz = (v(i, j, k + 1) - 2 * c0 + v(i, j, k - 1)) / h2;
  hs.dxy = (v(i + 1, j + 1, k) + v(i - 1, j - 1, k) - v(i - 1, j + 1, k) -
            v(i + 1, j - 1, k)) / (4 * h2);
  hs.dxz = (v(i + 1, j, k + 1) + v(i - 1, j, k - 1) - v(i - 1, j, k + 1) -
            v(i + 1, j, k - 1)) / (4 * h2);
  hs.dyz = (v(i, j + 1, k + 1) + v(i, j - 1, k - 1) - v(i, j - 1, k + 1) -
            v(i, j + 1, k - 1)) / (4 * h2);
  return hs;
}

double c_of_hessian(const HessianSample& hs) {
  return hs.dxx * hs.dyy + hs.dxx * hs.dzz + hs.dyy * hs.dzz -
         hs.dxy * hs.dxy - hs.dxz * hs.dxz - hs.dyz * hs.dyz;
}

NeighborAverages neighbor_averages(const ScalarField& u, int i, int j, int k) {
  auto v = [&](int a, int b, int c) { return u.at(a, b, c); };
  NeighborAverages na;
  na.a[0] = 0.5 * (v(i + 1, j, k) + v(i - 1, j, k));
  na.a[1] = 0.5 * (v(i, j + 1, k) + v(i, j - 1, k));
  na.a[2] = 0.5 * (v(i, j, k + 1) + v(i, j, k - 1));
  na.a[3] = 0.5 * (v(i + 1, j + 1, k) + v(i - 1, j - 1, k));
  na.a[4] = 0.5 * (v(i - 1, j + 1, k) + v(i + 1, j - 1, k));
  na.a[5] = 0.5 * (v(i + 1, j, k + 1) + v(i - 1, j, k - 1));
  na.a[6] = 0.5 * (v(i - 1, j, k + 1) + v(i + 1, j, k - 1));
  na.a[7] = 0.5 * (v(i, j + 1, k + 1) + v(i, j - 1, k - 1));
  na.a[8] = 0.5 * (v(i, j + 1, k - 1) + v(i, j - 1, k + 1));
  return na;
}

ScalarField s2_naive(const ScalarField& u) {
  const Grid3& g = *u.grid;
  ScalarField out(g, 0.0);
  for (std::int64_t idx : g.interior_nodes()) {
    auto [i, j, k] = g.ijk(idx);
    out.values[idx] = c_of_hessian(hessian_sample(u, i, j, k));
  }
  return out;
}

ScalarField jacobi_update(const ScalarField& u, const ScalarField& f,
                          std::int64_t* clamped_nodes) {
  const Grid3& g = *u.grid;
  const double h4 = std::pow(g.h(), 4);
  ScalarField out = u;
  std::int64_t clamped = 0;
  for (std::int64_t idx : g.interior_nodes()) {
    auto [i, j, k] = g.ijk(idx);
    NeighborAverages na = neighbor_averages(u, i, j, k);
    const double* a = na.a;
    double axes = 0.0;
    for (int p = 0; p < 3; ++p)
      for (int q = p + 1; q < 3; ++q) axes += (a[p] - a[q]) * (a[p] - a[q]);
    double diags = (a[3] - a[4]) * (a[3] - a[4]) +
                   (a[5] - a[6]) * (a[5] - a[6]) +
                   (a[7] - a[8]) * (a[7] - a[8]);
    double disc = 8 * axes + 3 * diags + 12 * f.values[idx] * h4;
    if (disc < 0.0) {
      disc = 0.0;
      ++clamped;
    }
    out.values[idx] = (a[0] + a[1] + a[2]) / 3.0 - std::sqrt(disc) / 12.0;
  }
  if (clamped_nodes) *clamped_nodes = clamped;
  return out;
}

namespace {

// Accumulates stencil contributions into the row of one interior node,
// dropping non-interior columns (Dirichlet elimination).
struct RowAccum {
  const Grid3& g;
  std::int64_t row;
  std::unordered_map<std::int64_t, double>& buf;

  void add(int i, int j, int k, double w) {
    if (w == 0.0) return;
    std::int64_t col = g.interior_ordinal(g.index(i, j, k));
    if (col >= 0) buf[col] += w;
  }
};

}  // namespace

SparseOperator jacobian_naive(const ScalarField& u) {
  const Grid3& g = *u.grid;
  const double h2 = g.h() * g.h();
  SparseOperator op;
  op.dim = g.num_interior();
  op.entries.reserve(static_cast<std::size_t>(op.dim) * 19);
  std::unordered_map<std::int64_t, double> buf;
  for (std::int64_t idx : g.interior_nodes()) {
    auto [i, j, k] = g.ijk(idx);
    HessianSample hs = hessian_sample(u, i, j, k);
    buf.clear();
    RowAccum row{g, g.interior_ordinal(idx), buf};
    // (D_xx u) D_yy + ... over ordered pairs collapses to these coefficients.
    const double cxx = (hs.dyy + hs.dzz) / h2;
    const double cyy = (hs.dxx + hs.dzz) / h2;
    const double czz = (hs.dxx + hs.dyy) / h2;
    row.add(i + 1, j, k, cxx);
    row.add(i - 1, j, k, cxx);
    row.add(i, j + 1, k, cyy);
    row.add(i, j - 1, k, cyy);
    row.add(i, j, k + 1, czz);
    row.add(i, j, k - 1, czz);
    row.add(i, j, k, -2 * (cxx + cyy + czz));
    // -2 (D_ab u) D_ab for each cross pair.
    const double cxy = -2 * hs.dxy / (4 * h2);
    row.add(i + 1, j + 1, k, cxy);
    row.add(i - 1, j - 1, k, cxy);
    row.add(i + 1, j - 1, k, -cxy);
    row.add(i - 1, j + 1, k, -cxy);
    const double cxz = -2 * hs.dxz / (4 * h2);
    row.add(i + 1, j, k + 1, cxz);
    row.add(i - 1, j, k - 1, cxz);
    row.add(i + 1, j, k - 1, -cxz);
    row.add(i - 1, j, k + 1, -cxz);
    const double cyz = -2 * hs.dyz / (4 * h2);
    row.add(i, j + 1, k + 1, cyz);
    row.add(i, j - 1, k - 1, cyz);
    row.add(i, j + 1, k - 1, -cyz);
    row.add(i, j - 1, k + 1, -cyz);
    for (auto& [col, w] : buf) op.entries.push_back({row.row, col, w});
  }
  return op;
}

}  // namespace hess2

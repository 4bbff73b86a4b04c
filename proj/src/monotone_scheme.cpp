#include "hess2/monotone_scheme.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <stdexcept>
#include <unordered_map>

namespace hess2 {

namespace {

int gcd3(int a, int b, int c) {
  return std::gcd(std::abs(a), std::gcd(std::abs(b), std::abs(c)));
}

int dot(const IVec3& a, const IVec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

// Representative of {nu, -nu}: first nonzero component positive.
bool is_canonical(const IVec3& v) {
  for (int c : v) {
    if (c > 0) return true;
    if (c < 0) return false;
  }
  return false;
}

}  // namespace

DirectionSet generate_directions(int n_theta) {
  if (n_theta < 1 || n_theta > 6)
    throw std::invalid_argument("generate_directions: n_theta must be in [1,6]");
  DirectionSet ds;
  ds.n_theta = n_theta;
  const int m = n_theta;
  for (int i = -m; i <= m; ++i)
    for (int j = -m; j <= m; ++j)
      for (int k = -m; k <= m; ++k) {
        if (i == 0 && j == 0 && k == 0) continue;
        if (gcd3(i, j, k) == 1) ds.directions.push_back({i, j, k});
      }

  // Orthogonal triplets from one representative per {nu,-nu} pair; index
  // order a < b < c removes permutations.
  std::vector<int> canon;
  for (int d = 0; d < static_cast<int>(ds.directions.size()); ++d)
    if (is_canonical(ds.directions[d])) canon.push_back(d);
  for (std::size_t ia = 0; ia < canon.size(); ++ia)
    for (std::size_t ib = ia + 1; ib < canon.size(); ++ib) {
      if (dot(ds.directions[canon[ia]], ds.directions[canon[ib]]) != 0) continue;
      for (std::size_t ic = ib + 1; ic < canon.size(); ++ic) {
        const IVec3& c = ds.directions[canon[ic]];
        if (dot(ds.directions[canon[ia]], c) == 0 &&
            dot(ds.directions[canon[ib]], c) == 0)
          ds.triplets.push_back({canon[ia], canon[ib], canon[ic]});
      }
    }
  return ds;
}

void export_directions_csv(const DirectionSet& dirs, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("export_directions_csv: cannot open " + path);
  out << "kind,index,a,b,c\n";
  for (std::size_t d = 0; d < dirs.directions.size(); ++d)
    out << "direction," << d << ',' << dirs.directions[d][0] << ','
        << dirs.directions[d][1] << ',' << dirs.directions[d][2] << "\n";
  for (std::size_t t = 0; t < dirs.triplets.size(); ++t)
    out << "triplet," << t << ',' << dirs.triplets[t][0] << ','
        << dirs.triplets[t][1] << ',' << dirs.triplets[t][2] << "\n";
}

double sigma2(double l1, double l2, double l3) {
  return l1 * l2 + l1 * l3 + l2 * l3;
}

double sigma_bar(double l1, double l2, double l3) {
  double x = l1, y = l2, z = l3;
  if (x > y) std::swap(x, y);
  if (y > z) std::swap(y, z);
  if (x > y) std::swap(x, y);
  const double ax = std::abs(x);
  const double my = std::max(y, ax);
  const double mz = std::max(z, ax);
  return x * my + x * mz + my * mz;
}

bool in_gamma(double l1, double l2, double l3) {
  return l1 + l2 > 0 && l1 + l3 > 0 && l2 + l3 > 0;
}

double directional_second_diff(const ScalarField& u, int i, int j, int k,
                               const IVec3& nu) {
  const Grid3& g = *u.grid;
  const int n = g.n();
  const int ip = i + nu[0], jp = j + nu[1], kp = k + nu[2];
  const int im = i - nu[0], jm = j - nu[1], km = k - nu[2];
  if (std::min({ip, jp, kp, im, jm, km}) < 0 ||
      std::max({ip, jp, kp, im, jm, km}) > n - 1)
    throw std::out_of_range("directional_second_diff: stencil exits lattice");
  const double nn = nu[0] * nu[0] + nu[1] * nu[1] + nu[2] * nu[2];
  return (u.at(ip, jp, kp) + u.at(im, jm, km) - 2 * u.at(i, j, k)) /
         (nn * g.h() * g.h());
}

MonotoneEval s2_monotone(const ScalarField& u, const DirectionSet& dirs) {
  const Grid3& g = *u.grid;
  if (g.band_width() < dirs.n_theta)
    throw std::invalid_argument("s2_monotone: band_width < n_theta");
  MonotoneEval ev{ScalarField(g, 0.0), {}};
  ev.active.resize(static_cast<std::size_t>(g.num_interior()));
  const auto& nodes = g.interior_nodes();
#pragma omp parallel for schedule(static)
  for (std::int64_t ord = 0; ord < static_cast<std::int64_t>(nodes.size());
       ++ord) {
    auto [i, j, k] = g.ijk(nodes[ord]);
    double best = 0.0;
    ActiveTriplet act{};
    bool first = true;
    for (int t = 0; t < static_cast<int>(dirs.triplets.size()); ++t) {
      const auto& tri = dirs.triplets[t];
      double d[3];
      for (int q = 0; q < 3; ++q)
        d[q] = directional_second_diff(u, i, j, k, dirs.directions[tri[q]]);
      double val = sigma_bar(d[0], d[1], d[2]);
      if (first || val < best) {
        first = false;
        best = val;
        int ordq[3] = {0, 1, 2};
        std::sort(ordq, ordq + 3, [&](int a, int b) {
          return d[a] < d[b] || (d[a] == d[b] && a < b);
        });
        act.triplet = t;
        for (int q = 0; q < 3; ++q) {
          act.dirs[q] = tri[ordq[q]];
          act.diffs[q] = d[ordq[q]];
        }
        act.negative_branch = act.diffs[0] + act.diffs[1] < 0;
      }
    }
    ev.values.values[nodes[ord]] = best;
    ev.active[ord] = act;
  }
  return ev;
}

namespace {

void add_directional_stencil(const Grid3& g,
                             std::unordered_map<std::int64_t, double>& buf,
                             int i, int j, int k, const IVec3& nu,
                             double coeff) {
  if (coeff == 0.0) return;
  const double nn = nu[0] * nu[0] + nu[1] * nu[1] + nu[2] * nu[2];
  const double w = coeff / (nn * g.h() * g.h());
  auto add = [&](int a, int b, int c, double v) {
    std::int64_t col = g.interior_ordinal(g.index(a, b, c));
    if (col >= 0) buf[col] += v;
  };
  add(i + nu[0], j + nu[1], k + nu[2], w);
  add(i - nu[0], j - nu[1], k - nu[2], w);
  add(i, j, k, -2 * w);
}

}  // namespace

SparseOperator jacobian_monotone(const ScalarField& u, const DirectionSet& dirs,
                                 const std::vector<ActiveTriplet>& active) {
  const Grid3& g = *u.grid;
  if (static_cast<std::int64_t>(active.size()) != g.num_interior())
    throw std::invalid_argument("jacobian_monotone: active size mismatch");
  SparseOperator op;
  op.dim = g.num_interior();
  std::unordered_map<std::int64_t, double> buf;
  const auto& nodes = g.interior_nodes();
  for (std::int64_t ord = 0; ord < op.dim; ++ord) {
    auto [i, j, k] = g.ijk(nodes[ord]);
    const ActiveTriplet& a = active[ord];
    buf.clear();
    if (a.negative_branch) {
      add_directional_stencil(g, buf, i, j, k, dirs.directions[a.dirs[0]],
                              -2 * a.diffs[0]);
    } else {
      for (int q = 0; q < 3; ++q) {
        double coeff = a.diffs[(q + 1) % 3] + a.diffs[(q + 2) % 3];
        add_directional_stencil(g, buf, i, j, k, dirs.directions[a.dirs[q]],
                                coeff);
      }
    }
    for (auto& [col, w] : buf) op.entries.push_back({ord, col, w});
  }
  return op;
}

double estimate_dtheta(const DirectionSet& dirs, int samples,
                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<std::array<double, 3>> unit(dirs.directions.size());
  for (std::size_t d = 0; d < dirs.directions.size(); ++d) {
    const IVec3& v = dirs.directions[d];
    double nrm = std::sqrt(static_cast<double>(dot(v, v)));
    unit[d] = {v[0] / nrm, v[1] / nrm, v[2] / nrm};
  }
  const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                           {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    // Random orthonormal frame via Gram-Schmidt of Gaussian vectors.
    double w[3][3];
    for (auto& row : w)
      for (double& c : row) c = gauss(rng);
    for (int r = 0; r < 3; ++r) {
      for (int p = 0; p < r; ++p) {
        double d = w[r][0] * w[p][0] + w[r][1] * w[p][1] + w[r][2] * w[p][2];
        for (int c = 0; c < 3; ++c) w[r][c] -= d * w[p][c];
      }
      double nrm = std::sqrt(w[r][0] * w[r][0] + w[r][1] * w[r][1] +
                             w[r][2] * w[r][2]);
      for (int c = 0; c < 3; ++c) w[r][c] /= nrm;
    }
    double best_match = M_PI;
    for (const auto& tri : dirs.triplets) {
      for (const auto& p : perms) {
        double worst_angle = 0.0;
        for (int q = 0; q < 3; ++q) {
          const auto& nu = unit[tri[p[q]]];
          double d = std::abs(w[q][0] * nu[0] + w[q][1] * nu[1] +
                              w[q][2] * nu[2]);
          worst_angle = std::max(worst_angle, std::acos(std::min(d, 1.0)));
        }
        best_match = std::min(best_match, worst_angle);
      }
    }
    worst = std::max(worst, best_match);
  }
  return worst;
}

}  // namespace hess2

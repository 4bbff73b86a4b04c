#include "hess2/grid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace hess2 {

bool DomainSpec::contains(double x, double y, double z) const {
  if (is_box()) return true;
  for (const Ball& b : balls) {
    double dx = x - b.cx, dy = y - b.cy, dz = z - b.cz;
    if (dx * dx + dy * dy + dz * dz < b.r * b.r) return true;
  }
  return false;
}

Grid3::Grid3(int n, DomainSpec domain, int band_width)
    : n_(n), h_(1.0 / (n - 1)), band_width_(band_width),
      domain_(std::move(domain)) {
  if (n < 3) throw std::invalid_argument("Grid3: n must be >= 3");
  if (band_width < 1) throw std::invalid_argument("Grid3: band_width must be >= 1");
  if (2 * band_width >= n)
    throw std::invalid_argument("Grid3: band_width too large, no interior nodes");
  for (const Ball& b : domain_.balls) {
    if (b.r <= 0.0) throw std::invalid_argument("Grid3: ball radius must be positive");
    for (double c : {b.cx, b.cy, b.cz})
      if (c - b.r < 0.0 || c + b.r > 1.0)
        throw std::invalid_argument("Grid3: ball must lie inside the unit cube");
  }

  classes_.assign(static_cast<std::size_t>(num_nodes()), NodeClass::Exterior);
  const int w = band_width_;

  // Interior pass.
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k) {
        bool on_lattice = std::min({i, j, k}) >= w && std::max({i, j, k}) <= n_ - 1 - w;
        if (on_lattice && domain_.contains(coord(i), coord(j), coord(k)))
          classes_[index(i, j, k)] = NodeClass::Interior;
      }

  // Band pass: non-interior nodes with an interior node within Chebyshev
  // distance w. For the full box this is all remaining nodes.
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k) {
        auto idx = index(i, j, k);
        if (classes_[idx] == NodeClass::Interior) continue;
        bool near_interior = false;
        for (int di = -w; di <= w && !near_interior; ++di)
          for (int dj = -w; dj <= w && !near_interior; ++dj)
            for (int dk = -w; dk <= w && !near_interior; ++dk) {
              int ii = i + di, jj = j + dj, kk = k + dk;
              if (ii < 0 || jj < 0 || kk < 0 || ii >= n_ || jj >= n_ || kk >= n_)
                continue;
              if (classes_[index(ii, jj, kk)] == NodeClass::Interior)
                near_interior = true;
            }
        if (near_interior) classes_[idx] = NodeClass::Band;
      }

  interior_ordinal_.assign(classes_.size(), -1);
  for (std::int64_t idx = 0; idx < num_nodes(); ++idx) {
    switch (classes_[idx]) {
      case NodeClass::Interior:
        interior_ordinal_[idx] = static_cast<std::int64_t>(interior_nodes_.size());
        interior_nodes_.push_back(idx);
        break;
      case NodeClass::Band:
        ++num_band_;
        break;
      case NodeClass::Exterior:
        ++num_exterior_;
        break;
    }
  }
  if (interior_nodes_.empty())
    throw std::invalid_argument("Grid3: domain has no interior nodes");
}

Grid3 build_grid(int n, DomainSpec domain, int band_width) {
  return Grid3(n, std::move(domain), band_width);
}

ScalarField sample_field(const Grid3& grid, const SpatialFn& fn) {
  ScalarField f(grid);
  const int n = grid.n();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        f.at(i, j, k) = fn(grid.coord(i), grid.coord(j), grid.coord(k));
  return f;
}

void apply_boundary(ScalarField& field, const SpatialFn& g) {
  const Grid3& grid = *field.grid;
  const int n = grid.n();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (grid.node_class(i, j, k) != NodeClass::Interior)
          field.at(i, j, k) = g(grid.coord(i), grid.coord(j), grid.coord(k));
}

double max_norm_error(const ScalarField& a, const ScalarField& b) {
  if (a.grid != b.grid)
    throw std::invalid_argument("max_norm_error: fields on different grids");
  double m = 0.0;
  for (std::int64_t idx : a.grid->interior_nodes())
    m = std::max(m, std::abs(a.values[idx] - b.values[idx]));
  return m;
}

double max_norm_interior(const ScalarField& a) {
  double m = 0.0;
  for (std::int64_t idx : a.grid->interior_nodes())
    m = std::max(m, std::abs(a.values[idx]));
  return m;
}

void export_field_csv(const ScalarField& field, const std::string& path,
                      const std::vector<double>& levels) {
  const Grid3& grid = *field.grid;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("export_field_csv: cannot open " + path);
  out << "i,j,k,x,y,z,class,value";
  for (std::size_t l = 0; l < levels.size(); ++l) out << ",level_" << l;
  out << "\n";
  out.precision(17);
  const int n = grid.n();
  auto cls_name = [](NodeClass c) {
    switch (c) {
      case NodeClass::Interior: return "interior";
      case NodeClass::Band: return "band";
      default: return "exterior";
    }
  };
  const double tol = 1e-12;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double v = field.at(i, j, k);
        out << i << ',' << j << ',' << k << ',' << grid.coord(i) << ','
            << grid.coord(j) << ',' << grid.coord(k) << ','
            << cls_name(grid.node_class(i, j, k)) << ',' << v;
        for (double c : levels) {
          bool flagged = std::abs(v - c) <= tol;
          // straddle check against +axis neighbors
          const int nb[3][3] = {{i + 1, j, k}, {i, j + 1, k}, {i, j, k + 1}};
          for (auto& q : nb) {
            if (flagged || q[0] >= n || q[1] >= n || q[2] >= n) continue;
            double w = field.at(q[0], q[1], q[2]);
            if ((v - c) * (w - c) < 0.0) flagged = true;
          }
          out << ',' << (flagged ? 1 : 0);
        }
        out << "\n";
      }
}

}  // namespace hess2

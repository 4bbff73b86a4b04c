// Uniform 3D grid on the unit cube with node classification for wide stencils.
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace hess2 {

enum class NodeClass : unsigned char { Interior, Band, Exterior };

struct Ball {
  double cx, cy, cz, r;
};

// Domain inside the unit cube: the full box, or a union of balls.
struct DomainSpec {
  std::vector<Ball> balls;  // empty => full box

  bool is_box() const { return balls.empty(); }
  bool contains(double x, double y, double z) const;

  static DomainSpec box() { return {}; }
  static DomainSpec ball_union(std::vector<Ball> b) { return {std::move(b)}; }
};

// N^3 lattice over [0,1]^3 with spacing h = 1/(n-1). Every node is classified
// exactly one of interior / boundary band / exterior. For the full box the
// band is the outer shell of width band_width; for ball domains a node is
// interior iff it lies strictly inside the union and its band_width
// neighborhood stays on the lattice, and the band is the set of non-interior
// nodes within Chebyshev distance band_width of an interior node.
class Grid3 {
 public:
  Grid3(int n, DomainSpec domain = {}, int band_width = 1);

  int n() const { return n_; }
  double h() const { return h_; }
  int band_width() const { return band_width_; }
  const DomainSpec& domain() const { return domain_; }

  std::int64_t num_nodes() const {
    return static_cast<std::int64_t>(n_) * n_ * n_;
  }
  std::int64_t index(int i, int j, int k) const {
    return (static_cast<std::int64_t>(i) * n_ + j) * n_ + k;
  }
  std::array<int, 3> ijk(std::int64_t idx) const {
    int k = static_cast<int>(idx % n_);
    int j = static_cast<int>((idx / n_) % n_);
    int i = static_cast<int>(idx / (static_cast<std::int64_t>(n_) * n_));
    return {i, j, k};
  }
  double coord(int i) const { return i * h_; }

  NodeClass node_class(std::int64_t idx) const { return classes_[idx]; }
  NodeClass node_class(int i, int j, int k) const {
    return classes_[index(i, j, k)];
  }
  bool is_interior(int i, int j, int k) const {
    return node_class(i, j, k) == NodeClass::Interior;
  }

  // Flat indices of interior nodes, lexicographic in (i,j,k).
  const std::vector<std::int64_t>& interior_nodes() const {
    return interior_nodes_;
  }
  // Ordinal of a node among interior unknowns, -1 if not interior.
  std::int64_t interior_ordinal(std::int64_t idx) const {
    return interior_ordinal_[idx];
  }
  std::int64_t num_interior() const {
    return static_cast<std::int64_t>(interior_nodes_.size());
  }
  std::int64_t num_band() const { return num_band_; }
  std::int64_t num_exterior() const { return num_exterior_; }

 private:
  int n_;
  double h_;
  int band_width_;
  DomainSpec domain_;
  std::vector<NodeClass> classes_;
  std::vector<std::int64_t> interior_nodes_;
  std::vector<std::int64_t> interior_ordinal_;
  std::int64_t num_band_ = 0;
  std::int64_t num_exterior_ = 0;
};

// Nodal values on a Grid3. The grid must outlive the field.
struct ScalarField {
  const Grid3* grid = nullptr;
  std::vector<double> values;

  ScalarField() = default;
  explicit ScalarField(const Grid3& g, double fill = 0.0)
      : grid(&g), values(static_cast<std::size_t>(g.num_nodes()), fill) {}

  double& at(int i, int j, int k) { return values[grid->index(i, j, k)]; }
  double at(int i, int j, int k) const { return values[grid->index(i, j, k)]; }
};

using SpatialFn = std::function<double(double, double, double)>;

Grid3 build_grid(int n, DomainSpec domain = {}, int band_width = 1);

// Sample fn at every node.
ScalarField sample_field(const Grid3& grid, const SpatialFn& fn);

// Set band and exterior nodes to g; interior values unchanged.
void apply_boundary(ScalarField& field, const SpatialFn& g);

// Max over interior nodes of |a - b|.
double max_norm_error(const ScalarField& a, const ScalarField& b);

// Max over interior nodes of |a|.
double max_norm_interior(const ScalarField& a);

// CSV of (i,j,k,x,y,z,class,value), plus one flag column per level marking
// nodes on (or straddling, vs an axis neighbor) the level set.
void export_field_csv(const ScalarField& field, const std::string& path,
                      const std::vector<double>& levels = {});

}  // namespace hess2

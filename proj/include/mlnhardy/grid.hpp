#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace mlnhardy {

// Bounded open set containing the origin. Membership is tested strictly.
struct Domain {
  enum class Kind { ball, box, ellipsoid };

  Kind kind = Kind::ball;
  std::vector<double> halfwidths;  // per-axis; a ball stores its radius in every slot
  std::vector<double> center;

  static Domain ball(int dim, double radius, std::vector<double> center = {});
  static Domain box(std::vector<double> halfwidths, std::vector<double> center = {});
  static Domain ellipsoid(std::vector<double> semiaxes, std::vector<double> center = {});

  int dim() const { return static_cast<int>(halfwidths.size()); }
  bool contains(std::span<const double> x) const;
  // Distance to the boundary for points inside (exact for ball and box, a
  // conservative lower bound for ellipsoids). Used by interior-positivity checks.
  double boundary_distance(std::span<const double> x) const;
  std::string describe() const;
};

// Cell-centered Cartesian grid on [-L, L]^n with an interior mask. N even, so
// node coordinates are odd multiples of h/2 and no node hits the origin.
class Mesh {
 public:
  static Mesh build(const Domain& domain, int nodes_per_axis, double box_halfwidth);

  int dim() const { return n_; }
  int per_axis() const { return N_; }
  double halfwidth() const { return L_; }
  double spacing() const { return h_; }
  double cell_volume() const { return cell_volume_; }  // h^n
  const Domain& domain() const { return domain_; }

  std::size_t interior_count() const { return interior_flat_.size(); }
  std::size_t box_count() const { return box_count_; }

  // interior node accessors
  double coord(std::size_t i, int d) const { return coords_[static_cast<std::size_t>(d) * interior_count() + i]; }
  const double* coords_axis(int d) const { return coords_.data() + static_cast<std::size_t>(d) * interior_count(); }
  double radius_sq(std::size_t i) const { return radius_sq_[i]; }
  double boundary_distance(std::size_t i) const { return boundary_dist_[i]; }
  // neighbor in direction d, side +-1: interior index, or -1 when the neighbor
  // is exterior (to the domain or the box) and carries value 0
  std::int32_t neighbor(std::size_t i, int d, int side) const {
    return neighbors_[i * (2 * static_cast<std::size_t>(n_)) + 2 * static_cast<std::size_t>(d) +
                      (side > 0 ? 1 : 0)];
  }

  // full-box accessors (used by the nonlocal assembly; exterior-of-domain box
  // nodes carry value 0 but still contribute to kernel sums)
  const double* box_coords_axis(int d) const { return box_coords_.data() + static_cast<std::size_t>(d) * box_count_; }
  std::int32_t interior_index_of_box(std::size_t flat) const { return interior_of_flat_[flat]; }
  std::size_t box_index_of_interior(std::size_t i) const { return interior_flat_[i]; }
  // distance from an interior node to the bounding-box boundary
  double box_boundary_distance(std::size_t i) const;

 private:
  int n_ = 3;
  int N_ = 0;
  double L_ = 0, h_ = 0, cell_volume_ = 0;
  std::size_t box_count_ = 0;
  Domain domain_;
  std::vector<double> coords_;        // SoA over interior nodes
  std::vector<double> radius_sq_;     // |x|^2 per interior node
  std::vector<double> boundary_dist_; // dist to domain boundary
  std::vector<double> box_coords_;    // SoA over all box nodes
  std::vector<std::size_t> interior_flat_;
  std::vector<std::int32_t> interior_of_flat_;
  std::vector<std::int32_t> neighbors_;
};

// Values of a grid function on interior nodes; zero extension outside the
// domain is implied by every functional.
class FieldVector {
 public:
  FieldVector() = default;
  explicit FieldVector(const Mesh& mesh) : mesh_(&mesh), v_(mesh.interior_count(), 0.0) {}

  const Mesh& mesh() const { return *mesh_; }
  bool has_mesh() const { return mesh_ != nullptr; }
  std::size_t size() const { return v_.size(); }
  double& operator[](std::size_t i) { return v_[i]; }
  double operator[](std::size_t i) const { return v_[i]; }
  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }
  std::span<const double> values() const { return v_; }

 private:
  const Mesh* mesh_ = nullptr;
  std::vector<double> v_;
};

// Pointwise sampling of g at cell centers. Throws when a sample is non-finite,
// naming the offending node.
FieldVector sample_field(const std::function<double(std::span<const double>)>& g, const Mesh& mesh);

// Midpoint quadrature h^n * sum_i |u_i|^p.
double integrate(const FieldVector& u, double p);

// (integrate)^{1/p}
double lp_norm(const FieldVector& u, double p);

}  // namespace mlnhardy

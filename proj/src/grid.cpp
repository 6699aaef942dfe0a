#include "mlnhardy/grid.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "mlnhardy/errors.hpp"
#include "mlnhardy/kernels.hpp"

namespace mlnhardy {

namespace {

std::vector<double> default_center(std::size_t dim, std::vector<double> c) {
  if (c.empty()) c.assign(dim, 0.0);
  if (c.size() != dim) throw ValidationError("domain center dimension mismatch");
  return c;
}

void check_positive(const std::vector<double>& hw, const char* what) {
  if (hw.empty()) throw ValidationError(std::string(what) + ": no extents given");
  for (double a : hw)
    if (!(a > 0.0)) throw ValidationError(std::string(what) + ": extents must be positive");
}

}  // namespace

Domain Domain::ball(int dim, double radius, std::vector<double> center) {
  if (dim < 1) throw ValidationError("ball: dimension must be positive");
  if (!(radius > 0.0)) throw ValidationError("ball: radius must be positive");
  Domain d;
  d.kind = Kind::ball;
  d.halfwidths.assign(static_cast<std::size_t>(dim), radius);
  d.center = default_center(static_cast<std::size_t>(dim), std::move(center));
  return d;
}

Domain Domain::box(std::vector<double> halfwidths, std::vector<double> center) {
  check_positive(halfwidths, "box");
  Domain d;
  d.kind = Kind::box;
  d.center = default_center(halfwidths.size(), std::move(center));
  d.halfwidths = std::move(halfwidths);
  return d;
}

Domain Domain::ellipsoid(std::vector<double> semiaxes, std::vector<double> center) {
  check_positive(semiaxes, "ellipsoid");
  Domain d;
  d.kind = Kind::ellipsoid;
  d.center = default_center(semiaxes.size(), std::move(center));
  d.halfwidths = std::move(semiaxes);
  return d;
}

bool Domain::contains(std::span<const double> x) const {
  switch (kind) {
    case Kind::ball: {
      double r2 = 0.0;
      for (int d = 0; d < dim(); ++d) {
        double t = x[static_cast<std::size_t>(d)] - center[static_cast<std::size_t>(d)];
        r2 += t * t;
      }
      return r2 < halfwidths[0] * halfwidths[0];
    }
    case Kind::box: {
      for (int d = 0; d < dim(); ++d) {
        if (!(std::fabs(x[static_cast<std::size_t>(d)] - center[static_cast<std::size_t>(d)]) <
              halfwidths[static_cast<std::size_t>(d)]))
          return false;
      }
      return true;
    }
    case Kind::ellipsoid: {
      double q = 0.0;
      for (int d = 0; d < dim(); ++d) {
        double t = (x[static_cast<std::size_t>(d)] - center[static_cast<std::size_t>(d)]) /
                   halfwidths[static_cast<std::size_t>(d)];
        q += t * t;
      }
      return q < 1.0;
    }
  }
  return false;
}

double Domain::boundary_distance(std::span<const double> x) const {
  switch (kind) {
    case Kind::ball: {
      double r2 = 0.0;
      for (int d = 0; d < dim(); ++d) {
        double t = x[static_cast<std::size_t>(d)] - center[static_cast<std::size_t>(d)];
        r2 += t * t;
      }
      return halfwidths[0] - std::sqrt(r2);
    }
    case Kind::box: {
      double m = std::numeric_limits<double>::infinity();
      for (int d = 0; d < dim(); ++d) {
        m = std::min(m, halfwidths[static_cast<std::size_t>(d)] -
                            std::fabs(x[static_cast<std::size_t>(d)] -
                                      center[static_cast<std::size_t>(d)]));
      }
      return m;
    }
    case Kind::ellipsoid: {
      double q = 0.0, amin = std::numeric_limits<double>::infinity();
      for (int d = 0; d < dim(); ++d) {
        double t = (x[static_cast<std::size_t>(d)] - center[static_cast<std::size_t>(d)]) /
                   halfwidths[static_cast<std::size_t>(d)];
        q += t * t;
        amin = std::min(amin, halfwidths[static_cast<std::size_t>(d)]);
      }
      // lower bound; exact distance to an ellipsoid has no closed form
      return (1.0 - std::sqrt(q)) * amin;
    }
  }
  return 0.0;
}

std::string Domain::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::ball: os << "ball R=" << halfwidths[0]; break;
    case Kind::box:
      os << "box hw=";
      for (double a : halfwidths) os << a << ' ';
      break;
    case Kind::ellipsoid:
      os << "ellipsoid a=";
      for (double a : halfwidths) os << a << ' ';
      break;
  }
  return os.str();
}

Mesh Mesh::build(const Domain& domain, int nodes_per_axis, double box_halfwidth) {
  const int n = domain.dim();
  if (n < 3 || n > 4) throw ValidationError("build_mesh: dimension must be 3 or 4");
  if (nodes_per_axis < 8) throw ValidationError("build_mesh: N must be >= 8");
  if (nodes_per_axis % 2 != 0) throw ValidationError("build_mesh: N must be even");
  if (!(box_halfwidth > 0.0)) throw ValidationError("build_mesh: box halfwidth must be positive");

  std::vector<double> origin(static_cast<std::size_t>(n), 0.0);
  if (!domain.contains(origin)) throw ValidationError("build_mesh: origin not inside the domain");
  for (int d = 0; d < n; ++d) {
    double lo = domain.center[static_cast<std::size_t>(d)] - domain.halfwidths[static_cast<std::size_t>(d)];
    double hi = domain.center[static_cast<std::size_t>(d)] + domain.halfwidths[static_cast<std::size_t>(d)];
    if (lo < -box_halfwidth || hi > box_halfwidth)
      throw ValidationError("build_mesh: domain exceeds the bounding box");
  }

  Mesh m;
  m.n_ = n;
  m.N_ = nodes_per_axis;
  m.L_ = box_halfwidth;
  m.h_ = 2.0 * box_halfwidth / nodes_per_axis;
  m.cell_volume_ = std::pow(m.h_, n);
  m.domain_ = domain;

  const std::size_t N = static_cast<std::size_t>(nodes_per_axis);
  std::size_t box_count = 1;
  for (int d = 0; d < n; ++d) box_count *= N;
  m.box_count_ = box_count;

  std::vector<double> axis(N);
  for (std::size_t i = 0; i < N; ++i) axis[i] = -box_halfwidth + (static_cast<double>(i) + 0.5) * m.h_;

  // lexicographic over (i_0, ..., i_{n-1}), last axis fastest
  m.box_coords_.resize(static_cast<std::size_t>(n) * box_count);
  m.interior_of_flat_.assign(box_count, -1);
  std::vector<std::size_t> digit(static_cast<std::size_t>(n), 0);
  std::vector<double> x(static_cast<std::size_t>(n));
  for (std::size_t flat = 0; flat < box_count; ++flat) {
    std::size_t rem = flat;
    for (int d = n - 1; d >= 0; --d) {
      digit[static_cast<std::size_t>(d)] = rem % N;
      rem /= N;
    }
    for (int d = 0; d < n; ++d) {
      x[static_cast<std::size_t>(d)] = axis[digit[static_cast<std::size_t>(d)]];
      m.box_coords_[static_cast<std::size_t>(d) * box_count + flat] = x[static_cast<std::size_t>(d)];
    }
    if (domain.contains(x)) {
      m.interior_of_flat_[flat] = static_cast<std::int32_t>(m.interior_flat_.size());
      m.interior_flat_.push_back(flat);
    }
  }

  const std::size_t M = m.interior_flat_.size();
  if (M == 0) throw ValidationError("build_mesh: no interior nodes; refine the mesh");
  m.coords_.resize(static_cast<std::size_t>(n) * M);
  m.radius_sq_.resize(M);
  m.boundary_dist_.resize(M);
  m.neighbors_.assign(M * 2 * static_cast<std::size_t>(n), -1);

  std::vector<std::size_t> strides(static_cast<std::size_t>(n), 1);
  for (int d = n - 2; d >= 0; --d) strides[static_cast<std::size_t>(d)] = strides[static_cast<std::size_t>(d) + 1] * N;

  for (std::size_t i = 0; i < M; ++i) {
    std::size_t flat = m.interior_flat_[i];
    std::size_t rem = flat;
    double r2 = 0.0;
    for (int d = n - 1; d >= 0; --d) {
      digit[static_cast<std::size_t>(d)] = rem % N;
      rem /= N;
    }
    for (int d = 0; d < n; ++d) {
      double xd = axis[digit[static_cast<std::size_t>(d)]];
      m.coords_[static_cast<std::size_t>(d) * M + i] = xd;
      x[static_cast<std::size_t>(d)] = xd;
      r2 += xd * xd;
    }
    m.radius_sq_[i] = r2;
    m.boundary_dist_[i] = domain.boundary_distance(x);
    for (int d = 0; d < n; ++d) {
      std::size_t id = digit[static_cast<std::size_t>(d)];
      if (id > 0) {
        std::int32_t nb = m.interior_of_flat_[flat - strides[static_cast<std::size_t>(d)]];
        m.neighbors_[i * 2 * static_cast<std::size_t>(n) + 2 * static_cast<std::size_t>(d)] = nb;
      }
      if (id + 1 < N) {
        std::int32_t nb = m.interior_of_flat_[flat + strides[static_cast<std::size_t>(d)]];
        m.neighbors_[i * 2 * static_cast<std::size_t>(n) + 2 * static_cast<std::size_t>(d) + 1] = nb;
      }
    }
  }
  return m;
}

double Mesh::box_boundary_distance(std::size_t i) const {
  double m = std::numeric_limits<double>::infinity();
  for (int d = 0; d < n_; ++d) m = std::min(m, L_ - std::fabs(coord(i, d)));
  return m;
}

FieldVector sample_field(const std::function<double(std::span<const double>)>& g, const Mesh& mesh) {
  FieldVector u(mesh);
  const std::size_t M = mesh.interior_count();
  std::vector<double> x(static_cast<std::size_t>(mesh.dim()));
  for (std::size_t i = 0; i < M; ++i) {
    for (int d = 0; d < mesh.dim(); ++d) x[static_cast<std::size_t>(d)] = mesh.coord(i, d);
    double v = g(x);
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "sample_field: non-finite value at node " << i << " (";
      for (int d = 0; d < mesh.dim(); ++d) os << x[static_cast<std::size_t>(d)] << (d + 1 < mesh.dim() ? "," : ")");
      throw NumericalError(os.str());
    }
    u[i] = v;
  }
  return u;
}

double integrate(const FieldVector& u, double p) {
  if (!(p >= 1.0)) throw ValidationError("integrate: p must be >= 1");
  return u.mesh().cell_volume() * kernels::power_sum(u.data(), p, u.size());
}

double lp_norm(const FieldVector& u, double p) { return std::pow(integrate(u, p), 1.0 / p); }

}  // namespace mlnhardy

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mlnhardy/grid.hpp"

namespace mlnhardy {

// Symmetric CSR matrix, rows sorted by column.
struct SparseMatrix {
  std::size_t rows = 0;
  std::vector<std::size_t> row_ptr;
  std::vector<std::int32_t> col;
  std::vector<double> val;

  void matvec(const double* x, double* y) const;
  double quadratic_form(const double* u) const;  // u^T A u
};

struct AssemblyOptions {
  bool with_fractional = true;
  int threads = 0;
};

// Dense-guard: the nonlocal matrix is stored fully.
inline constexpr std::size_t kFractionalDenseGuard = 10000;

// Assembled pieces of  L + (-Delta)^s - gamma/|x|^2  at node level:
//   local:        (2n+1)-point stencil of -Delta, Dirichlet walls at cell faces
//   fractional:   dense punctured kernel quadrature + analytic far tail, plus a
//                 self-cell curvature term carried as `self_cell_scale` times
//                 the local stencil (keeps symmetry and the Z-sign pattern)
//   hardy_diag:   1/|x_i|^2
// The mass weight h^n multiplies every integral functional.
class OperatorSet {
 public:
  const Mesh& mesh() const { return *mesh_; }
  int n() const { return mesh_->dim(); }
  double s() const { return s_; }
  double c_ns() const { return c_ns_; }
  double mass() const { return mesh_->cell_volume(); }
  std::size_t size() const { return mesh_->interior_count(); }
  bool has_fractional() const { return !fractional_.empty(); }

  const SparseMatrix& local() const { return local_; }
  const std::vector<double>& fractional_dense() const { return fractional_; }
  const std::vector<double>& fractional_tail() const { return tail_; }
  const std::vector<double>& hardy_diag() const { return hardy_; }
  double self_cell_scale() const { return self_cell_scale_; }
  double assembly_time() const { return assembly_time_; }
  std::size_t dense_bytes() const { return fractional_.size() * sizeof(double); }

  // y = (local + fractional - gamma * weight) x ; weight defaults to hardy_diag
  void apply(double gamma, const double* x, double* y, int threads = 0,
             const double* weight_override = nullptr) const;
  // diagonal of the full operator at coupling gamma (Jacobi preconditioner)
  std::vector<double> diagonal(double gamma, const double* weight_override = nullptr) const;

  friend OperatorSet assemble(const Mesh&, double, const AssemblyOptions&);

 private:
  const Mesh* mesh_ = nullptr;
  double s_ = 0, c_ns_ = 0, self_cell_scale_ = 0, assembly_time_ = 0;
  SparseMatrix local_;
  std::vector<double> fractional_;  // row-major size M*M (empty in local-only mode)
  std::vector<double> tail_;
  std::vector<double> hardy_;
};

OperatorSet assemble(const Mesh& mesh, double s, const AssemblyOptions& opts = {});

SparseMatrix assemble_local(const Mesh& mesh);
std::vector<double> assemble_hardy(const Mesh& mesh, std::optional<double> regularization_k = {});

// J(n,s) = \int_{[-1/2,1/2]^n} z_1^2 |z|^{-n-2s} dz  (self-cell curvature weight)
double self_cell_constant(int n, double s);

// B(u,v) = h^n v^T (local + fractional) u ; symmetric, rho(u)^2 = B(u,u)
double bilinear_form(const OperatorSet& ops, const FieldVector& u, const FieldVector& v);
double rho_squared(const OperatorSet& ops, const FieldVector& u);

// h^n u^T local u  — the discrete squared gradient norm (face-zero walls included)
double local_part(const OperatorSet& ops, const FieldVector& u);

// [u]_s^2 = (2/C_{n,s}) * h^n u^T fractional u
double gagliardo_seminorm_sq(const OperatorSet& ops, const FieldVector& u);

// h^n sum_i u_i^2 / |x_i|^p with p in [2s, 2]
double hardy_functional(const Mesh& mesh, const FieldVector& u, double p, double s);

// forward-difference W^{1,p} seminorm consistent with local_part at p = 2
double grad_lp_norm(const FieldVector& u, double p);

}  // namespace mlnhardy

#pragma once

// Piecewise-linear Galerkin solver for −u″ + u = f on [0,1], u(0) = u(1) = 0,
// in the energy inner product ⟨u,v⟩★ = ∫ u′v′ + uv.

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "convexlab/parallel.hpp"
#include "convexlab/vector.hpp"

namespace convexlab::galerkin {

using Function = std::function<double(double)>;
using SparseMatrix = Eigen::SparseMatrix<double>;

/// Uniform grid 0 = x_0 < … < x_n = 1.
class Mesh {
 public:
  explicit Mesh(std::size_t n_elements);

  [[nodiscard]] std::size_t n_elements() const { return n_; }
  [[nodiscard]] std::size_t n_interior() const { return n_ - 1; }
  [[nodiscard]] double h() const { return 1.0 / static_cast<double>(n_); }
  /// x_i; endpoints are exactly 0 and 1.
  [[nodiscard]] double node(std::size_t i) const;

  bool operator==(const Mesh&) const = default;

 private:
  std::size_t n_;
};

struct Problem {
  Mesh mesh;
  Function load;
  int quadrature_order = 3;  ///< Gauss points per element, 1..5
};

struct System {
  SparseMatrix A;  ///< ⟨φ_i, φ_j⟩★ over interior hats
  Vector b;        ///< ∫ f φ_i
};

/// Closed-form stiffness plus Gauss-quadrature load. Element loads are
/// computed in parallel and summed in element order either way.
System assemble(const Problem& problem, Exec exec = Exec::parallel);

struct Solution {
  Mesh mesh;
  Vector coeffs;  ///< interior nodal values

  /// Nodal values including the two zero endpoints.
  [[nodiscard]] Vector nodal() const;
  /// u_h(x) by linear interpolation.
  [[nodiscard]] double operator()(double x) const;
};

Solution solve(const Problem& problem, Exec exec = Exec::parallel);

/// Solves A c = b for an already assembled system on `mesh`.
Solution solve_system(const Mesh& mesh, const System& sys);

/// ‖v‖★ of the piecewise-linear function with the given n+1 nodal values.
double star_norm(const Mesh& mesh, const Vector& nodal);
/// ⟨u,v⟩★ for piecewise-linear nodal vectors.
double star_inner(const Mesh& mesh, const Vector& u, const Vector& v);
/// ∫ u v for piecewise-linear nodal vectors.
double l2_inner(const Mesh& mesh, const Vector& u, const Vector& v);

/// max_i |⟨u_h, φ_i⟩★ − ∫ f φ_i|.
double weak_residual(const Solution& sol, const Problem& problem);

/// ‖f‖★‖φ‖★ − ∫ f φ for two piecewise-linear nodal vectors on the same mesh.
double cauchy_schwarz_check(const Mesh& mesh, const Vector& f, const Vector& phi);

/// Nodal interpolant of g (n+1 values).
Vector interpolate(const Mesh& mesh, const Function& g);

/// ‖u − u_h‖★ with 5-point Gauss quadrature per element.
double energy_error(const Solution& sol, const Function& u, const Function& du);

struct ErrorRow {
  std::size_t n;
  double error;        ///< ‖u − u_h‖★
  double ratio;        ///< error / previous error (1 for the first row)
  double nodal_error;  ///< ‖I_h u − u_h‖★
};

/// One row per mesh size, in the given order.
std::vector<ErrorRow> convergence_study(const Function& f, const Function& u, const Function& du,
                                        const std::vector<std::size_t>& sizes,
                                        Exec exec = Exec::parallel);

/// Columns n, error, ratio.
std::string error_table_csv(const std::vector<ErrorRow>& rows);
/// Columns x, u_h; `samples` evenly spaced points including both ends.
std::string solution_csv(const Solution& sol, std::size_t samples);

}  // namespace convexlab::galerkin

#pragma once

// Small dense log-barrier interior-point engine for problems of the form
//
//   minimize cᵀz  subject to  A z = b,  (F_k z + g_k) ∈ K_k
//
// where each K_k is the nonnegative ray, a second-order cone or a 3-d power
// cone. Norm and dual-norm epigraphs of every NormSpec kind compile into these
// cones, which keeps the solvers module norm-agnostic.

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "convexlab/norm.hpp"
#include "convexlab/vector.hpp"

namespace convexlab::conic {

/// Sparse affine expression Σ coef·z[var] + constant.
struct Expr {
  std::vector<std::pair<int, double>> terms;
  double constant = 0.0;

  static Expr var(int index, double coef = 1.0) { return Expr{{{index, coef}}, 0.0}; }
  static Expr value(double c) { return Expr{{}, c}; }

  [[nodiscard]] double eval(const Vector& z) const;
  Expr& operator+=(const Expr& o);
  Expr& operator-=(const Expr& o);
  Expr& operator*=(double s);
};

Expr operator+(Expr a, const Expr& b);
Expr operator-(Expr a, const Expr& b);
Expr operator*(double s, Expr a);

using ExprVec = std::vector<Expr>;

/// x = M·z[offset .. offset+cols) + shift, as a vector of expressions.
ExprVec affine_image(const Matrix& M, int offset, const Vector& shift);
/// Identity image of z[offset .. offset+n).
ExprVec variables(int offset, int n);

enum class ConeType {
  nonneg,  ///< w₀ ≥ 0
  soc,     ///< w₀ ≥ ‖(w₁..w_m)‖₂
  power,   ///< (r, s, x): r^α s^(1−α) ≥ |x|, r, s ≥ 0
};

struct Cone {
  ConeType type;
  ExprVec args;
  double alpha = 0.5;
};

class Program {
 public:
  /// Appends k fresh variables and returns the index of the first.
  int add_vars(int k);
  [[nodiscard]] int num_vars() const { return nvars_; }

  void set_objective(Expr c) { objective_ = std::move(c); }
  [[nodiscard]] const Expr& objective() const { return objective_; }

  /// Constrains e = 0.
  void add_equality(Expr e) { equalities_.push_back(std::move(e)); }
  void add_cone(Cone c) { cones_.push_back(std::move(c)); }
  /// Constrains e ≥ 0.
  void add_nonneg(Expr e) { cones_.push_back({ConeType::nonneg, {std::move(e)}}); }

  [[nodiscard]] const std::vector<Expr>& equalities() const { return equalities_; }
  [[nodiscard]] const std::vector<Cone>& cones() const { return cones_; }

  /// Sum of the barrier parameters of all cones.
  [[nodiscard]] double barrier_parameter() const;
  /// True iff every cone argument is strictly interior at z.
  [[nodiscard]] bool interior(const Vector& z) const;

 private:
  int nvars_ = 0;
  Expr objective_;
  std::vector<Expr> equalities_;
  std::vector<Cone> cones_;
};

/// Handle returned by an epigraph builder.
///
/// `fill` writes auxiliary variables into z so that every cone of the epigraph
/// is strictly interior, given the primary point x and an epigraph value
/// t > bound(x). `bound` returns a value no smaller than the (dual) norm.
struct Epigraph {
  std::function<void(Vector& z, const Vector& x, double t)> fill;
  std::function<double(const Vector& x)> bound;
};

/// Adds cones enforcing ‖x‖_spec ≤ t.
Epigraph add_norm_epigraph(Program& prog, const NormSpec& spec, const ExprVec& x, const Expr& t);

/// Adds cones enforcing ‖x‖_spec,* ≤ t, the dual norm under ⟨g,x⟩ = Σ gᵢxᵢ.
/// Sums dualize to the infimal max-convolution min over g₁+…+g_K = x of max ‖g_k‖_k,*.
Epigraph add_dual_norm_epigraph(Program& prog, const NormSpec& spec, const ExprVec& x,
                                const Expr& t);

struct Options {
  double gap_tol = 1e-10;
  double mu = 16.0;
  double t0 = 1.0;
  int max_newton = 2000;
};

struct Result {
  Vector z;
  double objective = 0.0;
  /// ν/t bound on the duality gap at the last centered point.
  double gap = 0.0;
  int newton_steps = 0;
  bool converged = false;
  /// Multipliers of the equality constraints (in the order added).
  Vector eq_multipliers;
};

/// Barrier method from a strictly interior start z0 (equalities may be off;
/// infeasible-start Newton restores them).
Result solve(const Program& prog, Vector z0, const Options& opts = {});

}  // namespace convexlab::conic

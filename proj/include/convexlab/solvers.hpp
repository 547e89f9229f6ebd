#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "convexlab/conic.hpp"
#include "convexlab/norm.hpp"
#include "convexlab/parallel.hpp"
#include "convexlab/vector.hpp"

namespace convexlab {

inline constexpr double kDefaultTol = 1e-8;

struct SolveReport {
  double value = 0.0;
  Vector argpoint;
  int iterations = 0;
  bool converged = false;
  double certified_gap = 0.0;
};

/// {g : A g = b} with A of full row rank m ≤ n.
class AffineSet {
 public:
  AffineSet(Matrix constraint_matrix, Vector rhs);

  [[nodiscard]] const Matrix& matrix() const { return A_; }
  [[nodiscard]] const Vector& rhs() const { return b_; }
  [[nodiscard]] Eigen::Index dim() const { return A_.cols(); }
  /// Least-squares (minimum ℓ2) point of the set.
  [[nodiscard]] Vector particular_point() const;
  /// max |A g − b|.
  [[nodiscard]] double residual(const Vector& g) const;

 private:
  Matrix A_;
  Vector b_;
};

/// True iff the smallest singular value exceeds 1e-10 times the largest.
bool has_full_column_rank(const Matrix& M);

/// sup{⟨g,x⟩ : ‖x‖ ≤ 1} with a maximizer. Closed form for ℓp and inner-product
/// norms (ties on ℓ1/ℓ∞ kinks resolve to the lexicographically smallest extreme
/// point); sums go through the barrier engine with a certified gap.
SolveReport linear_max_over_ball(const Vector& g, const NormSpec& spec, double tol = kDefaultTol);

/// ‖g‖* under the pairing ⟨g,x⟩ = Σ gᵢxᵢ. Throws ConvergenceError if the
/// iterative path fails.
double dual_norm(const Vector& g, const NormSpec& spec);

/// The dual of ℓp is ℓq and the dual of an inner-product norm is the inverse
/// Gram norm; sums have no NormSpec dual.
std::optional<NormSpec> dual_spec(const NormSpec& spec);

/// sup{⟨g,v⟩ : ‖g‖* ≤ 1}, solved numerically over the dual ball for every kind.
/// Dimension is capped at 16.
double bidual_norm(const Vector& v, const NormSpec& spec, double tol = kDefaultTol);

/// min{‖g‖ : A g = b}.
SolveReport affine_min_norm(const AffineSet& aff, const NormSpec& spec, double tol = kDefaultTol);

// ---------------------------------------------------------------------------
// Shared machinery for the higher modules. A problem is a norm (or dual norm)
// of an affine image x = map·c + shift, optionally with linear constraints on c.

enum class Side { primal, dual };

struct NormProblem {
  const NormSpec* spec = nullptr;
  Side side = Side::primal;
  Matrix map;
  Vector shift;
  Matrix eq_matrix;  ///< constraints eq_matrix·c = eq_rhs (may have zero rows)
  Vector eq_rhs;

  [[nodiscard]] Eigen::Index num_coeffs() const { return map.cols(); }
  [[nodiscard]] Vector image(const Vector& c) const { return map * c + shift; }
  /// Objective value at c, evaluated directly (no optimization for primal).
  [[nodiscard]] double objective(const Vector& c) const;
};

/// Interior solution of the barrier program, kept so a follow-up face solve can
/// warm-start from it.
struct InteriorSolution {
  SolveReport report;
  Vector z;
};

/// min over c of objective(c) + ⟨linear, c⟩ (linear may be empty).
InteriorSolution minimize_norm(const NormProblem& prob, double tol, const Vector& linear = {});

/// max ⟨g, c⟩ subject to objective(c) ≤ 1 (shift must be zero, no constraints).
SolveReport maximize_over_unit_ball(const NormProblem& prob, const Vector& g, double tol);

enum class FaceMode {
  /// Tie-breaker η⟨d,c⟩ with η = 1e-3·tol·(1 + optimum): moves a unique
  /// minimizer by far less than tol, so a small spread certifies uniqueness.
  tiebreak,
  /// η starts at 1e-3·(1 + optimum) and shrinks tenfold until the objective
  /// stays within tol of the optimum. On polyhedral problems this lands on
  /// the vertices of the optimal face.
  push,
};

struct FaceSample {
  std::vector<Vector> points;  ///< minimizers, one per direction
  int solves = 0;
  bool converged = true;
  FaceMode mode = FaceMode::tiebreak;
};

/// Samples the optimal face of `prob` by re-solving with a secondary linear
/// objective η⟨d,c⟩, for ±coordinate directions followed by random unit
/// directions (`directions` in total). Directions run in parallel.
FaceSample explore_optimal_face(const NormProblem& prob, const InteriorSolution& base,
                                std::size_t directions, double tol, std::uint64_t seed,
                                Exec exec, FaceMode mode);

}  // namespace convexlab

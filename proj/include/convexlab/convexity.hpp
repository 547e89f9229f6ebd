#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "convexlab/norm.hpp"
#include "convexlab/parallel.hpp"
#include "convexlab/vector.hpp"

namespace convexlab {

/// Best midpoint found for one separation ε, with the pair that attains it.
struct MidpointEstimate {
  double eps = 0.0;
  double value = 0.0;  ///< ‖(x+y)/2‖, re-evaluated on the witness
  Vector x;
  Vector y;
  std::uint64_t evaluations = 0;
};

/// Lower bound on sup{‖(x+y)/2‖ : ‖x‖,‖y‖ ≤ 1, ‖x−y‖ ≥ ε} in dimension `dim`.
///
/// Each candidate is a pair of unit directions (u, v); the pair is x = ρu + h,
/// y = ρu − h with h = (ε/2)v and ρ the largest value keeping both in the ball,
/// found by bisection. Directions are improved by golden-section line searches
/// from random starts; polyhedral norms also try vertex and edge directions.
MidpointEstimate midpoint_sup(const NormSpec& spec, std::size_t dim, double eps,
                              std::uint64_t budget, std::uint64_t seed,
                              Exec exec = Exec::parallel);

struct ModulusCurve {
  std::vector<double> eps_grid;
  std::vector<double> sup_midpoint;
  std::vector<std::pair<Vector, Vector>> witnesses;

  /// Columns eps, sup_midpoint, witness_x, witness_y.
  [[nodiscard]] std::string to_csv() const;
};

/// midpoint_sup along an ascending grid in (0, 2], made non-increasing by
/// taking the maximum from the right (a pair feasible at ε_j is feasible at
/// every ε_i ≤ ε_j).
ModulusCurve modulus_curve(const NormSpec& spec, std::size_t dim, const std::vector<double>& eps_grid,
                           std::uint64_t budget, std::uint64_t seed, Exec exec = Exec::parallel);

/// √(1 − ε²/4), the Euclidean value of the midpoint supremum.
double euclidean_modulus_closed_form(double eps);

struct StrictVerdict {
  bool violated = false;
  Vector x;
  Vector y;
  double midpoint_norm = 0.0;
};

/// Looks for distinct unit vectors with a unit-norm midpoint. Ternary sign
/// vectors are tried first (they expose flat faces of polyhedral balls), then
/// `trials` random sphere pairs with separation ≥ 1e-3. A hit needs
/// |‖(x+y)/2‖ − 1| ≤ 1e-12.
StrictVerdict strict_convexity_probe(const NormSpec& spec, std::size_t dim, std::uint64_t trials,
                                     std::uint64_t seed, Exec exec = Exec::parallel);

/// Angle in (0, π) between linearly independent x, y under ⟨x,y⟩ = xᵀGy.
double angle_law_of_cosines(const Vector& x, const Vector& y, const Matrix& gram);

/// x_N = 1 on 1..N, y_N = 1 on N+1..2N under ‖·‖ = ‖·‖₁ + ‖·‖₂.
struct L1L2Pair {
  std::size_t n = 0;
  SparseSeq x;
  SparseSeq y;
  double norm_x = 0.0;
  double norm_y = 0.0;
  double norm_diff = 0.0;
  double norm_mid = 0.0;
  /// ‖(x+y)/2‖ / (N + √N)
  double mid_ratio = 0.0;
  /// ‖x−y‖ / (N + √N)
  double sep_ratio = 0.0;
};

L1L2Pair l1l2_pair(std::size_t n);

struct ConvexityVerdict {
  StrictVerdict strict;
  bool uniform_violated = false;
  double violated_eps = 0.0;
  /// Pairs exhibiting the violation (one pair for finite-dimensional searches,
  /// a sequence for the sequence-space construction).
  std::vector<std::pair<Vector, Vector>> witnesses;
  std::vector<double> witness_midpoints;
  ModulusCurve curve;
  /// A finite search can refute uniform convexity but only gather evidence for it.
  std::string evidence = "empirical";
};

/// Uniform convexity is declared violated at the first grid ε whose midpoint
/// supremum reaches 1 − 1e-6, or at the separation of a strict-convexity
/// witness (a uniformly convex norm is strictly convex).
ConvexityVerdict uniform_convexity_verdict(const NormSpec& spec, std::size_t dim,
                                           const std::vector<double>& eps_grid,
                                           std::uint64_t budget, std::uint64_t seed,
                                           Exec exec = Exec::parallel);

/// The ℓ1+ℓ2 sequence-space construction over increasing N: violated at
/// ε = √2 when every separation ratio stays ≥ √2, the midpoint ratios increase,
/// and the last ratio reaches `min_ratio`.
ConvexityVerdict l1l2_uniform_convexity_verdict(const std::vector<std::size_t>& ns,
                                                double min_ratio = 0.98);

}  // namespace convexlab

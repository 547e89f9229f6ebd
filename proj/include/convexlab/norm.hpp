#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "convexlab/parallel.hpp"
#include "convexlab/vector.hpp"

namespace convexlab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Hölder conjugate: 1/p + 1/q = 1, with 1 <-> infinity.
double conjugate_exponent(double p);

/// ℓp norm with max-rescaling; p = kInf gives the max norm.
double lp_norm(const Vector& v, double p);

class NormSpec;

struct LpKind {
  double p;
};

struct InnerProductKind {
  Matrix gram;
  Matrix chol;  ///< lower factor L with gram = L Lᵀ, so ‖x‖ = ‖Lᵀx‖₂
};

struct SumKind {
  std::vector<NormSpec> parts;
};

/// Declarative description of a norm on ℝⁿ: ℓp, an inner-product norm given by a
/// Gram matrix, or the sum of other norms.
class NormSpec {
 public:
  using Kind = std::variant<LpKind, InnerProductKind, SumKind>;

  static NormSpec lp(double p);
  static NormSpec inner(Matrix gram);
  static NormSpec sum(std::vector<NormSpec> parts);

  [[nodiscard]] const Kind& kind() const { return kind_; }
  [[nodiscard]] const LpKind* as_lp() const { return std::get_if<LpKind>(&kind_); }
  [[nodiscard]] const InnerProductKind* as_inner() const {
    return std::get_if<InnerProductKind>(&kind_);
  }
  [[nodiscard]] const SumKind* as_sum() const { return std::get_if<SumKind>(&kind_); }

  /// Dimension pinned by an inner-product Gram matrix anywhere in the tree.
  [[nodiscard]] std::optional<std::size_t> fixed_dim() const;
  /// Throws DimensionError if this spec cannot act on vectors of length n.
  void check_dim(std::size_t n) const;

  /// ℓ1, ℓ∞ and sums built only from those.
  [[nodiscard]] bool is_polyhedral() const;
  /// True when the unit sphere contains no segment in any dimension.
  [[nodiscard]] bool is_strictly_convex() const;
  /// Lp and sums of Lp, the kinds that act on SparseSeq.
  [[nodiscard]] bool acts_on_sequences() const;

  /// Short human-readable name ("l1", "l1.5", "linf", "inner(3)", "sum(l1+l2)").
  [[nodiscard]] std::string label() const;

 private:
  explicit NormSpec(Kind k) : kind_(std::move(k)) {}
  Kind kind_;
};

double norm_eval(const Vector& v, const NormSpec& spec);
double norm_eval(const SparseSeq& v, const NormSpec& spec);

/// ‖x‖ + ‖y‖ − ‖x+y‖, nonnegative for every norm.
double triangle_defect(const Vector& x, const Vector& y, const NormSpec& spec);

/// ‖x+y‖² + ‖x−y‖² − 2‖x‖² − 2‖y‖², zero exactly for inner-product norms.
double parallelogram_defect(const Vector& x, const Vector& y, const NormSpec& spec);

enum class BallRegion { inside, boundary, outside };

inline constexpr double kBoundaryTol = 1e-9;

BallRegion ball_membership(const Vector& v, const NormSpec& spec, double tol = kBoundaryTol);
const char* to_string(BallRegion r);

/// k points of the planar unit sphere at angles 2πj/k, scaled radially.
std::vector<Vector> sphere_sample_2d(const NormSpec& spec, std::size_t k);

/// Positively homogeneous gauge; norms and test-only quasi-norms both fit.
using Gauge = std::function<double(const Vector&)>;

struct ConvexityViolation {
  Vector x;
  Vector y;
  double t;
  double value;  ///< gauge(t x + (1−t) y)
  std::uint64_t trial;
};

/// Point in {gauge ≤ 1}: symmetric direction, radius u^(1/dim).
Vector sample_in_ball(const Gauge& gauge, std::size_t dim, std::mt19937_64& rng);

/// Searches random chords of the unit ball for a point with gauge > 1 + 1e-9.
/// Returns the violation from the lowest-numbered trial, or nothing.
std::optional<ConvexityViolation> ball_convexity_probe(const Gauge& gauge, std::size_t dim,
                                                       std::uint64_t trials, std::uint64_t seed,
                                                       Exec exec = Exec::parallel);

std::optional<ConvexityViolation> ball_convexity_probe(const NormSpec& spec, std::size_t dim,
                                                       std::uint64_t trials, std::uint64_t seed,
                                                       Exec exec = Exec::parallel);

}  // namespace convexlab

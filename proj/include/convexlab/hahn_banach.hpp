#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "convexlab/norm.hpp"
#include "convexlab/parallel.hpp"
#include "convexlab/solvers.hpp"
#include "convexlab/vector.hpp"

namespace convexlab {

/// Column span of an n×k basis with k ≤ n independent columns.
class Subspace {
 public:
  explicit Subspace(Matrix basis);

  [[nodiscard]] const Matrix& basis() const { return U_; }
  [[nodiscard]] Eigen::Index ambient_dim() const { return U_.rows(); }
  [[nodiscard]] Eigen::Index dim() const { return U_.cols(); }

 private:
  Matrix U_;
};

/// Functional x ↦ ⟨g, x⟩ on the whole space.
struct Extension {
  Vector coeffs;
  double dual_norm_value = 0.0;

  /// {"coeffs": [...], "dual_norm": r}
  [[nodiscard]] std::string to_json() const;
};

/// ‖f‖ on U: sup{|Σ c_j f_j| : ‖U c‖ ≤ 1}. `values` holds f on each basis column.
double functional_norm_on_subspace(const Subspace& U, const Vector& values, const NormSpec& spec,
                                   double tol = kDefaultTol);

/// Minimum dual norm over {g : Uᵀg = values}.
Extension min_norm_extension(const Subspace& U, const Vector& values, const NormSpec& spec,
                             double tol = kDefaultTol);

struct UniquenessReport {
  double diameter = 0.0;        ///< max pairwise dual-norm distance among witnesses
  double optimum = 0.0;         ///< minimum dual norm
  std::vector<Extension> witnesses;
  std::size_t far_a = 0, far_b = 0;  ///< indices of the farthest pair
  double midpoint_dual_norm = 0.0;   ///< dual norm of (g_a + g_b)/2
  FaceMode mode = FaceMode::tiebreak;
};

/// Explores the set of minimum-norm extensions. A diameter ≤ 10·tol means no
/// second extension was found; a larger one comes with two explicit extensions.
UniquenessReport extension_uniqueness_probe(const Subspace& U, const Vector& values,
                                            const NormSpec& spec, std::size_t directions,
                                            double tol = kDefaultTol, std::uint64_t seed = 0,
                                            Exec exec = Exec::parallel);

/// g with ‖g‖* = 1 and ⟨g, x⟩ = ‖x‖.
Extension norming_functional(const Vector& x, const NormSpec& spec);

}  // namespace convexlab

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "convexlab/hahn_banach.hpp"
#include "convexlab/norm.hpp"
#include "convexlab/solvers.hpp"
#include "convexlab/vector.hpp"

namespace convexlab {

struct ApproxResult {
  Vector coeffs;     ///< minimizer in the subspace basis
  Vector minimizer;  ///< basis · coeffs
  double distance = 0.0;
  double uniqueness_diameter = 0.0;
  /// Minimizers found on the optimal face (ambient form), two farthest first.
  std::vector<Vector> face_points;
  int iterations = 0;
};

/// Nearest point to f in span(Y) under spec, solved in subspace coordinates.
/// Throws DomainError when f lies in Y (distance ≤ tol).
ApproxResult best_approximation(const Vector& f, const Subspace& Y, const NormSpec& spec,
                                double tol = kDefaultTol, std::uint64_t seed = 0,
                                Exec exec = Exec::parallel);

struct UniquenessVerdict {
  bool unique = true;
  ApproxResult result;
  Vector g;  ///< two distinct minimizers when not unique
  Vector h;
  double midpoint_distance = 0.0;  ///< ‖f − (g+h)/2‖
  /// Two minimizers under a strictly convex norm whose midpoint is strictly
  /// closer: impossible for a correct solver.
  bool inconsistent = false;
};

/// Unique iff the optimal-face diameter is ≤ 10·tol. Reported witnesses are at
/// least 1e3·tol apart.
UniquenessVerdict nearest_point_uniqueness_check(const Vector& f, const Subspace& Y,
                                                 const NormSpec& spec, double tol = kDefaultTol,
                                                 std::uint64_t seed = 0, Exec exec = Exec::parallel);

/// Midpoint test applied to a given pair of claimed minimizers; exposed so the
/// consistency flag can be exercised directly.
UniquenessVerdict classify_minimizers(const Vector& f, const NormSpec& spec, double distance,
                                      const Vector& g, const Vector& h, double tol);

/// Columns spec, dim, distance, diameter, minimizer.
std::string approximation_csv_header();
std::string approximation_csv_row(const NormSpec& spec, const ApproxResult& r);

}  // namespace convexlab

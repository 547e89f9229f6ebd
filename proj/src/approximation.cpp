#include "convexlab/approximation.hpp"

#include <cmath>
#include <utility>

namespace convexlab {

ApproxResult best_approximation(const Vector& f, const Subspace& Y, const NormSpec& spec, double tol,
                                std::uint64_t seed, Exec exec) {
  require_valid(f, "target");
  if (f.size() != Y.ambient_dim()) throw DimensionError("target and subspace dimensions differ");
  spec.check_dim(static_cast<std::size_t>(f.size()));
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  const Matrix& U = Y.basis();

  NormProblem prob;
  prob.spec = &spec;
  prob.map = -U;
  prob.shift = f;
  const auto base = minimize_norm(prob, 0.01 * tol);
  if (!base.report.converged) throw ConvergenceError("best approximation did not converge");

  ApproxResult r;
  r.coeffs = base.report.argpoint;
  r.minimizer = U * r.coeffs;
  r.distance = norm_eval(Vector(f - r.minimizer), spec);
  r.iterations = base.report.iterations;
  if (r.distance <= tol) throw DomainError("target lies in the subspace");

  const std::size_t dirs = 2 * static_cast<std::size_t>(U.cols()) + 2;
  auto metric = [&](const Vector& a, const Vector& b) { return norm_eval(Vector(U * (a - b)), spec); };
  auto sample = [&](FaceMode mode) {
    const auto face = explore_optimal_face(prob, base, dirs, tol, seed, exec, mode);
    if (!face.converged) throw ConvergenceError("optimal-face exploration did not converge");
    std::size_t ia = 0, ib = 0;
    double diam = 0.0;
    for (std::size_t i = 0; i < face.points.size(); ++i) {
      for (std::size_t j = i + 1; j < face.points.size(); ++j) {
        const double d = metric(face.points[i], face.points[j]);
        if (d > diam) {
          diam = d;
          ia = i;
          ib = j;
        }
      }
    }
    r.uniqueness_diameter = diam;
    r.face_points.clear();
    r.face_points.push_back(U * face.points[ia]);
    r.face_points.push_back(U * face.points[ib]);
    for (std::size_t i = 0; i < face.points.size(); ++i) {
      if (i != ia && i != ib) r.face_points.push_back(U * face.points[i]);
    }
  };
  const bool polyhedral = spec.is_polyhedral();
  sample(polyhedral ? FaceMode::push : FaceMode::tiebreak);
  if (!polyhedral && r.uniqueness_diameter > 10.0 * tol) sample(FaceMode::push);
  return r;
}

UniquenessVerdict classify_minimizers(const Vector& f, const NormSpec& spec, double distance,
                                      const Vector& g, const Vector& h, double tol) {
  UniquenessVerdict v;
  v.g = g;
  v.h = h;
  v.midpoint_distance = norm_eval(Vector(f - 0.5 * (g + h)), spec);
  const double sep = norm_eval(Vector(g - h), spec);
  v.unique = sep <= 10.0 * tol;
  if (!v.unique) {
    v.inconsistent = spec.is_strictly_convex() || v.midpoint_distance < distance - tol ||
                     v.midpoint_distance > distance + tol;
  }
  return v;
}

UniquenessVerdict nearest_point_uniqueness_check(const Vector& f, const Subspace& Y,
                                                 const NormSpec& spec, double tol,
                                                 std::uint64_t seed, Exec exec) {
  auto res = best_approximation(f, Y, spec, tol, seed, exec);
  const double diam = res.uniqueness_diameter;
  if (diam > 10.0 * tol && diam < 1e3 * tol) {
    throw ConvergenceError("optimal face too thin to separate witnesses from solver noise");
  }
  UniquenessVerdict v = classify_minimizers(f, spec, res.distance, res.face_points[0],
                                            res.face_points[1], tol);
  if (v.unique) {
    v.g = v.h = res.minimizer;
    v.midpoint_distance = res.distance;
  }
  v.result = std::move(res);
  return v;
}

std::string approximation_csv_header() { return "spec,dim,distance,diameter,minimizer\n"; }

std::string approximation_csv_row(const NormSpec& spec, const ApproxResult& r) {
  return spec.label() + ',' + std::to_string(r.minimizer.size()) + ',' + fmt9(r.distance) + ',' +
         fmt9(r.uniqueness_diameter) + ',' + join_vector(r.minimizer) + '\n';
}

}  // namespace convexlab

#include "convexlab/hahn_banach.hpp"

#include <cmath>

namespace convexlab {

Subspace::Subspace(Matrix basis) : U_(std::move(basis)) {
  if (U_.cols() == 0 || U_.rows() == 0) throw DomainError("subspace basis must be nonempty");
  if (!U_.allFinite()) throw DomainError("subspace basis must be finite");
  if (!has_full_column_rank(U_)) throw DomainError("subspace basis is rank-deficient");
}

std::string Extension::to_json() const {
  std::string out = "{\"coeffs\":[";
  for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
    if (i) out += ',';
    out += fmt9(coeffs[i]);
  }
  return out + "],\"dual_norm\":" + fmt9(dual_norm_value) + '}';
}

namespace {

void check_functional(const Subspace& U, const Vector& values, const NormSpec& spec) {
  if (values.size() != U.dim()) throw DimensionError("one functional value per basis column");
  if (!values.allFinite()) throw DomainError("functional values must be finite");
  spec.check_dim(static_cast<std::size_t>(U.ambient_dim()));
}

// Gram matrix of the norm when it comes from an inner product.
std::optional<Matrix> euclidean_gram(const NormSpec& spec, Eigen::Index n) {
  if (auto* lp = spec.as_lp(); lp && lp->p == 2.0) return Matrix::Identity(n, n);
  if (auto* ip = spec.as_inner()) return ip->gram;
  return std::nullopt;
}

NormProblem extension_problem(const Subspace& U, const Vector& values, const NormSpec& spec) {
  const Eigen::Index n = U.ambient_dim();
  NormProblem prob;
  prob.spec = &spec;
  prob.side = Side::dual;
  prob.map = Matrix::Identity(n, n);
  prob.shift = Vector::Zero(n);
  prob.eq_matrix = U.basis().transpose();
  prob.eq_rhs = values;
  return prob;
}

Extension make_extension(Vector g, const NormSpec& spec) {
  Extension e;
  e.dual_norm_value = dual_norm(g, spec);
  e.coeffs = std::move(g);
  return e;
}

}  // namespace

double functional_norm_on_subspace(const Subspace& U, const Vector& values, const NormSpec& spec,
                                   double tol) {
  check_functional(U, values, spec);
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  if (values.isZero(0.0)) return 0.0;
  const Matrix& B = U.basis();
  if (B.cols() == 1) return std::abs(values[0]) / norm_eval(Vector(B.col(0)), spec);
  if (auto G = euclidean_gram(spec, B.rows())) {
    const Matrix M = B.transpose() * *G * B;
    return std::sqrt(std::max(0.0, values.dot(M.ldlt().solve(values))));
  }
  NormProblem prob;
  prob.spec = &spec;
  prob.map = B;
  prob.shift = Vector::Zero(B.rows());
  const auto rep = maximize_over_unit_ball(prob, values, tol);
  if (!rep.converged) throw ConvergenceError("functional norm did not converge");
  return std::abs(rep.value);
}

Extension min_norm_extension(const Subspace& U, const Vector& values, const NormSpec& spec,
                             double tol) {
  check_functional(U, values, spec);
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  const Matrix& B = U.basis();
  if (values.isZero(0.0)) return Extension{Vector::Zero(B.rows()), 0.0};
  if (auto G = euclidean_gram(spec, B.rows())) {
    const Matrix GB = *G * B;
    return make_extension(GB * (B.transpose() * GB).ldlt().solve(values), spec);
  }
  const auto sol = minimize_norm(extension_problem(U, values, spec), 0.1 * tol);
  if (!sol.report.converged) throw ConvergenceError("min-norm extension did not converge");
  return make_extension(sol.report.argpoint, spec);
}

UniquenessReport extension_uniqueness_probe(const Subspace& U, const Vector& values,
                                            const NormSpec& spec, std::size_t directions,
                                            double tol, std::uint64_t seed, Exec exec) {
  check_functional(U, values, spec);
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  if (directions < 2 * static_cast<std::size_t>(U.ambient_dim())) {
    throw DomainError("directions must be >= 2n");
  }
  UniquenessReport r;
  if (values.isZero(0.0)) {
    // Norm 0 forces g = 0.
    r.witnesses.push_back(Extension{Vector::Zero(U.ambient_dim()), 0.0});
    return r;
  }

  const NormProblem prob = extension_problem(U, values, spec);
  const auto base = minimize_norm(prob, 0.01 * tol);
  if (!base.report.converged) throw ConvergenceError("min-norm extension did not converge");
  r.optimum = base.report.value;

  auto sample = [&](FaceMode mode) {
    const auto face = explore_optimal_face(prob, base, directions, tol, seed, exec, mode);
    if (!face.converged) throw ConvergenceError("optimal-face exploration did not converge");
    r.mode = mode;
    r.witnesses.clear();
    for (const auto& g : face.points) r.witnesses.push_back(make_extension(g, spec));
    r.diameter = 0.0;
    r.far_a = r.far_b = 0;
    for (std::size_t i = 0; i < r.witnesses.size(); ++i) {
      for (std::size_t j = i + 1; j < r.witnesses.size(); ++j) {
        const double d = dual_norm(Vector(r.witnesses[i].coeffs - r.witnesses[j].coeffs), spec);
        if (d > r.diameter) {
          r.diameter = d;
          r.far_a = i;
          r.far_b = j;
        }
      }
    }
  };
  sample(spec.is_polyhedral() ? FaceMode::push : FaceMode::tiebreak);
  if (r.mode == FaceMode::tiebreak && r.diameter > 10.0 * tol) sample(FaceMode::push);

  r.midpoint_dual_norm = dual_norm(
      Vector(0.5 * (r.witnesses[r.far_a].coeffs + r.witnesses[r.far_b].coeffs)), spec);
  return r;
}

Extension norming_functional(const Vector& x, const NormSpec& spec) {
  require_valid(x);
  spec.check_dim(static_cast<std::size_t>(x.size()));
  if (x.isZero(0.0)) throw DomainError("norming functional needs x != 0");
  if (auto ds = dual_spec(spec)) return make_extension(linear_max_over_ball(x, *ds).argpoint, spec);
  NormProblem prob;
  prob.spec = &spec;
  prob.side = Side::dual;
  prob.map = Matrix::Identity(x.size(), x.size());
  prob.shift = Vector::Zero(x.size());
  const auto rep = maximize_over_unit_ball(prob, x, 1e-11);
  if (!rep.converged) throw ConvergenceError("norming functional did not converge");
  return make_extension(rep.argpoint, spec);
}

}  // namespace convexlab

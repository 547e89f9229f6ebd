#include "convexlab/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>
#include <vector>

namespace convexlab {

using conic::Expr;

bool has_full_column_rank(const Matrix& M) {
  if (M.cols() == 0 || M.rows() < M.cols()) return false;
  Eigen::JacobiSVD<Matrix> svd(M);
  const auto& s = svd.singularValues();
  return s.size() > 0 && s[0] > 0.0 && s[s.size() - 1] > 1e-10 * s[0];
}

AffineSet::AffineSet(Matrix constraint_matrix, Vector rhs)
    : A_(std::move(constraint_matrix)), b_(std::move(rhs)) {
  if (A_.rows() != b_.size()) throw DimensionError("affine set: rhs length must match the row count");
  if (A_.cols() == 0) throw DomainError("affine set: ambient dimension must be >= 1");
  if (!A_.allFinite() || !b_.allFinite()) throw DomainError("affine set: non-finite data");
  if (A_.rows() > 0 && !has_full_column_rank(A_.transpose())) {
    throw DomainError("affine set: constraint matrix is rank-deficient");
  }
}

Vector AffineSet::particular_point() const {
  if (A_.rows() == 0) return Vector::Zero(A_.cols());
  return A_.transpose() * (A_ * A_.transpose()).ldlt().solve(b_);
}

double AffineSet::residual(const Vector& g) const {
  return A_.rows() ? (A_ * g - b_).cwiseAbs().maxCoeff() : 0.0;
}

std::optional<NormSpec> dual_spec(const NormSpec& spec) {
  if (auto* lp = spec.as_lp()) return NormSpec::lp(conjugate_exponent(lp->p));
  if (auto* ip = spec.as_inner()) {
    Matrix inv = ip->gram.ldlt().solve(Matrix::Identity(ip->gram.rows(), ip->gram.cols()));
    return NormSpec::inner(0.5 * (inv + inv.transpose()));
  }
  return std::nullopt;
}

namespace {

conic::Options options_for(double tol) {
  conic::Options o;
  o.gap_tol = std::max(0.1 * tol, 1e-13);
  return o;
}

// Hölder equality case for the ℓp ball.
Vector lp_maximizer(const Vector& g, double p) {
  const Eigen::Index n = g.size();
  Vector x = Vector::Zero(n);
  if (std::isinf(p)) {
    for (Eigen::Index i = 0; i < n; ++i) x[i] = g[i] > 0.0 ? 1.0 : -1.0;
    return x;
  }
  if (p == 1.0) {
    const double m = g.cwiseAbs().maxCoeff();
    std::vector<Vector> cands;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(g[i]) != m) continue;
      for (double s : {-1.0, 1.0}) {
        if (g[i] != 0.0 && s * g[i] < 0.0) continue;
        Vector e = Vector::Zero(n);
        e[i] = s;
        cands.push_back(std::move(e));
      }
    }
    return *std::min_element(cands.begin(), cands.end(), [](const Vector& a, const Vector& b) {
      return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    });
  }
  const double q = conjugate_exponent(p);
  const double gq = lp_norm(g, q);
  if (gq == 0.0) return x;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double a = std::abs(g[i]) / gq;
    x[i] = (g[i] < 0.0 ? -1.0 : 1.0) * std::pow(a, q - 1.0);
  }
  return x;
}

struct Built {
  conic::Program prog;
  conic::Epigraph epi;
  int c0 = 0;
  int t = 0;
};

// Variables: c (k), t (1), then epigraph auxiliaries. Deterministic layout so
// that programs built from the same NormProblem share variable indices.
Built build(const NormProblem& prob, const Expr* t_override = nullptr) {
  Built b;
  const int k = static_cast<int>(prob.num_coeffs());
  b.c0 = b.prog.add_vars(k);
  b.t = t_override ? -1 : b.prog.add_vars(1);
  const auto x = conic::affine_image(prob.map, b.c0, prob.shift);
  const Expr t = t_override ? *t_override : Expr::var(b.t);
  b.epi = prob.side == Side::primal ? conic::add_norm_epigraph(b.prog, *prob.spec, x, t)
                                    : conic::add_dual_norm_epigraph(b.prog, *prob.spec, x, t);
  for (Eigen::Index r = 0; r < prob.eq_matrix.rows(); ++r) {
    Expr e = Expr::value(-prob.eq_rhs[r]);
    for (Eigen::Index c = 0; c < prob.eq_matrix.cols(); ++c) {
      if (prob.eq_matrix(r, c) != 0.0) e += Expr::var(b.c0 + static_cast<int>(c), prob.eq_matrix(r, c));
    }
    b.prog.add_equality(std::move(e));
  }
  return b;
}

Vector feasible_coeffs(const NormProblem& prob) {
  if (prob.eq_matrix.rows() == 0) return Vector::Zero(prob.num_coeffs());
  const Matrix& A = prob.eq_matrix;
  return A.transpose() * (A * A.transpose()).ldlt().solve(prob.eq_rhs);
}

}  // namespace

double NormProblem::objective(const Vector& c) const {
  const Vector x = image(c);
  return side == Side::primal ? norm_eval(x, *spec) : dual_norm(x, *spec);
}

InteriorSolution minimize_norm(const NormProblem& prob, double tol, const Vector& linear) {
  Built b = build(prob);
  Expr obj = Expr::var(b.t);
  for (Eigen::Index i = 0; i < linear.size(); ++i) obj += Expr::var(b.c0 + static_cast<int>(i), linear[i]);
  b.prog.set_objective(std::move(obj));

  Vector z = Vector::Zero(b.prog.num_vars());
  const Vector c = feasible_coeffs(prob);
  const Vector x = prob.image(c);
  const double tv = 1.5 * b.epi.bound(x) + 1.0;
  z.segment(b.c0, c.size()) = c;
  z[b.t] = tv;
  b.epi.fill(z, x, tv);

  const auto res = conic::solve(b.prog, std::move(z), options_for(tol));
  InteriorSolution out;
  out.z = res.z;
  out.report.argpoint = res.z.segment(b.c0, prob.num_coeffs());
  out.report.iterations = res.newton_steps;
  const double epi_value = res.z[b.t];
  double value = epi_value;
  if (prob.side == Side::primal) value = norm_eval(prob.image(out.report.argpoint), *prob.spec);
  out.report.value = value;
  out.report.certified_gap = std::max(0.0, value - (epi_value - res.gap));
  out.report.converged = res.converged && out.report.certified_gap <= tol;
  return out;
}

SolveReport maximize_over_unit_ball(const NormProblem& prob, const Vector& g, double tol) {
  if (prob.eq_matrix.rows() != 0 || (prob.shift.size() && prob.shift.cwiseAbs().maxCoeff() != 0.0)) {
    throw DomainError("unit-ball maximization needs a linear map without constraints");
  }
  const Expr one = Expr::value(1.0);
  Built b = build(prob, &one);
  Expr obj;
  for (Eigen::Index i = 0; i < g.size(); ++i) obj += Expr::var(b.c0 + static_cast<int>(i), -g[i]);
  b.prog.set_objective(std::move(obj));
  Vector z = Vector::Zero(b.prog.num_vars());
  b.epi.fill(z, Vector::Zero(prob.map.rows()), 1.0);

  const auto res = conic::solve(b.prog, std::move(z), options_for(tol));
  SolveReport rep;
  rep.argpoint = res.z.segment(b.c0, prob.num_coeffs());
  rep.value = g.dot(rep.argpoint);
  rep.iterations = res.newton_steps;
  rep.certified_gap = res.gap;
  rep.converged = res.converged && res.gap <= tol;
  return rep;
}

SolveReport linear_max_over_ball(const Vector& g, const NormSpec& spec, double tol) {
  require_valid(g, "functional");
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  spec.check_dim(static_cast<std::size_t>(g.size()));
  SolveReport rep;
  rep.converged = true;
  if (auto* lp = spec.as_lp()) {
    rep.argpoint = lp_maximizer(g, lp->p);
    rep.value = lp_norm(g, conjugate_exponent(lp->p));
    return rep;
  }
  if (auto* ip = spec.as_inner()) {
    const Vector y = ip->gram.llt().solve(g);
    const double v = std::sqrt(std::max(0.0, g.dot(y)));
    rep.value = v;
    rep.argpoint = v > 0.0 ? Vector(y / v) : Vector(Vector::Zero(g.size()));
    return rep;
  }
  NormProblem prob;
  prob.spec = &spec;
  prob.map = Matrix::Identity(g.size(), g.size());
  prob.shift = Vector::Zero(g.size());
  return maximize_over_unit_ball(prob, g, tol);
}

double dual_norm(const Vector& g, const NormSpec& spec) {
  const auto rep = linear_max_over_ball(g, spec, kDefaultTol * 1e-2);
  if (!rep.converged) throw ConvergenceError("dual norm did not converge");
  return rep.value;
}

double bidual_norm(const Vector& v, const NormSpec& spec, double tol) {
  require_valid(v);
  if (v.size() > 16) throw DomainError("bidual_norm supports dimension <= 16");
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  NormProblem prob;
  prob.spec = &spec;
  prob.side = Side::dual;
  prob.map = Matrix::Identity(v.size(), v.size());
  prob.shift = Vector::Zero(v.size());
  const auto rep = maximize_over_unit_ball(prob, v, tol);
  if (!rep.converged) throw ConvergenceError("bidual norm did not converge");
  return rep.value;
}

SolveReport affine_min_norm(const AffineSet& aff, const NormSpec& spec, double tol) {
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  spec.check_dim(static_cast<std::size_t>(aff.dim()));
  const Matrix& A = aff.matrix();
  auto closed = [&](const Matrix& metric_inv) {
    SolveReport rep;
    const Matrix MAt = metric_inv * A.transpose();
    rep.argpoint = MAt * (A * MAt).ldlt().solve(aff.rhs());
    rep.value = norm_eval(rep.argpoint, spec);
    rep.converged = true;
    return rep;
  };
  if (auto* lp = spec.as_lp(); lp && lp->p == 2.0) return closed(Matrix::Identity(aff.dim(), aff.dim()));
  if (auto* ip = spec.as_inner()) {
    return closed(ip->gram.ldlt().solve(Matrix::Identity(aff.dim(), aff.dim())));
  }
  NormProblem prob;
  prob.spec = &spec;
  prob.map = Matrix::Identity(aff.dim(), aff.dim());
  prob.shift = Vector::Zero(aff.dim());
  prob.eq_matrix = A;
  prob.eq_rhs = aff.rhs();
  return minimize_norm(prob, tol).report;
}

FaceSample explore_optimal_face(const NormProblem& prob, const InteriorSolution& base,
                                std::size_t directions, double tol, std::uint64_t seed,
                                Exec exec, FaceMode mode) {
  const Eigen::Index k = prob.num_coeffs();
  if (directions < 1) throw DomainError("need at least one direction");
  std::vector<Vector> dirs;
  for (Eigen::Index i = 0; i < k && dirs.size() < directions; ++i) {
    dirs.push_back(Vector::Unit(k, i));
    if (dirs.size() < directions) dirs.push_back(-Vector::Unit(k, i));
  }
  for (std::size_t j = dirs.size(); j < directions; ++j) {
    auto rng = substream(seed, j);
    std::normal_distribution<double> normal;
    Vector d(k);
    for (auto& c : d) c = normal(rng);
    dirs.push_back(d / d.norm());
  }

  const double opt = base.report.value;
  const double scale = 1.0 + std::abs(opt);

  FaceSample out;
  out.mode = mode;
  out.points.resize(dirs.size());
  std::vector<char> ok(dirs.size(), 0);
  std::vector<int> solves(dirs.size(), 0);
  auto run = [&](std::size_t j) {
    double eta = mode == FaceMode::tiebreak ? 1e-3 * tol * scale : 1e-3 * scale;
    for (int attempt = 0; attempt < 16; ++attempt, eta *= 0.1) {
      const auto sol = minimize_norm(prob, 0.01 * tol, Vector(eta * dirs[j]));
      ++solves[j];
      out.points[j] = sol.report.argpoint;
      const bool on_face = mode == FaceMode::tiebreak || sol.report.value - opt <= tol;
      ok[j] = on_face && sol.report.certified_gap <= tol;
      if (on_face) break;
    }
  };
  if (exec == Exec::serial) {
    for (std::size_t j = 0; j < dirs.size(); ++j) run(j);
  } else {
    const auto nd = static_cast<std::int64_t>(dirs.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t j = 0; j < nd; ++j) run(static_cast<std::size_t>(j));
  }
  for (int c : solves) out.solves += c;
  out.converged = std::all_of(ok.begin(), ok.end(), [](char c) { return c != 0; });
  return out;
}

}  // namespace convexlab

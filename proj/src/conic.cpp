#include "convexlab/conic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace convexlab::conic {

double Expr::eval(const Vector& z) const {
  double v = constant;
  for (const auto& [i, c] : terms) v += c * z[i];
  return v;
}

Expr& Expr::operator+=(const Expr& o) {
  terms.insert(terms.end(), o.terms.begin(), o.terms.end());
  constant += o.constant;
  return *this;
}

Expr& Expr::operator-=(const Expr& o) {
  for (const auto& [i, c] : o.terms) terms.emplace_back(i, -c);
  constant -= o.constant;
  return *this;
}

Expr& Expr::operator*=(double s) {
  for (auto& term : terms) term.second *= s;
  constant *= s;
  return *this;
}

Expr operator+(Expr a, const Expr& b) { return a += b; }
Expr operator-(Expr a, const Expr& b) { return a -= b; }
Expr operator*(double s, Expr a) { return a *= s; }

ExprVec affine_image(const Matrix& M, int offset, const Vector& shift) {
  ExprVec out(static_cast<std::size_t>(M.rows()));
  for (Eigen::Index r = 0; r < M.rows(); ++r) {
    Expr e = Expr::value(shift.size() ? shift[r] : 0.0);
    for (Eigen::Index c = 0; c < M.cols(); ++c) {
      if (M(r, c) != 0.0) e.terms.emplace_back(offset + static_cast<int>(c), M(r, c));
    }
    out[static_cast<std::size_t>(r)] = std::move(e);
  }
  return out;
}

ExprVec variables(int offset, int n) {
  ExprVec out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.push_back(Expr::var(offset + i));
  return out;
}

int Program::add_vars(int k) {
  const int first = nvars_;
  nvars_ += k;
  return first;
}

namespace {

double cone_nu(const Cone& c) {
  switch (c.type) {
    case ConeType::nonneg:
      return 1.0;
    case ConeType::soc:
      return 2.0;
    case ConeType::power:
      return 3.0;
  }
  return 0.0;
}

// Barrier value, gradient and Hessian in the cone's own coordinates.
// Returns false outside the open cone.
bool cone_barrier(const Cone& c, const Vector& w, double* value, Vector* grad, Matrix* hess) {
  const Eigen::Index m = w.size();
  switch (c.type) {
    case ConeType::nonneg: {
      if (!(w[0] > 0.0)) return false;
      if (value) *value = -std::log(w[0]);
      if (grad) *grad = Vector::Constant(1, -1.0 / w[0]);
      if (hess) *hess = Matrix::Constant(1, 1, 1.0 / (w[0] * w[0]));
      return true;
    }
    case ConeType::soc: {
      const double s = w[0];
      const double vn = w.tail(m - 1).norm();
      if (!(s > vn)) return false;
      const double psi = (s - vn) * (s + vn);
      if (!(psi > 0.0)) return false;
      if (value) *value = -std::log(psi);
      Vector dpsi(m);
      dpsi[0] = 2.0 * s;
      dpsi.tail(m - 1) = -2.0 * w.tail(m - 1);
      if (grad) *grad = -dpsi / psi;
      if (hess) {
        Matrix h = dpsi * dpsi.transpose() / (psi * psi);
        h(0, 0) -= 2.0 / psi;
        for (Eigen::Index i = 1; i < m; ++i) h(i, i) += 2.0 / psi;
        *hess = std::move(h);
      }
      return true;
    }
    case ConeType::power: {
      const double r = w[0], s = w[1], x = w[2];
      if (!(r > 0.0 && s > 0.0)) return false;
      const double a = c.alpha, b = 1.0 - c.alpha;
      const double root = std::exp(a * std::log(r) + b * std::log(s));  // r^a s^b
      const double ax = std::abs(x);
      if (!(root > ax)) return false;
      const double psi = (root - ax) * (root + ax);
      if (!(psi > 0.0)) return false;
      const double p0 = root * root;
      if (value) *value = -std::log(psi) - b * std::log(r) - a * std::log(s);
      Vector dpsi(3);
      dpsi << 2.0 * a * p0 / r, 2.0 * b * p0 / s, -2.0 * x;
      if (grad) {
        Vector g = -dpsi / psi;
        g[0] -= b / r;
        g[1] -= a / s;
        *grad = std::move(g);
      }
      if (hess) {
        Matrix d2(3, 3);
        d2.setZero();
        d2(0, 0) = 2.0 * a * (2.0 * a - 1.0) * p0 / (r * r);
        d2(1, 1) = 2.0 * b * (2.0 * b - 1.0) * p0 / (s * s);
        d2(0, 1) = d2(1, 0) = 4.0 * a * b * p0 / (r * s);
        d2(2, 2) = -2.0;
        Matrix h = dpsi * dpsi.transpose() / (psi * psi) - d2 / psi;
        h(0, 0) += b / (r * r);
        h(1, 1) += a / (s * s);
        *hess = std::move(h);
      }
      return true;
    }
  }
  return false;
}

struct DenseCone {
  const Cone* cone;
  Matrix F;
  Vector g;
};

struct Dense {
  int n = 0;
  Vector c;
  Matrix A;
  Vector b;
  std::vector<DenseCone> cones;
  double nu = 0.0;
};

void scatter(const Expr& e, Matrix& m, Eigen::Index row) {
  for (const auto& [i, coef] : e.terms) m(row, i) += coef;
}

Dense densify(const Program& prog) {
  Dense d;
  d.n = prog.num_vars();
  Matrix c = Matrix::Zero(1, d.n);
  scatter(prog.objective(), c, 0);
  d.c = c.row(0).transpose();
  const auto& eqs = prog.equalities();
  d.A = Matrix::Zero(static_cast<Eigen::Index>(eqs.size()), d.n);
  d.b = Vector::Zero(static_cast<Eigen::Index>(eqs.size()));
  for (std::size_t r = 0; r < eqs.size(); ++r) {
    scatter(eqs[r], d.A, static_cast<Eigen::Index>(r));
    d.b[static_cast<Eigen::Index>(r)] = -eqs[r].constant;
  }
  for (const auto& cone : prog.cones()) {
    DenseCone dc{&cone, Matrix::Zero(static_cast<Eigen::Index>(cone.args.size()), d.n),
                 Vector::Zero(static_cast<Eigen::Index>(cone.args.size()))};
    for (std::size_t r = 0; r < cone.args.size(); ++r) {
      scatter(cone.args[r], dc.F, static_cast<Eigen::Index>(r));
      dc.g[static_cast<Eigen::Index>(r)] = cone.args[r].constant;
    }
    d.nu += cone_nu(cone);
    d.cones.push_back(std::move(dc));
  }
  return d;
}

bool barrier_value(const Dense& d, const Vector& z, double* value) {
  double total = 0.0;
  for (const auto& dc : d.cones) {
    double v = 0.0;
    if (!cone_barrier(*dc.cone, dc.F * z + dc.g, &v, nullptr, nullptr)) return false;
    total += v;
  }
  *value = total;
  return true;
}

void barrier_derivatives(const Dense& d, const Vector& z, Vector& grad, Matrix& hess) {
  grad.setZero(d.n);
  hess.setZero(d.n, d.n);
  Vector g;
  Matrix h;
  for (const auto& dc : d.cones) {
    cone_barrier(*dc.cone, dc.F * z + dc.g, nullptr, &g, &h);
    grad.noalias() += dc.F.transpose() * g;
    hess.noalias() += dc.F.transpose() * h * dc.F;
  }
}

}  // namespace

double Program::barrier_parameter() const {
  double nu = 0.0;
  for (const auto& c : cones_) nu += cone_nu(c);
  return nu;
}

bool Program::interior(const Vector& z) const {
  for (const auto& c : cones_) {
    Vector w(static_cast<Eigen::Index>(c.args.size()));
    for (std::size_t i = 0; i < c.args.size(); ++i) w[static_cast<Eigen::Index>(i)] = c.args[i].eval(z);
    if (!cone_barrier(c, w, nullptr, nullptr, nullptr)) return false;
  }
  return true;
}

Result solve(const Program& prog, Vector z0, const Options& opts) {
  const Dense d = densify(prog);
  if (z0.size() != d.n) throw DimensionError("initial point has the wrong number of variables");

  const Eigen::Index n = d.n;
  const Eigen::Index p = d.A.rows();

  // Equalities are eliminated: z = base + N y with N an orthonormal basis of
  // ker A, so every iterate satisfies A z = b to rounding.
  Matrix N = Matrix::Identity(n, n);
  Vector base = z0;
  if (p > 0) {
    Eigen::JacobiSVD<Matrix> svd(d.A, Eigen::ComputeFullV | Eigen::ComputeFullU);
    const auto& sv = svd.singularValues();
    const double cut = 1e-12 * std::max(1.0, sv.size() ? sv[0] : 0.0);
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv[rank] > cut) ++rank;
    N = svd.matrixV().rightCols(n - rank);
    base = z0 - svd.solve(Vector(d.A * z0 - d.b));
  }
  if (!prog.interior(base)) throw DomainError("initial point is not strictly inside every cone");

  const Eigen::Index m = N.cols();
  Vector y = Vector::Zero(m);
  auto point = [&](const Vector& yy) -> Vector { return base + N * yy; };

  Result res;
  double t = opts.t0;
  Vector grad;
  Matrix hess;

  while (true) {
    // Centering: minimize t·cᵀz + φ(z) over the affine set.
    double prev_dec = std::numeric_limits<double>::infinity();
    for (int inner = 0; inner < 100 && m > 0; ++inner) {
      if (res.newton_steps >= opts.max_newton) break;
      ++res.newton_steps;
      const Vector z = point(y);
      barrier_derivatives(d, z, grad, hess);
      grad += t * d.c;
      const Vector gy = N.transpose() * grad;
      const Matrix hy = N.transpose() * hess * N;
      Eigen::LDLT<Matrix> ldlt(hy);
      Vector dy = ldlt.solve(-gy);
      if (ldlt.info() != Eigen::Success || !dy.allFinite()) dy = hy.fullPivLu().solve(-gy);
      if (!dy.allFinite()) break;

      const double dec = -gy.dot(dy);
      if (dec / 2.0 <= 1e-12) break;
      // Rounding floor: the decrement has stopped shrinking.
      if (dec < 1e-7 && dec > 0.25 * prev_dec) break;
      prev_dec = dec;

      double step = 1.0;
      while (step > 1e-14 && !prog.interior(point(Vector(y + step * dy)))) step *= 0.5;
      double f0 = 0.0;
      barrier_value(d, z, &f0);
      f0 += t * d.c.dot(z);
      while (step > 1e-14) {
        const Vector trial = point(Vector(y + step * dy));
        double f1 = 0.0;
        if (barrier_value(d, trial, &f1)) {
          f1 += t * d.c.dot(trial);
          if (f1 <= f0 - 0.25 * step * dec + 1e-14 * std::abs(f0)) break;
        }
        step *= 0.5;
      }
      if (step <= 1e-14) break;
      y += step * dy;
    }
    res.gap = d.nu / t;
    if (res.gap <= opts.gap_tol || res.newton_steps >= opts.max_newton) break;
    t *= opts.mu;
  }

  res.z = point(y);
  res.objective = d.c.dot(res.z);
  res.converged = res.gap <= opts.gap_tol && res.newton_steps < opts.max_newton;
  if (p > 0) {
    barrier_derivatives(d, res.z, grad, hess);
    grad += t * d.c;
    // Stationarity t·c + ∇φ + Aᵀw = 0 in the least-squares sense.
    const Vector w = d.A.transpose().colPivHouseholderQr().solve(Vector(-grad));
    res.eq_multipliers = w / t;
  }
  return res;
}

// ---------------------------------------------------------------------------
// Epigraph builders.

namespace {

Epigraph lp_epigraph(Program& prog, double p, const ExprVec& x, const Expr& t) {
  const int n = static_cast<int>(x.size());
  if (std::isinf(p)) {
    for (const auto& xi : x) {
      prog.add_nonneg(t - xi);
      prog.add_nonneg(t + xi);
    }
    return {[](Vector&, const Vector&, double) {}, [](const Vector& v) { return lp_norm(v, kInf); }};
  }
  if (p == 1.0) {
    const int u = prog.add_vars(n);
    Expr total;
    for (int i = 0; i < n; ++i) {
      const Expr ui = Expr::var(u + i);
      prog.add_nonneg(ui - x[static_cast<std::size_t>(i)]);
      prog.add_nonneg(ui + x[static_cast<std::size_t>(i)]);
      total += ui;
    }
    prog.add_nonneg(t - total);
    return {[u, n](Vector& z, const Vector& v, double tv) {
              const double slack = (tv - lp_norm(v, 1.0)) / (2.0 * n);
              for (int i = 0; i < n; ++i) z[u + i] = std::abs(v[i]) + slack;
            },
            [](const Vector& v) { return lp_norm(v, 1.0); }};
  }
  if (p == 2.0) {
    ExprVec args{t};
    args.insert(args.end(), x.begin(), x.end());
    prog.add_cone({ConeType::soc, std::move(args)});
    return {[](Vector&, const Vector&, double) {}, [](const Vector& v) { return v.norm(); }};
  }
  // |xᵢ| ≤ rᵢ^(1/p) t^(1−1/p) with Σ rᵢ ≤ t.
  const int r = prog.add_vars(n);
  Expr total;
  for (int i = 0; i < n; ++i) {
    prog.add_cone({ConeType::power, {Expr::var(r + i), t, x[static_cast<std::size_t>(i)]}, 1.0 / p});
    total += Expr::var(r + i);
  }
  prog.add_nonneg(t - total);
  return {[r, n, p](Vector& z, const Vector& v, double tv) {
            double used = 0.0;
            for (int i = 0; i < n; ++i) used += std::pow(std::abs(v[i]) / tv, p) * tv;
            const double slack = (tv - used) / (2.0 * n);
            for (int i = 0; i < n; ++i) z[r + i] = std::pow(std::abs(v[i]) / tv, p) * tv + slack;
          },
          [p](const Vector& v) { return lp_norm(v, p); }};
}

Epigraph inner_epigraph(Program& prog, const Matrix& factor_t, const ExprVec& x, const Expr& t) {
  // ‖Fx‖₂ ≤ t where F is a square factor of the Gram matrix (or its inverse).
  ExprVec args{t};
  for (Eigen::Index r = 0; r < factor_t.rows(); ++r) {
    Expr e;
    for (Eigen::Index c = 0; c < factor_t.cols(); ++c) {
      if (factor_t(r, c) != 0.0) e += factor_t(r, c) * x[static_cast<std::size_t>(c)];
    }
    args.push_back(std::move(e));
  }
  prog.add_cone({ConeType::soc, std::move(args)});
  return {[](Vector&, const Vector&, double) {},
          [factor_t](const Vector& v) { return (factor_t * v).norm(); }};
}

}  // namespace

Epigraph add_norm_epigraph(Program& prog, const NormSpec& spec, const ExprVec& x, const Expr& t) {
  spec.check_dim(x.size());
  if (auto* lp = spec.as_lp()) return lp_epigraph(prog, lp->p, x, t);
  if (auto* ip = spec.as_inner()) return inner_epigraph(prog, ip->chol.transpose(), x, t);

  const auto& parts = spec.as_sum()->parts;
  const int k = static_cast<int>(parts.size());
  const int tk = prog.add_vars(k);
  std::vector<Epigraph> subs;
  Expr total;
  for (int i = 0; i < k; ++i) {
    subs.push_back(add_norm_epigraph(prog, parts[static_cast<std::size_t>(i)], x, Expr::var(tk + i)));
    total += Expr::var(tk + i);
  }
  prog.add_nonneg(t - total);
  return {[subs, tk, k](Vector& z, const Vector& v, double tv) {
            std::vector<double> need(static_cast<std::size_t>(k));
            double used = 0.0;
            for (int i = 0; i < k; ++i) used += need[static_cast<std::size_t>(i)] = subs[static_cast<std::size_t>(i)].bound(v);
            const double slack = (tv - used) / (2.0 * k);
            for (int i = 0; i < k; ++i) {
              const double ti = need[static_cast<std::size_t>(i)] + slack;
              z[tk + i] = ti;
              subs[static_cast<std::size_t>(i)].fill(z, v, ti);
            }
          },
          [subs](const Vector& v) {
            double s = 0.0;
            for (const auto& e : subs) s += e.bound(v);
            return s;
          }};
}

Epigraph add_dual_norm_epigraph(Program& prog, const NormSpec& spec, const ExprVec& x,
                                const Expr& t) {
  spec.check_dim(x.size());
  if (auto* lp = spec.as_lp()) return lp_epigraph(prog, conjugate_exponent(lp->p), x, t);
  if (auto* ip = spec.as_inner()) {
    // ‖g‖* = ‖L⁻¹g‖₂ for gram = L Lᵀ.
    const Matrix inv = ip->chol.triangularView<Eigen::Lower>().solve(
        Matrix::Identity(ip->chol.rows(), ip->chol.cols()));
    return inner_epigraph(prog, inv, x, t);
  }

  const auto& parts = spec.as_sum()->parts;
  const int k = static_cast<int>(parts.size());
  const int n = static_cast<int>(x.size());
  const int g0 = prog.add_vars(k * n);
  for (int j = 0; j < n; ++j) {
    Expr e = -1.0 * x[static_cast<std::size_t>(j)];
    for (int i = 0; i < k; ++i) e += Expr::var(g0 + i * n + j);
    prog.add_equality(std::move(e));
  }
  std::vector<Epigraph> subs;
  for (int i = 0; i < k; ++i) {
    subs.push_back(add_dual_norm_epigraph(prog, parts[static_cast<std::size_t>(i)],
                                          variables(g0 + i * n, n), t));
  }
  return {[subs, g0, k, n](Vector& z, const Vector& v, double tv) {
            const Vector share = v / static_cast<double>(k);
            for (int i = 0; i < k; ++i) {
              z.segment(g0 + i * n, n) = share;
              subs[static_cast<std::size_t>(i)].fill(z, share, tv);
            }
          },
          [subs, k](const Vector& v) {
            const Vector share = v / static_cast<double>(k);
            double m = 0.0;
            for (const auto& e : subs) m = std::max(m, e.bound(share));
            return m;
          }};
}

}  // namespace convexlab::conic

#include "convexlab/galerkin.hpp"

#include <array>
#include <cmath>

#include <Eigen/SparseCholesky>

namespace convexlab::galerkin {

namespace {

struct Rule {
  std::array<double, 5> x{};
  std::array<double, 5> w{};
  int n = 0;
};

// Gauss-Legendre on [-1, 1].
Rule gauss(int order) {
  switch (order) {
    case 1: return {{0.0}, {2.0}, 1};
    case 2: {
      const double a = 1.0 / std::sqrt(3.0);
      return {{-a, a}, {1.0, 1.0}, 2};
    }
    case 3: {
      const double a = std::sqrt(0.6);
      return {{-a, 0.0, a}, {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0}, 3};
    }
    case 4: {
      const double a = std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * std::sqrt(1.2));
      const double b = std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * std::sqrt(1.2));
      const double wa = (18.0 + std::sqrt(30.0)) / 36.0, wb = (18.0 - std::sqrt(30.0)) / 36.0;
      return {{-b, -a, a, b}, {wb, wa, wa, wb}, 4};
    }
    case 5: {
      const double a = std::sqrt(5.0 - 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
      const double b = std::sqrt(5.0 + 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
      const double wa = (322.0 + 13.0 * std::sqrt(70.0)) / 900.0;
      const double wb = (322.0 - 13.0 * std::sqrt(70.0)) / 900.0;
      return {{-b, -a, 0.0, a, b}, {wb, wa, 128.0 / 225.0, wa, wb}, 5};
    }
    default: throw DomainError("quadrature order must be 1..5");
  }
}

void require_nodal(const Mesh& mesh, const Vector& v) {
  if (static_cast<std::size_t>(v.size()) != mesh.n_elements() + 1) {
    throw DimensionError("nodal vector must have n_elements + 1 entries");
  }
}

}  // namespace

Mesh::Mesh(std::size_t n_elements) : n_(n_elements) {
  if (n_elements < 2) throw DomainError("mesh needs at least 2 elements");
}

double Mesh::node(std::size_t i) const {
  if (i > n_) throw DomainError("node index out of range");
  if (i == n_) return 1.0;
  return static_cast<double>(i) / static_cast<double>(n_);
}

System assemble(const Problem& problem, Exec exec) {
  const Mesh& m = problem.mesh;
  const Rule rule = gauss(problem.quadrature_order);
  const std::size_t ne = m.n_elements(), ni = m.n_interior();
  const double h = m.h();

  // Element e spans [x_e, x_{e+1}]; its load splits onto both end hats.
  std::vector<std::array<double, 2>> elem(ne);
  auto element = [&](std::size_t e) {
    const double a = m.node(e);
    std::array<double, 2> acc{0.0, 0.0};
    for (int q = 0; q < rule.n; ++q) {
      const double s = 0.5 * (rule.x[q] + 1.0);
      const double f = problem.load(a + s * h);
      acc[0] += rule.w[q] * f * (1.0 - s);
      acc[1] += rule.w[q] * f * s;
    }
    elem[e] = {0.5 * h * acc[0], 0.5 * h * acc[1]};
  };
  if (exec == Exec::serial) {
    for (std::size_t e = 0; e < ne; ++e) element(e);
  } else {
    const auto n = static_cast<std::int64_t>(ne);
#pragma omp parallel for schedule(static)
    for (std::int64_t e = 0; e < n; ++e) element(static_cast<std::size_t>(e));
  }

  System sys;
  sys.b = Vector::Zero(static_cast<Eigen::Index>(ni));
  for (std::size_t e = 0; e < ne; ++e) {
    if (!std::isfinite(elem[e][0]) || !std::isfinite(elem[e][1])) {
      throw DomainError("load is not finite at a quadrature point");
    }
    if (e >= 1) sys.b[static_cast<Eigen::Index>(e - 1)] += elem[e][0];
    if (e + 1 <= ni) sys.b[static_cast<Eigen::Index>(e)] += elem[e][1];
  }

  const double diag = 2.0 / h + 2.0 * h / 3.0, off = -1.0 / h + h / 6.0;
  std::vector<Eigen::Triplet<double>> t;
  for (std::size_t i = 0; i < ni; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    t.emplace_back(r, r, diag);
    if (i + 1 < ni) {
      t.emplace_back(r, r + 1, off);
      t.emplace_back(r + 1, r, off);
    }
  }
  sys.A.resize(static_cast<Eigen::Index>(ni), static_cast<Eigen::Index>(ni));
  sys.A.setFromTriplets(t.begin(), t.end());
  return sys;
}

Vector Solution::nodal() const {
  Vector v = Vector::Zero(static_cast<Eigen::Index>(mesh.n_elements() + 1));
  v.segment(1, coeffs.size()) = coeffs;
  return v;
}

double Solution::operator()(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("x must lie in [0,1]");
  if (x == 0.0 || x == 1.0) return 0.0;
  const Vector v = nodal();
  const double s = x / mesh.h();
  const auto e = std::min<std::size_t>(static_cast<std::size_t>(s), mesh.n_elements() - 1);
  const double t = (x - mesh.node(e)) / mesh.h();
  const auto i = static_cast<Eigen::Index>(e);
  return (1.0 - t) * v[i] + t * v[i + 1];
}

Solution solve_system(const Mesh& mesh, const System& sys) {
  Eigen::SimplicialLDLT<SparseMatrix> ldlt(sys.A);
  if (ldlt.info() != Eigen::Success) throw ConvergenceError("stiffness factorization failed");
  Solution s{mesh, ldlt.solve(sys.b)};
  return s;
}

Solution solve(const Problem& problem, Exec exec) {
  return solve_system(problem.mesh, assemble(problem, exec));
}

double l2_inner(const Mesh& mesh, const Vector& u, const Vector& v) {
  require_nodal(mesh, u);
  require_nodal(mesh, v);
  const double h = mesh.h();
  double s = 0.0;
  for (Eigen::Index e = 0; e + 1 < u.size(); ++e) {
    s += h / 6.0 * (2.0 * u[e] * v[e] + u[e] * v[e + 1] + u[e + 1] * v[e] + 2.0 * u[e + 1] * v[e + 1]);
  }
  return s;
}

double star_inner(const Mesh& mesh, const Vector& u, const Vector& v) {
  require_nodal(mesh, u);
  require_nodal(mesh, v);
  const double h = mesh.h();
  double s = 0.0;
  for (Eigen::Index e = 0; e + 1 < u.size(); ++e) s += (u[e + 1] - u[e]) * (v[e + 1] - v[e]) / h;
  return s + l2_inner(mesh, u, v);
}

double star_norm(const Mesh& mesh, const Vector& nodal) {
  require_nodal(mesh, nodal);
  const double h = mesh.h();
  double s = 0.0;
  for (Eigen::Index e = 0; e + 1 < nodal.size(); ++e) {
    const double a = nodal[e], b = nodal[e + 1];
    s += (b - a) * (b - a) / h + h * (a * a + a * b + b * b) / 3.0;
  }
  return std::sqrt(s);
}

double weak_residual(const Solution& sol, const Problem& problem) {
  if (!(sol.mesh == problem.mesh)) throw DomainError("solution and problem meshes differ");
  const System sys = assemble(problem);
  return (sys.A * sol.coeffs - sys.b).cwiseAbs().maxCoeff();
}

double cauchy_schwarz_check(const Mesh& mesh, const Vector& f, const Vector& phi) {
  return star_norm(mesh, f) * star_norm(mesh, phi) - l2_inner(mesh, f, phi);
}

Vector interpolate(const Mesh& mesh, const Function& g) {
  Vector v(static_cast<Eigen::Index>(mesh.n_elements() + 1));
  for (std::size_t i = 0; i <= mesh.n_elements(); ++i) v[static_cast<Eigen::Index>(i)] = g(mesh.node(i));
  return v;
}

double energy_error(const Solution& sol, const Function& u, const Function& du) {
  const Rule rule = gauss(5);
  const Vector v = sol.nodal();
  const double h = sol.mesh.h();
  double s = 0.0;
  for (std::size_t e = 0; e < sol.mesh.n_elements(); ++e) {
    const double a = sol.mesh.node(e);
    const auto i = static_cast<Eigen::Index>(e);
    const double slope = (v[i + 1] - v[i]) / h;
    for (int q = 0; q < rule.n; ++q) {
      const double t = 0.5 * (rule.x[q] + 1.0);
      const double x = a + t * h;
      const double eu = u(x) - ((1.0 - t) * v[i] + t * v[i + 1]);
      const double ed = du(x) - slope;
      s += 0.5 * h * rule.w[q] * (ed * ed + eu * eu);
    }
  }
  return std::sqrt(s);
}

std::vector<ErrorRow> convergence_study(const Function& f, const Function& u, const Function& du,
                                        const std::vector<std::size_t>& sizes, Exec exec) {
  if (sizes.empty()) throw DomainError("need at least one mesh size");
  std::vector<ErrorRow> rows;
  for (std::size_t n : sizes) {
    const Problem p{Mesh(n), f};
    const Solution s = solve(p, exec);
    ErrorRow r{n, energy_error(s, u, du), 1.0, 0.0};
    r.nodal_error = star_norm(s.mesh, Vector(interpolate(s.mesh, u) - s.nodal()));
    if (!rows.empty()) r.ratio = r.error / rows.back().error;
    rows.push_back(r);
  }
  return rows;
}

std::string error_table_csv(const std::vector<ErrorRow>& rows) {
  std::string out = "n,error,ratio\n";
  for (const auto& r : rows) out += std::to_string(r.n) + ',' + fmt9(r.error) + ',' + fmt9(r.ratio) + '\n';
  return out;
}

std::string solution_csv(const Solution& sol, std::size_t samples) {
  if (samples < 2) throw DomainError("need at least 2 samples");
  std::string out = "x,u_h\n";
  for (std::size_t i = 0; i < samples; ++i) {
    const double x = i + 1 == samples ? 1.0 : static_cast<double>(i) / static_cast<double>(samples - 1);
    out += fmt9(x) + ',' + fmt9(sol(x)) + '\n';
  }
  return out;
}

}  // namespace convexlab::galerkin

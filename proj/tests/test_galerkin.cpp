#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "convexlab/galerkin.hpp"

using namespace convexlab;
using namespace convexlab::galerkin;
using doctest::Approx;

namespace {

const double pi = std::numbers::pi;
double f_sin(double x) { return (1.0 + pi * pi) * std::sin(pi * x); }
double u_sin(double x) { return std::sin(pi * x); }
double du_sin(double x) { return pi * std::cos(pi * x); }

// ∫ f φ for the hat centred at c with half-width h, by composite Simpson.
double hat_load(const Function& f, double c, double h) {
  const int m = 20000;
  double s = 0.0;
  for (int i = 0; i <= m; ++i) {
    const double x = c - h + 2.0 * h * i / m;
    const double w = (i == 0 || i == m) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    s += w * f(x) * (1.0 - std::abs(x - c) / h);
  }
  return s * (2.0 * h / m) / 3.0;
}

}  // namespace

TEST_CASE("stiffness matrix entries") {
  const auto sys2 = assemble({Mesh(2), f_sin});
  REQUIRE(sys2.A.rows() == 1);
  CHECK(sys2.A.coeff(0, 0) == Approx(13.0 / 3.0).epsilon(1e-14));

  const auto sys4 = assemble({Mesh(4), f_sin});
  CHECK(sys4.A.coeff(0, 0) == Approx(8.0 + 1.0 / 6.0).epsilon(1e-14));
  CHECK(sys4.A.coeff(0, 1) == Approx(-95.0 / 24.0).epsilon(1e-14));
  CHECK(sys4.A.coeff(0, 2) == 0.0);
  const Eigen::MatrixXd A = sys4.A;
  CHECK((A - A.transpose()).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK(A.llt().info() == Eigen::Success);
}

TEST_CASE("load vector matches a high-resolution quadrature oracle") {
  const auto sys = assemble({Mesh(8), f_sin, 5});
  for (Eigen::Index i = 0; i < sys.b.size(); ++i) {
    CHECK(sys.b[i] == Approx(hat_load(f_sin, (i + 1) / 8.0, 1.0 / 8.0)).epsilon(1e-9));
  }
  CHECK(assemble({Mesh(8), [](double) { return 0.0; }}).b.isZero());
  CHECK_THROWS_AS(assemble({Mesh(8), f_sin, 6}), DomainError);
  CHECK_THROWS_AS(Mesh(1), DomainError);
}

TEST_CASE("parallel and serial assembly agree bit for bit") {
  const Problem p{Mesh(513), f_sin};
  CHECK(assemble(p, Exec::serial).b == assemble(p, Exec::parallel).b);
}

TEST_CASE("solutions of the manufactured problem") {
  const Problem p2{Mesh(2), f_sin};
  const auto s2 = solve(p2);
  const double b1 = hat_load(f_sin, 0.5, 0.5);
  CHECK(s2(0.5) == Approx(b1 / (13.0 / 3.0)).epsilon(1e-4));
  CHECK(solve({Mesh(2), f_sin, 5})(0.5) == Approx(b1 / (13.0 / 3.0)).epsilon(1e-8));
  CHECK(std::abs(s2(0.5) - 1.0) <= 0.1);

  const auto s64 = solve({Mesh(64), f_sin});
  CHECK(std::abs(s64(0.5) - 1.0) <= 1e-3);
  CHECK(s64(0.0) == 0.0);
  CHECK(s64(1.0) == 0.0);
  CHECK_THROWS_AS((void)s64(1.5), DomainError);

  const auto zero = solve({Mesh(16), [](double) { return 0.0; }});
  CHECK(zero.coeffs.isZero());
}

TEST_CASE("weak residual") {
  for (std::size_t n : {2u, 16u, 128u}) {
    const Problem p{Mesh(n), f_sin};
    const auto s = solve(p);
    CHECK(weak_residual(s, p) <= 1e-10 * (1.0 + assemble(p).b.cwiseAbs().maxCoeff()));
  }
  const Problem p{Mesh(16), f_sin};
  auto s = solve(p);
  s.coeffs[3] += 1e-3;
  CHECK(weak_residual(s, p) >= 1e-4);
  const Problem z{Mesh(16), [](double) { return 0.0; }};
  CHECK(weak_residual(solve(z), z) == 0.0);
  CHECK_THROWS_AS(weak_residual(solve(z), Problem{Mesh(8), f_sin}), DomainError);
}

TEST_CASE("star norm and inner products") {
  const Mesh m(2);
  Vector hat = Vector::Zero(3);
  hat[1] = 1.0;
  CHECK(star_norm(m, hat) == Approx(std::sqrt(13.0 / 3.0)).epsilon(1e-14));
  CHECK(star_norm(m, Vector::Zero(3)) == 0.0);

  const Mesh m16(16);
  const auto sys = assemble({m16, f_sin});
  std::mt19937_64 rng(2);
  std::normal_distribution<double> normal;
  for (int t = 0; t < 20; ++t) {
    Vector c(15);
    for (auto& x : c) x = normal(rng);
    Vector nodal = Vector::Zero(17);
    nodal.segment(1, 15) = c;
    CHECK(star_norm(m16, nodal) == Approx(std::sqrt(c.dot(sys.A * c))).epsilon(1e-12));
    CHECK(star_inner(m16, nodal, nodal) == Approx(c.dot(sys.A * c)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(star_norm(m16, Vector::Zero(5)), DimensionError);
}

TEST_CASE("Cauchy-Schwarz margin") {
  const Mesh m(16);
  std::mt19937_64 rng(8);
  std::normal_distribution<double> normal;
  for (int t = 0; t < 1000; ++t) {
    Vector f(17), phi(17);
    for (auto& x : f) x = normal(rng);
    for (auto& x : phi) x = normal(rng);
    CHECK(cauchy_schwarz_check(m, f, phi) >= -1e-10);
  }
  Vector f(17);
  for (auto& x : f) x = normal(rng);
  CHECK(cauchy_schwarz_check(m, f, f) >= 0.0);
  CHECK(cauchy_schwarz_check(m, Vector::Zero(17), f) == 0.0);
}

TEST_CASE("discrete solutions are reproduced exactly") {
  // Build b = A c for a known c, then solve: the consistency oracle.
  const Mesh m(32);
  const Problem p{m, f_sin};
  System sys = assemble(p);
  Vector c(31);
  for (Eigen::Index i = 0; i < c.size(); ++i) c[i] = std::sin(0.3 * static_cast<double>(i)) + 0.1;
  sys.b = sys.A * c;
  const auto s = solve_system(m, sys);
  CHECK((s.coeffs - c).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(star_norm(m, Vector(s.nodal() - interpolate(m, [&](double x) { return s(x); }))) <= 1e-10);
}

TEST_CASE("first-order convergence in the energy norm") {
  const auto rows = convergence_study(f_sin, u_sin, du_sin, {16, 32, 64, 128});
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].ratio == 1.0);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].ratio >= 0.45);
    CHECK(rows[i].ratio <= 0.55);
  }
  const auto same = convergence_study(f_sin, u_sin, du_sin, {16, 16});
  CHECK(same[1].ratio == 1.0);
  CHECK(error_table_csv(rows).rfind("n,error,ratio\n16,", 0) == 0);
  const auto csv = solution_csv(solve({Mesh(4), f_sin}), 3);
  CHECK(csv.rfind("x,u_h\n0,0\n0.5,", 0) == 0);
}

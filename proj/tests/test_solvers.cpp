#include <doctest.h>

#include <cmath>
#include <random>

#include "convexlab/solvers.hpp"

using namespace convexlab;
using doctest::Approx;

namespace {

Vector v(std::initializer_list<double> xs) { return make_vector(xs); }

NormProblem identity_problem(const NormSpec& spec, Eigen::Index n, Side side = Side::primal) {
  NormProblem p;
  p.spec = &spec;
  p.side = side;
  p.map = Matrix::Identity(n, n);
  p.shift = Vector::Zero(n);
  return p;
}

// Max of g·x over a fine parametrization of the l3 unit circle.
double l3_grid_oracle(const Vector& g) {
  double best = 0.0;
  const int steps = 62832;  // angular step 1e-4
  for (int i = 0; i < steps; ++i) {
    const double a = 2.0 * M_PI * i / steps;
    const double c = std::cos(a), s = std::sin(a);
    const double r = std::cbrt(std::abs(c * c * c) + std::abs(s * s * s));
    best = std::max(best, (g[0] * c + g[1] * s) / r);
  }
  return best;
}

// Vertex oracle for the l1 ball, sign oracle for the l-inf ball.
double vertex_oracle(const Vector& g) {
  double best = 0.0;
  for (Eigen::Index i = 0; i < g.size(); ++i) best = std::max(best, std::abs(g[i]));
  return best;
}
double sign_oracle(const Vector& g) {
  double best = -1e300;
  const auto n = static_cast<unsigned>(g.size());
  for (unsigned m = 0; m < (1u << n); ++m) {
    double s = 0.0;
    for (unsigned i = 0; i < n; ++i) s += ((m >> i) & 1u ? 1.0 : -1.0) * g[i];
    best = std::max(best, s);
  }
  return best;
}

}  // namespace

TEST_CASE("linear maximization over unit balls") {
  const double l3 = l3_grid_oracle(v({1, 1}));
  const auto rep3 = linear_max_over_ball(v({1, 1}), NormSpec::lp(3.0));
  CHECK(rep3.value == Approx(l3).epsilon(1e-7));
  CHECK(rep3.value == Approx(std::pow(2.0, 2.0 / 3.0)).epsilon(1e-12));

  const auto rep2 = linear_max_over_ball(v({3, 4}), NormSpec::lp(2.0));
  CHECK(rep2.value == Approx(5.0));
  CHECK(rep2.argpoint[0] == Approx(0.6));
  CHECK(rep2.argpoint[1] == Approx(0.8));

  const Vector g = v({1, 1, 0});
  CHECK(linear_max_over_ball(g, NormSpec::lp(1.0)).value == Approx(vertex_oracle(g)));
}

TEST_CASE("interior-point solve agrees with closed forms") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal;
  for (double p : {1.0, 1.5, 2.0, 3.0, kInf}) {
    const NormSpec spec = NormSpec::lp(p);
    for (int trial = 0; trial < 10; ++trial) {
      Vector g(4);
      for (auto& c : g) c = normal(rng);
      const double oracle = lp_norm(g, conjugate_exponent(p));
      const auto rep = maximize_over_unit_ball(identity_problem(spec, 4), g, 1e-10);
      REQUIRE(rep.converged);
      CHECK(rep.value == Approx(oracle).epsilon(1e-8));
      CHECK(norm_eval(rep.argpoint, spec) <= 1.0 + 1e-8);
    }
  }
}

TEST_CASE("dual norms") {
  const Vector g = v({1, -2, 3});
  CHECK(dual_norm(g, NormSpec::lp(1.0)) == Approx(vertex_oracle(g)));
  CHECK(dual_norm(g, NormSpec::lp(kInf)) == Approx(sign_oracle(g)));
  CHECK(dual_norm(Vector::Zero(3), NormSpec::lp(2.0)) == 0.0);
  // The dual of the l1+l2 sum is an infimal convolution; check it against
  // the defining supremum over random unit vectors.
  const NormSpec sum = NormSpec::sum({NormSpec::lp(1.0), NormSpec::lp(2.0)});
  const double d = dual_norm(g, sum);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> normal;
  double sampled = 0.0;
  for (int i = 0; i < 20000; ++i) {
    Vector x(3);
    for (auto& c : x) c = normal(rng);
    sampled = std::max(sampled, g.dot(x) / norm_eval(x, sum));
  }
  CHECK(d >= sampled - 1e-9);
  CHECK(d <= sampled * 1.01);
}

TEST_CASE("dual specs") {
  CHECK(dual_spec(NormSpec::lp(3.0))->as_lp()->p == Approx(1.5));
  CHECK(std::isinf(dual_spec(NormSpec::lp(1.0))->as_lp()->p));
  Matrix G(2, 2);
  G << 2, 0, 0, 8;
  const auto d = dual_spec(NormSpec::inner(G));
  CHECK(d->as_inner()->gram(1, 1) == Approx(0.125));
  CHECK_FALSE(dual_spec(NormSpec::sum({NormSpec::lp(1.0), NormSpec::lp(2.0)})).has_value());
}

TEST_CASE("bidual norm reproduces the norm") {
  CHECK(bidual_norm(v({1, -2, 3}), NormSpec::lp(1.0)) == Approx(6.0).epsilon(1e-7));
  CHECK(bidual_norm(v({3, 4}), NormSpec::lp(2.0)) == Approx(5.0).epsilon(1e-7));
  const NormSpec sum = NormSpec::sum({NormSpec::lp(1.0), NormSpec::lp(2.0)});
  std::mt19937_64 rng(9);
  std::normal_distribution<double> normal;
  for (int i = 0; i < 100; ++i) {
    Vector x(2 + i % 5);
    for (auto& c : x) c = normal(rng);
    const double n = norm_eval(x, sum);
    CHECK(std::abs(bidual_norm(x, sum) - n) <= 1e-5 * (1.0 + n));
  }
  CHECK_THROWS_AS(bidual_norm(Vector::Ones(17), NormSpec::lp(2.0)), DomainError);
}

TEST_CASE("affine minimum norm") {
  // min ‖g‖∞ s.t. g₂ = 1: value 1 on a square face.
  Matrix A(1, 3);
  A << 0, 1, 0;
  const auto face = affine_min_norm(AffineSet(A, v({1})), NormSpec::lp(kInf));
  CHECK(face.value == Approx(1.0).epsilon(1e-8));

  Matrix B(1, 2);
  B << 1, 1;
  const auto proj = affine_min_norm(AffineSet(B, v({2})), NormSpec::lp(2.0));
  CHECK(proj.value == Approx(std::sqrt(2.0)));
  CHECK(proj.argpoint[0] == Approx(1.0));

  // min ‖g‖₁ s.t. g₁ = g₂ = 1 in R⁴, brute force over a coarse grid of the free coordinates.
  Matrix C = Matrix::Zero(2, 4);
  C(0, 0) = 1;
  C(1, 1) = 1;
  double brute = 1e300;
  for (int a = -20; a <= 20; ++a) {
    for (int b = -20; b <= 20; ++b) brute = std::min(brute, 2.0 + std::abs(a * 0.1) + std::abs(b * 0.1));
  }
  const auto l1 = affine_min_norm(AffineSet(C, v({1, 1})), NormSpec::lp(1.0));
  CHECK(l1.value == Approx(brute).epsilon(1e-8));
  CHECK(l1.argpoint[2] == Approx(0.0).scale(1.0));
  CHECK(l1.argpoint[3] == Approx(0.0).scale(1.0));

  CHECK_THROWS_AS(AffineSet(Matrix::Zero(2, 3), v({1, 1})), DomainError);
}

TEST_CASE("optimal face exploration finds both ends of a flat face") {
  // min ‖(t, 1)‖∞ over t: every |t| ≤ 1 is optimal.
  const NormSpec linf = NormSpec::lp(kInf);
  NormProblem p;
  p.spec = &linf;
  p.map = v({1, 0});
  p.shift = v({0, 1});
  const auto base = minimize_norm(p, 1e-10);
  CHECK(base.report.value == Approx(1.0).epsilon(1e-9));
  const auto face = explore_optimal_face(p, base, 2, 1e-8, 0, Exec::serial, FaceMode::push);
  REQUIRE(face.points.size() == 2);
  CHECK(face.points[0][0] == Approx(-1.0).epsilon(1e-6));
  CHECK(face.points[1][0] == Approx(1.0).epsilon(1e-6));
  const auto par = explore_optimal_face(p, base, 2, 1e-8, 0, Exec::parallel, FaceMode::push);
  CHECK(par.points[0] == face.points[0]);
  CHECK(par.points[1] == face.points[1]);
}

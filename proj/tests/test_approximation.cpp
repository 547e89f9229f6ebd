#include <doctest.h>

#include <cmath>
#include <random>

#include "convexlab/approximation.hpp"

using namespace convexlab;
using doctest::Approx;

namespace {

Matrix col(std::initializer_list<double> xs) { return Matrix(make_vector(xs)); }
Vector v(std::initializer_list<double> xs) { return make_vector(xs); }

// Golden-section minimum of c -> ‖f - c·y‖ over [lo, hi].
double golden_min(const Vector& f, const Vector& y, const NormSpec& spec, double lo, double hi) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  auto obj = [&](double c) { return norm_eval(Vector(f - c * y), spec); };
  for (int i = 0; i < 200; ++i) {
    const double a = hi - r * (hi - lo), b = lo + r * (hi - lo);
    (obj(a) < obj(b) ? hi : lo) = (obj(a) < obj(b) ? b : a);
  }
  return obj(0.5 * (lo + hi));
}

}  // namespace

TEST_CASE("best approximation against closed forms") {
  const auto proj = best_approximation(v({3, 4}), Subspace(col({1, 0})), NormSpec::lp(2.0));
  CHECK(proj.distance == Approx(4.0));
  CHECK(proj.minimizer[0] == Approx(3.0));
  CHECK(proj.minimizer[1] == Approx(0.0).scale(1.0));
  CHECK(proj.uniqueness_diameter <= 1e-6);

  const NormSpec l4 = NormSpec::lp(4.0);
  const auto sym = best_approximation(v({1, 1}), Subspace(col({1, -1})), l4);
  const double oracle = golden_min(v({1, 1}), v({1, -1}), l4, -3, 3);
  CHECK(sym.distance == Approx(std::pow(2.0, 0.25)).epsilon(1e-8));
  CHECK(sym.distance == Approx(oracle).epsilon(1e-8));
  CHECK(sym.minimizer.cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("best approximation is unique for 1 < p < inf") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  for (double p : {1.5, 2.0, 3.0}) {
    const NormSpec spec = NormSpec::lp(p);
    for (int i = 0; i < 20; ++i) {
      const int n = 2 + i % 5, k = 1 + i % (n - 1);
      Matrix B(n, k);
      for (auto& c : B.reshaped()) c = normal(rng);
      Vector f(n);
      for (auto& c : f) c = normal(rng);
      const auto r = best_approximation(f, Subspace(B), spec, kDefaultTol, i);
      CHECK(r.uniqueness_diameter <= 1e-6);
      if (k == 1) {
        CHECK(r.distance == Approx(golden_min(f, B.col(0), spec, -50, 50)).epsilon(1e-7));
      }
    }
  }
}

TEST_CASE("flat norms admit several nearest points") {
  const NormSpec linf = NormSpec::lp(kInf);
  const auto a = nearest_point_uniqueness_check(v({0, 1}), Subspace(col({1, 0})), linf);
  CHECK_FALSE(a.unique);
  CHECK(a.result.distance == Approx(1.0).epsilon(1e-8));
  CHECK(a.result.uniqueness_diameter == Approx(2.0).epsilon(1e-6));
  CHECK(std::min(a.g[0], a.h[0]) == Approx(-1.0).epsilon(1e-6));
  CHECK(std::max(a.g[0], a.h[0]) == Approx(1.0).epsilon(1e-6));
  CHECK_FALSE(a.inconsistent);

  // ‖(2−c, 1−c)‖₁ is constant 1 on c ∈ [1,2].
  const NormSpec l1 = NormSpec::lp(1.0);
  for (double c : {1.0, 1.25, 1.5, 2.0}) REQUIRE(norm_eval(v({2 - c, 1 - c}), l1) == Approx(1.0));
  const auto b = nearest_point_uniqueness_check(v({2, 1}), Subspace(col({1, 1})), l1);
  CHECK_FALSE(b.unique);
  CHECK(b.result.distance == Approx(1.0).epsilon(1e-8));
  CHECK(std::min(b.g[0], b.h[0]) == Approx(1.0).epsilon(1e-6));
  CHECK(std::max(b.g[0], b.h[0]) == Approx(2.0).epsilon(1e-6));
  CHECK(b.midpoint_distance == Approx(1.0).epsilon(1e-8));
}

TEST_CASE("minimizer classification") {
  const NormSpec l2 = NormSpec::lp(2.0);
  const auto bad = classify_minimizers(v({0, 1}), l2, 1.0, v({-1, 0}), v({1, 0}), 1e-8);
  CHECK(bad.inconsistent);
  const NormSpec linf = NormSpec::lp(kInf);
  const auto ok = classify_minimizers(v({0, 1}), linf, 1.0, v({-1, 0}), v({1, 0}), 1e-8);
  CHECK_FALSE(ok.inconsistent);
  CHECK_FALSE(ok.unique);
}

TEST_CASE("best approximation rejects points inside the subspace") {
  CHECK_THROWS_AS(best_approximation(v({2, 2}), Subspace(col({1, 1})), NormSpec::lp(2.0)), DomainError);
}

TEST_CASE("csv row") {
  const NormSpec l2 = NormSpec::lp(2.0);
  const auto r = best_approximation(v({3, 4}), Subspace(col({1, 0})), l2);
  CHECK(approximation_csv_header() == "spec,dim,distance,diameter,minimizer\n");
  const std::string row = approximation_csv_row(l2, r);
  CHECK(row.find(",2,4,") != std::string::npos);
}

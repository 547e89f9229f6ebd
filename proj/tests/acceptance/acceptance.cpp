// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "convexlab/approximation.hpp"
#include "convexlab/convexity.hpp"
#include "convexlab/galerkin.hpp"
#include "convexlab/hahn_banach.hpp"
#include "convexlab/weak.hpp"

using namespace convexlab;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Vector gaussian(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> normal;
  Vector v(n);
  for (auto& c : v) c = normal(rng);
  return v;
}

Matrix gaussian(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c) {
  std::normal_distribution<double> normal;
  Matrix m(r, c);
  for (auto& x : m.reshaped()) x = normal(rng);
  return m;
}

// Random (n, k) with 2 ≤ n ≤ 6 and 1 ≤ k < n.
std::pair<int, int> random_shape(std::mt19937_64& rng) {
  const int n = std::uniform_int_distribution<int>(2, 6)(rng);
  return {n, std::uniform_int_distribution<int>(1, n - 1)(rng)};
}

Outcome euclidean_modulus() {
  const auto t0 = Clock::now();
  const NormSpec l2 = NormSpec::lp(2.0);
  double worst = 0.0;
  for (int i = 1; i <= 19; ++i) {
    const double eps = 0.1 * i;
    const auto m = midpoint_sup(l2, 2, eps, 20000, 0);
    worst = std::max(worst, std::abs(m.value - std::sqrt(1.0 - eps * eps / 4.0)));
  }
  const double t = seconds_since(t0);
  return {worst <= 1e-4 && t <= 60.0, fmt("worst error %.3g", worst) + fmt(", %.2f s", t)};
}

Outcome l1l2_sequence() {
  double worst = 0.0;
  bool ratios = true;
  for (std::size_t n : {1u, 8u, 10000u}) {
    const double N = static_cast<double>(n);
    const auto p = l1l2_pair(n);
    const double expected[] = {N + std::sqrt(N), N + std::sqrt(N), 2 * N + std::sqrt(2 * N),
                               N + std::sqrt(2 * N) / 2};
    const double got[] = {p.norm_x, p.norm_y, p.norm_diff, p.norm_mid};
    for (int i = 0; i < 4; ++i) worst = std::max(worst, std::abs(got[i] - expected[i]) / std::max(1.0, expected[i]));
    ratios = ratios && p.sep_ratio >= std::sqrt(2.0);
    if (n == 10000) ratios = ratios && p.mid_ratio > 0.99;
  }
  const auto big = l1l2_pair(10000);
  return {worst <= 1e-12 && ratios, fmt("worst relative error %.3g", worst) +
                                        fmt(", N=1e4 midpoint ratio %.6f", big.mid_ratio) +
                                        fmt(", separation ratio %.6f", big.sep_ratio)};
}

Outcome linf_not_strict() {
  const auto t0 = Clock::now();
  const NormSpec linf = NormSpec::lp(kInf);
  const auto v = strict_convexity_probe(linf, 3, 10000, 0);
  const double t = seconds_since(t0);
  const bool ok = v.violated && std::abs(norm_eval(v.x, linf) - 1.0) <= 1e-9 &&
                  std::abs(norm_eval(v.y, linf) - 1.0) <= 1e-9 &&
                  std::abs(norm_eval(Vector(0.5 * (v.x + v.y)), linf) - 1.0) <= 1e-9 && t <= 1.0;
  return {ok, "x=" + join_vector(v.x) + " y=" + join_vector(v.y) + fmt(", %.3f s", t)};
}

Outcome extension_not_unique() {
  Matrix U = Matrix::Zero(4, 1);
  U(1, 0) = 1.0;
  const NormSpec linf = NormSpec::lp(kInf);
  const auto r = extension_uniqueness_probe(Subspace(U), make_vector({1.0}), NormSpec::lp(1.0), 8);
  const Vector& a = r.witnesses[r.far_a].coeffs;
  const Vector& b = r.witnesses[r.far_b].coeffs;
  const bool ok = r.diameter >= 1.0 && std::abs(norm_eval(a, linf) - 1.0) <= 1e-8 &&
                  std::abs(norm_eval(b, linf) - 1.0) <= 1e-8;
  return {ok, fmt("diameter %.9g", r.diameter) + ", witnesses " + join_vector(a) + " and " + join_vector(b)};
}

Outcome extension_unique() {
  std::mt19937_64 rng(2024);
  double worst_diam = 0.0, worst_norm = 0.0;
  for (double p : {1.5, 2.0, 3.0}) {
    const NormSpec spec = NormSpec::lp(p);
    for (int i = 0; i < 100; ++i) {
      const auto [n, k] = random_shape(rng);
      const Matrix B = gaussian(rng, n, k);
      const Vector f = gaussian(rng, k);
      const Subspace U(B);
      const auto r = extension_uniqueness_probe(U, f, spec, 2 * static_cast<std::size_t>(n), kDefaultTol,
                                                static_cast<std::uint64_t>(i));
      worst_diam = std::max(worst_diam, r.diameter);
      const double fn = functional_norm_on_subspace(U, f, spec);
      for (const auto& w : r.witnesses) worst_norm = std::max(worst_norm, std::abs(dual_norm(w.coeffs, spec) - fn));
    }
  }
  return {worst_diam <= 1e-6 && worst_norm <= 1e-6,
          fmt("worst diameter %.3g", worst_diam) + fmt(", worst norm defect %.3g", worst_norm)};
}

Outcome bidual_isometry() {
  std::mt19937_64 rng(77);
  const std::vector<NormSpec> specs = {NormSpec::lp(1.0), NormSpec::lp(1.5), NormSpec::lp(2.0),
                                       NormSpec::lp(3.0), NormSpec::lp(kInf),
                                       NormSpec::sum({NormSpec::lp(1.0), NormSpec::lp(2.0)})};
  double worst = 0.0;
  int count = 0;
  for (const auto& spec : specs) {
    for (int d = 2; d <= 8; ++d) {
      for (int i = 0; i < 100; ++i) {
        const Vector v = gaussian(rng, d);
        const double n = norm_eval(v, spec);
        worst = std::max(worst, std::abs(bidual_norm(v, spec) - n) / (1.0 + n));
        ++count;
      }
    }
  }
  return {worst <= 1e-5, fmt("worst relative defect %.3g", worst) + fmt(" over %.0f vectors", count)};
}

Outcome riesz_radon() {
  bool ok = true;
  std::string detail;
  for (double p : {1.5, 2.0, 3.0}) {
    const auto r = riesz_radon_check(SequenceFamily::decaying_tail(SparseSeq::unit(1)),
                                     FunctionalFamily::standard(conjugate_exponent(p), 0), SparseSeq::unit(1),
                                     NormSpec::lp(p), 1e-12, 200);
    ok = ok && r.status == UpgradeStatus::holds && !r.doubling_ratios.empty();
    for (double q : r.doubling_ratios) ok = ok && q >= 0.45 && q <= 0.55;
    detail += fmt("p=%g ", p) + to_string(r.status) + fmt(" (ratio %.4f); ", r.doubling_ratios.back());
  }
  const auto inf = riesz_radon_check(SequenceFamily::moving_spike(SparseSeq::unit(1)),
                                     FunctionalFamily::standard(1.0, 0), SparseSeq::unit(1), NormSpec::lp(kInf),
                                     1e-12, 200);
  double worst = 0.0;
  for (std::size_t i = 1; i < inf.rows.size(); ++i) worst = std::max(worst, std::abs(inf.rows[i].distance - 1.0));
  ok = ok && inf.status == UpgradeStatus::fails && worst <= 1e-12;
  return {ok, detail + "l-inf " + to_string(inf.status) + fmt(" (distance defect %.3g)", worst)};
}

Outcome unit_vector_distances() {
  const NormSpec l2 = NormSpec::lp(2.0);
  double worst = 0.0;
  for (std::size_t i = 1; i <= 50; ++i) {
    for (std::size_t j = i + 1; j <= 50; ++j) {
      worst = std::max(worst, std::abs(norm_eval(SparseSeq::unit(i) - SparseSeq::unit(j), l2) - std::sqrt(2.0)));
    }
  }
  return {worst <= 1e-12, fmt("worst deviation from sqrt(2) %.3g", worst)};
}

Outcome best_approximation_dichotomy() {
  std::mt19937_64 rng(99);
  double worst = 0.0;
  for (double p : {1.5, 2.0, 3.0}) {
    const NormSpec spec = NormSpec::lp(p);
    for (int i = 0; i < 1000; ++i) {
      const auto [n, k] = random_shape(rng);
      const Matrix B = gaussian(rng, n, k);
      const Vector f = gaussian(rng, n);
      const auto r = best_approximation(f, Subspace(B), spec, kDefaultTol, static_cast<std::uint64_t>(i));
      worst = std::max(worst, r.uniqueness_diameter);
    }
  }
  const auto inf = nearest_point_uniqueness_check(make_vector({0, 1}), Subspace(Matrix(make_vector({1, 0}))),
                                                  NormSpec::lp(kInf));
  const bool inf_ok = !inf.unique && std::abs(inf.result.uniqueness_diameter - 2.0) <= 1e-6 &&
                      std::abs(std::min(inf.g[0], inf.h[0]) + 1.0) <= 1e-6 &&
                      std::abs(std::max(inf.g[0], inf.h[0]) - 1.0) <= 1e-6;
  const auto one = nearest_point_uniqueness_check(make_vector({2, 1}), Subspace(Matrix(make_vector({1, 1}))),
                                                  NormSpec::lp(1.0));
  const bool one_ok = !one.unique && std::abs(std::min(one.g[0], one.h[0]) - 1.0) <= 1e-6 &&
                      std::abs(std::max(one.g[0], one.h[0]) - 2.0) <= 1e-6 &&
                      std::abs(one.result.distance - 1.0) <= 1e-8;
  return {worst <= 1e-6 && inf_ok && one_ok,
          fmt("worst random diameter %.3g", worst) + "; l-inf witnesses " + join_vector(inf.g) + " and " +
              join_vector(inf.h) + "; l1 witnesses " + join_vector(one.g) + " and " + join_vector(one.h)};
}

Outcome galerkin_convergence() {
  const auto t0 = Clock::now();
  const double pi = std::acos(-1.0);
  const galerkin::Function f = [pi](double x) { return (1.0 + pi * pi) * std::sin(pi * x); };
  const galerkin::Function u = [pi](double x) { return std::sin(pi * x); };
  const galerkin::Function du = [pi](double x) { return pi * std::cos(pi * x); };
  double worst_res = 0.0;
  for (std::size_t n : {16u, 32u, 64u, 128u}) {
    const galerkin::Problem p{galerkin::Mesh(n), f};
    const auto b = galerkin::assemble(p).b.cwiseAbs().maxCoeff();
    worst_res = std::max(worst_res, galerkin::weak_residual(galerkin::solve(p), p) / (1.0 + b));
  }
  const auto rows = galerkin::convergence_study(f, u, du, {16, 32, 64, 128});
  bool ok = worst_res <= 1e-10;
  std::string ratios;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    ok = ok && rows[i].ratio >= 0.45 && rows[i].ratio <= 0.55;
    ratios += fmt(" %.5f", rows[i].ratio);
  }
  const double t = seconds_since(t0);
  return {ok && t <= 10.0, fmt("scaled residual %.3g, ratios", worst_res) + ratios + fmt(", %.2f s", t)};
}

Outcome property_suites() {
  constexpr int kTrials = 100000;
  const std::vector<NormSpec> specs = {NormSpec::lp(1.0), NormSpec::lp(1.5), NormSpec::lp(2.0), NormSpec::lp(3.0),
                                       NormSpec::lp(kInf), NormSpec::sum({NormSpec::lp(1.0), NormSpec::lp(2.0)})};
  bool convex = true;
  for (std::size_t s = 0; s < specs.size(); ++s) convex = convex && !ball_convexity_probe(specs[s], 3, kTrials, s);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> scale(-10.0, 10.0);
  double tri = 0.0, homog = 0.0;
  for (const auto& spec : specs) {
    for (int i = 0; i < kTrials; ++i) {
      const Vector x = gaussian(rng, 4), y = gaussian(rng, 4);
      const double nx = norm_eval(x, spec), ny = norm_eval(y, spec);
      tri = std::min(tri, triangle_defect(x, y, spec) / (nx + ny));
      const double a = scale(rng);
      homog = std::max(homog, std::abs(norm_eval(Vector(a * x), spec) - std::abs(a) * nx) / (1.0 + std::abs(a) * nx));
    }
  }

  Matrix G = gaussian(rng, 4, 4);
  G = G * G.transpose() + Matrix::Identity(4, 4);
  const std::vector<NormSpec> inner = {NormSpec::lp(2.0), NormSpec::inner(G)};
  double para = 0.0;
  for (const auto& spec : inner) {
    for (int i = 0; i < kTrials; ++i) {
      const Vector x = gaussian(rng, 4), y = gaussian(rng, 4);
      const double s = norm_eval(x, spec) + norm_eval(y, spec);
      para = std::max(para, std::abs(parallelogram_defect(x, y, spec)) / (s * s));
    }
  }
  const bool ok = convex && tri >= -1e-12 && homog <= 1e-12 && para <= 1e-12;
  return {ok, std::string(convex ? "no chord leaves any ball" : "chord left a ball") +
                  fmt(", min triangle defect %.3g", tri) + fmt(", homogeneity %.3g", homog) +
                  fmt(", parallelogram %.3g", para)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"euclidean modulus of convexity", euclidean_modulus},
      {"l1+l2 sequence pair", l1l2_sequence},
      {"l-inf is not strictly convex", linf_not_strict},
      {"non-unique extension in l1", extension_not_unique},
      {"unique extensions in lp", extension_unique},
      {"bidual isometry", bidual_isometry},
      {"Riesz-Radon upgrade", riesz_radon},
      {"unit vectors are sqrt(2) apart", unit_vector_distances},
      {"best approximation dichotomy", best_approximation_dichotomy},
      {"Galerkin convergence", galerkin_convergence},
      {"norm property suites", property_suites},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}

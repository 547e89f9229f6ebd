#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "convexlab/norm.hpp"
#include "convexlab/vector.hpp"

namespace convexlab {

/// n ↦ x_n for n = 1..n_max.
struct SequenceFamily {
  std::function<SparseSeq(std::size_t)> generator;
  std::size_t n_max = 200;
  std::string name;

  [[nodiscard]] SparseSeq term(std::size_t n) const;

  /// e_n
  static SequenceFamily unit_vectors(std::size_t n_max = 200);
  /// x + (c/n) e_n
  static SequenceFamily decaying_tail(SparseSeq x, double c = 1.0, std::size_t n_max = 200);
  /// x + e_n
  static SequenceFamily moving_spike(SparseSeq x, std::size_t n_max = 200);
  /// Cycles through the given terms: x_n = terms[(n-1) mod size].
  static SequenceFamily cycle(std::vector<SparseSeq> terms, std::size_t n_max = 200);
};

/// Finite set of functionals, each a finitely supported coefficient sequence
/// meant to lie in ℓq.
struct FunctionalFamily {
  std::vector<SparseSeq> members;
  std::vector<std::string> ids;
  double q = 2.0;

  /// e_1..e_k
  static FunctionalFamily coordinates(std::size_t k, double q = 2.0);
  /// e_1..e_20 plus 10 random vectors supported in 1..50.
  static FunctionalFamily standard(double q, std::uint64_t seed);

  [[nodiscard]] std::string label() const;
};

/// ⟨g, x_n⟩ for n = 1..n_max.
std::vector<double> pairing_trace(const SequenceFamily& fam, const SparseSeq& g, std::size_t n_max);

struct WeakVerdict {
  bool pass = false;
  /// Smallest N with every deviation ≤ tol for N ≤ n ≤ n_max (n_max + 1 if none).
  std::size_t settle_index = 0;
  std::size_t worst_functional = 0;
  double worst_deviation = 0.0;  ///< over n ≥ n_max/2
  std::string family;
};

/// Deviations |⟨g,x_n⟩ − ⟨g,candidate⟩| over the family. Passes when they stay
/// ≤ tol from some N ≤ n_max/2 on, so the settled tail is at least half the
/// trace. Only the listed functionals are tested.
WeakVerdict weak_limit_check(const SequenceFamily& fam, const FunctionalFamily& family,
                             const SparseSeq& candidate, double tol, std::size_t n_max);

enum class UpgradeStatus { holds, fails, inconclusive };
const char* to_string(UpgradeStatus s);

struct UpgradeRow {
  std::size_t n;
  double pairing_deviation;
  double norm_deviation;
  double distance;
};

struct RieszRadonReport {
  UpgradeStatus status = UpgradeStatus::inconclusive;
  WeakVerdict weak;
  bool norms_converge = false;
  bool distance_converges = false;
  std::vector<UpgradeRow> rows;
  /// distance(2n)/distance(n) at n = n_max/8, n_max/4, n_max/2.
  std::vector<double> doubling_ratios;
};

/// Checks that weak convergence plus ‖x_n‖ → ‖candidate‖ upgrade to
/// ‖x_n − candidate‖ → 0. Hypotheses failing gives inconclusive.
RieszRadonReport riesz_radon_check(const SequenceFamily& fam, const FunctionalFamily& family,
                                   const SparseSeq& candidate, const NormSpec& spec, double tol,
                                   std::size_t n_max);

/// Empirical "a_n → 0" on a trace: the last value is ≤ tol, or the second half
/// never increases and ends at most 0.6 of where it started.
bool tends_to_zero(const std::vector<double>& a, double tol);

enum class CauchyStatus { pass, vacuous, non_uniform_witness, inconsistent };
const char* to_string(CauchyStatus s);

struct CauchyProbe {
  double eps;
  double delta;           ///< 1 − midpoint supremum at eps
  bool premise = false;   ///< tail midpoints ≥ 1 − δ
  bool conclusion = false;  ///< tail distances ≤ eps
};

struct CauchyReport {
  CauchyStatus status = CauchyStatus::vacuous;
  double min_tail_midpoint = 0.0;
  double max_tail_distance = 0.0;
  std::vector<CauchyProbe> probes;
};

/// Midpoint-to-Cauchy check on the tail n, m ∈ [n_max/2, n_max]. For each ε
/// the modulus estimate gives δ(ε); if every tail midpoint norm is ≥ 1 − δ(ε)
/// then every tail distance should be ≤ ε. A failure with δ(ε) ≤ 1e-6 exhibits
/// a norm that is not uniformly convex; with δ(ε) > 1e-6 it would contradict
/// the lemma and is reported as inconsistent. Terms must be unit vectors.
CauchyReport midpoint_cauchy_check(const SequenceFamily& fam, const NormSpec& spec, double tol,
                                   std::size_t n_max,
                                   const std::vector<double>& eps_grid = {0.05, 0.1, 0.2, 0.5, 1.0},
                                   std::uint64_t seed = 0);

/// Columns n, functional_id, pairing, norm_xn, distance_to_candidate.
std::string trace_csv(const SequenceFamily& fam, const FunctionalFamily& family,
                      const SparseSeq& candidate, const NormSpec& spec, std::size_t n_max);

}  // namespace convexlab

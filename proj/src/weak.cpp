#include "convexlab/weak.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "convexlab/convexity.hpp"

namespace convexlab {

SparseSeq SequenceFamily::term(std::size_t n) const {
  if (n < 1 || n > n_max) throw DomainError("sequence index out of range");
  return generator(n);
}

SequenceFamily SequenceFamily::unit_vectors(std::size_t n_max) {
  return {[](std::size_t n) { return SparseSeq::unit(n); }, n_max, "e_n"};
}

SequenceFamily SequenceFamily::decaying_tail(SparseSeq x, double c, std::size_t n_max) {
  return {[x = std::move(x), c](std::size_t n) {
            return x + (c / static_cast<double>(n)) * SparseSeq::unit(n);
          },
          n_max, "x+c/n*e_n"};
}

SequenceFamily SequenceFamily::moving_spike(SparseSeq x, std::size_t n_max) {
  return {[x = std::move(x)](std::size_t n) { return x + SparseSeq::unit(n); }, n_max, "x+e_n"};
}

SequenceFamily SequenceFamily::cycle(std::vector<SparseSeq> terms, std::size_t n_max) {
  if (terms.empty()) throw DomainError("cycle needs at least one term");
  return {[t = std::move(terms)](std::size_t n) { return t[(n - 1) % t.size()]; }, n_max, "cycle"};
}

FunctionalFamily FunctionalFamily::coordinates(std::size_t k, double q) {
  FunctionalFamily f;
  f.q = q;
  for (std::size_t i = 1; i <= k; ++i) {
    f.members.push_back(SparseSeq::unit(i));
    f.ids.push_back("e" + std::to_string(i));
  }
  return f;
}

FunctionalFamily FunctionalFamily::standard(double q, std::uint64_t seed) {
  FunctionalFamily f = coordinates(20, q);
  for (std::uint64_t r = 0; r < 10; ++r) {
    auto rng = substream(seed, r);
    std::uniform_int_distribution<std::size_t> len(1, 10), idx(1, 50);
    std::normal_distribution<double> normal;
    std::vector<std::size_t> support;
    const std::size_t m = len(rng);
    while (support.size() < m) {
      const std::size_t i = idx(rng);
      if (std::find(support.begin(), support.end(), i) == support.end()) support.push_back(i);
    }
    std::sort(support.begin(), support.end());
    std::vector<SparseSeq::Entry> e;
    for (std::size_t i : support) e.push_back({i, normal(rng)});
    f.members.emplace_back(std::move(e));
    f.ids.push_back("r" + std::to_string(r + 1));
  }
  return f;
}

std::string FunctionalFamily::label() const {
  std::string s;
  for (std::size_t i = 0; i < ids.size(); ++i) s += (i ? " " : "") + ids[i];
  return s;
}

std::vector<double> pairing_trace(const SequenceFamily& fam, const SparseSeq& g, std::size_t n_max) {
  if (n_max > fam.n_max) throw DomainError("n_max exceeds the family cap");
  std::vector<double> out;
  out.reserve(n_max);
  for (std::size_t n = 1; n <= n_max; ++n) out.push_back(pairing(g, fam.term(n)));
  return out;
}

namespace {

void check_nmax(const SequenceFamily& fam, std::size_t n_max) {
  if (n_max < 2) throw DomainError("n_max must be >= 2");
  if (n_max > fam.n_max) throw DomainError("n_max exceeds the family cap");
}

}  // namespace

WeakVerdict weak_limit_check(const SequenceFamily& fam, const FunctionalFamily& family,
                             const SparseSeq& candidate, double tol, std::size_t n_max) {
  check_nmax(fam, n_max);
  if (family.members.empty()) throw DomainError("functional family is empty");
  if (!(tol >= 0.0)) throw DomainError("tolerance must be nonnegative");
  const std::size_t K = family.members.size();
  std::vector<double> target(K);
  for (std::size_t k = 0; k < K; ++k) target[k] = pairing(family.members[k], candidate);

  WeakVerdict v;
  v.family = family.label();
  v.settle_index = n_max + 1;
  std::vector<double> tail_worst(K, 0.0);
  bool settled = true;
  for (std::size_t n = n_max; n >= 1; --n) {
    const SparseSeq x = fam.term(n);
    double worst = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      const double d = std::abs(pairing(family.members[k], x) - target[k]);
      worst = std::max(worst, d);
      if (2 * n >= n_max) tail_worst[k] = std::max(tail_worst[k], d);
    }
    settled = settled && worst <= tol;
    if (settled) v.settle_index = n;
  }
  for (std::size_t k = 0; k < K; ++k) {
    if (tail_worst[k] > v.worst_deviation) {
      v.worst_deviation = tail_worst[k];
      v.worst_functional = k;
    }
  }
  v.pass = 2 * v.settle_index <= n_max;
  return v;
}

const char* to_string(UpgradeStatus s) {
  switch (s) {
    case UpgradeStatus::holds: return "holds";
    case UpgradeStatus::fails: return "fails";
    case UpgradeStatus::inconclusive: return "inconclusive";
  }
  return "?";
}

bool tends_to_zero(const std::vector<double>& a, double tol) {
  if (a.empty()) return false;
  if (a.back() <= tol) return true;
  const std::size_t h = a.size() / 2;
  for (std::size_t i = h; i + 1 < a.size(); ++i) {
    if (a[i + 1] > a[i] + tol) return false;
  }
  return a.back() <= 0.6 * a[h];
}

RieszRadonReport riesz_radon_check(const SequenceFamily& fam, const FunctionalFamily& family,
                                   const SparseSeq& candidate, const NormSpec& spec, double tol,
                                   std::size_t n_max) {
  if (!spec.acts_on_sequences()) throw DomainError("spec must be an lp norm or a sum of lp norms");
  RieszRadonReport r;
  r.weak = weak_limit_check(fam, family, candidate, tol, n_max);
  const double cand_norm = norm_eval(candidate, spec);
  std::vector<double> target;
  for (const auto& g : family.members) target.push_back(pairing(g, candidate));

  std::vector<double> norm_dev, dist;
  for (std::size_t n = 1; n <= n_max; ++n) {
    const SparseSeq x = fam.term(n);
    UpgradeRow row{n, 0.0, 0.0, 0.0};
    for (std::size_t k = 0; k < family.members.size(); ++k) {
      row.pairing_deviation = std::max(row.pairing_deviation,
                                       std::abs(pairing(family.members[k], x) - target[k]));
    }
    row.norm_deviation = std::abs(norm_eval(x, spec) - cand_norm);
    row.distance = norm_eval(x - candidate, spec);
    norm_dev.push_back(row.norm_deviation);
    dist.push_back(row.distance);
    r.rows.push_back(row);
  }
  for (std::size_t n : {n_max / 8, n_max / 4, n_max / 2}) {
    if (n >= 1 && dist[n - 1] > 0.0) r.doubling_ratios.push_back(dist[2 * n - 1] / dist[n - 1]);
  }
  r.norms_converge = tends_to_zero(norm_dev, tol);
  r.distance_converges = tends_to_zero(dist, tol);
  if (!r.weak.pass || !r.norms_converge) r.status = UpgradeStatus::inconclusive;
  else r.status = r.distance_converges ? UpgradeStatus::holds : UpgradeStatus::fails;
  return r;
}

const char* to_string(CauchyStatus s) {
  switch (s) {
    case CauchyStatus::pass: return "pass";
    case CauchyStatus::vacuous: return "vacuous";
    case CauchyStatus::non_uniform_witness: return "non_uniform_witness";
    case CauchyStatus::inconsistent: return "inconsistent";
  }
  return "?";
}

CauchyReport midpoint_cauchy_check(const SequenceFamily& fam, const NormSpec& spec, double tol,
                                   std::size_t n_max, const std::vector<double>& eps_grid,
                                   std::uint64_t seed) {
  check_nmax(fam, n_max);
  if (!spec.acts_on_sequences()) throw DomainError("spec must be an lp norm or a sum of lp norms");
  std::vector<SparseSeq> terms;
  std::size_t support = 2;
  for (std::size_t n = 1; n <= n_max; ++n) {
    terms.push_back(fam.term(n));
    if (std::abs(norm_eval(terms.back(), spec) - 1.0) > 1e-9) {
      throw DomainError("term " + std::to_string(n) + " is not a unit vector");
    }
  }
  CauchyReport r;
  r.min_tail_midpoint = 1.0;
  const std::size_t lo = std::max<std::size_t>(1, n_max / 2);
  for (std::size_t i = lo; i <= n_max; ++i) {
    support = std::max(support, terms[i - 1].max_index());
    for (std::size_t j = i + 1; j <= n_max; ++j) {
      const auto& a = terms[i - 1];
      const auto& b = terms[j - 1];
      r.min_tail_midpoint = std::min(r.min_tail_midpoint, norm_eval(0.5 * (a + b), spec));
      r.max_tail_distance = std::max(r.max_tail_distance, norm_eval(a - b, spec));
    }
  }

  const auto curve = modulus_curve(spec, std::min<std::size_t>(support, 8), eps_grid, 4000, seed);
  bool any_premise = false, witness = false, bad = false;
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    CauchyProbe p{eps_grid[i], 1.0 - curve.sup_midpoint[i]};
    p.premise = r.min_tail_midpoint >= 1.0 - p.delta - tol;
    p.conclusion = r.max_tail_distance <= p.eps + tol;
    any_premise = any_premise || p.premise;
    if (p.premise && !p.conclusion) (p.delta <= 1e-6 ? witness : bad) = true;
    r.probes.push_back(p);
  }
  if (bad) r.status = CauchyStatus::inconsistent;
  else if (witness) r.status = CauchyStatus::non_uniform_witness;
  else r.status = any_premise ? CauchyStatus::pass : CauchyStatus::vacuous;
  return r;
}

std::string trace_csv(const SequenceFamily& fam, const FunctionalFamily& family,
                      const SparseSeq& candidate, const NormSpec& spec, std::size_t n_max) {
  if (n_max > fam.n_max) throw DomainError("n_max exceeds the family cap");
  std::string out = "n,functional_id,pairing,norm_xn,distance_to_candidate\n";
  for (std::size_t n = 1; n <= n_max; ++n) {
    const SparseSeq x = fam.term(n);
    const std::string tail = ',' + fmt9(norm_eval(x, spec)) + ',' + fmt9(norm_eval(x - candidate, spec)) + '\n';
    for (std::size_t k = 0; k < family.members.size(); ++k) {
      out += std::to_string(n) + ',' + family.ids[k] + ',' + fmt9(pairing(family.members[k], x)) + tail;
    }
  }
  return out;
}

}  // namespace convexlab

#include "convexlab/convexity.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace convexlab {

namespace {

void require_eps(double eps) {
  if (!(eps > 0.0 && eps <= 2.0)) throw DomainError("eps must lie in (0,2]");
}

// Largest ρ in [0, 2] with ‖ρu + h‖ ≤ 1. The map is convex in ρ and ≤ 1 at 0.
double max_radius(const NormSpec& spec, const Vector& u, const Vector& h) {
  double lo = 0.0, hi = 2.0;
  if (norm_eval(Vector(hi * u + h), spec) <= 1.0) return hi;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (norm_eval(Vector(mid * u + h), spec) <= 1.0) lo = mid;
    else hi = mid;
  }
  return lo;
}

struct Pair {
  double value = -1.0;
  Vector x, y;
};

class PairObjective {
 public:
  PairObjective(const NormSpec& spec, std::size_t dim, double eps)
      : spec_(spec), n_(static_cast<Eigen::Index>(dim)), eps_(eps) {}

  // w = (u_raw, v_raw); returns ρ* and fills the pair.
  double operator()(const Vector& w, Pair* out = nullptr) {
    ++evals;
    const Vector ur = w.head(n_), vr = w.tail(n_);
    const double nu = norm_eval(ur, spec_), nv = norm_eval(vr, spec_);
    if (!(nu > 0.0) || !(nv > 0.0)) return -1.0;
    const Vector u = ur / nu;
    Vector h = (0.5 * eps_ / nv) * vr;
    const double sep = norm_eval(Vector(2.0 * h), spec_);
    if (sep < eps_) h *= (eps_ / sep) * (1.0 + 4e-16);
    const double rho = std::min(max_radius(spec_, u, h), max_radius(spec_, u, -h));
    if (out) {
      out->x = rho * u + h;
      out->y = rho * u - h;
      out->value = norm_eval(Vector(0.5 * (out->x + out->y)), spec_);
    }
    return rho;
  }

  std::uint64_t evals = 0;

 private:
  const NormSpec& spec_;
  Eigen::Index n_;
  double eps_;
};

// Maximizes φ on [a, b] assuming unimodality.
template <class F>
std::pair<double, double> golden_max(F&& phi, double a, double b, int iters) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = phi(c), fd = phi(d);
  for (int i = 0; i < iters; ++i) {
    if (fc >= fd) {
      b = d; d = c; fd = fc;
      c = b - r * (b - a);
      fc = phi(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + r * (b - a);
      fd = phi(d);
    }
  }
  return fc >= fd ? std::pair{c, fc} : std::pair{d, fd};
}

Pair local_search(const NormSpec& spec, std::size_t dim, double eps, Vector w,
                  std::uint64_t budget) {
  PairObjective F(spec, dim, eps);
  double best = F(w);
  double delta = 0.5;
  while (F.evals < budget && delta > 1e-10) {
    bool improved = false;
    for (Eigen::Index j = 0; j < w.size() && F.evals < budget; ++j) {
      const double w0 = w[j];
      auto phi = [&](double s) {
        w[j] = w0 + s;
        const double v = F(w);
        w[j] = w0;
        return v;
      };
      auto [s, v] = golden_max(phi, -delta, delta, 24);
      if (v > best) {
        best = v;
        w[j] = w0 + s;
        improved = improved || std::abs(s) > 1e-3 * delta;
      }
    }
    if (!improved) delta *= 0.25;
  }
  Pair out;
  F(w, &out);
  return out;
}

// e_i and e_i ± e_j, one sign per direction.
std::vector<Vector> polyhedral_directions(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  std::vector<Vector> dirs;
  for (Eigen::Index i = 0; i < n; ++i) dirs.push_back(Vector::Unit(n, i));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      dirs.push_back(Vector::Unit(n, i) + Vector::Unit(n, j));
      dirs.push_back(Vector::Unit(n, i) - Vector::Unit(n, j));
    }
  }
  return dirs;
}

}  // namespace

MidpointEstimate midpoint_sup(const NormSpec& spec, std::size_t dim, double eps,
                              std::uint64_t budget, std::uint64_t seed, Exec exec) {
  require_eps(eps);
  if (budget < 1000) throw DomainError("budget must be >= 1000");
  if (dim < 1) throw DomainError("dimension must be >= 1");
  spec.check_dim(dim);
  const auto n = static_cast<Eigen::Index>(dim);

  std::vector<Pair> results;
  std::uint64_t evals = 0;

  if (spec.is_polyhedral() && dim <= 8) {
    const auto dirs = polyhedral_directions(dim);
    PairObjective F(spec, dim, eps);
    Vector w(2 * n);
    Pair best;
    for (const auto& u : dirs) {
      for (const auto& v : dirs) {
        w << u, v;
        Pair p;
        F(w, &p);
        if (p.value > best.value) best = std::move(p);
      }
    }
    evals += F.evals;
    results.push_back(std::move(best));
  }

  const std::uint64_t starts = std::clamp<std::uint64_t>(budget / 500, 4, 64);
  const std::uint64_t per_start = budget / starts;
  std::vector<Pair> found(starts);
  auto run = [&](std::uint64_t s) {
    auto rng = substream(seed, s);
    std::normal_distribution<double> normal;
    Vector w(2 * n);
    for (auto& c : w) c = normal(rng);
    found[s] = local_search(spec, dim, eps, std::move(w), per_start);
  };
  if (exec == Exec::serial) {
    for (std::uint64_t s = 0; s < starts; ++s) run(s);
  } else {
    const auto ns = static_cast<std::int64_t>(starts);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t s = 0; s < ns; ++s) run(static_cast<std::uint64_t>(s));
  }
  evals += starts * per_start;
  for (auto& p : found) results.push_back(std::move(p));

  // Strictly greater keeps the lowest index among ties.
  std::size_t best = 0;
  for (std::size_t i = 1; i < results.size(); ++i) {
    if (results[i].value > results[best].value) best = i;
  }
  MidpointEstimate est;
  est.eps = eps;
  est.value = results[best].value;
  est.x = std::move(results[best].x);
  est.y = std::move(results[best].y);
  est.evaluations = evals;
  return est;
}

std::string ModulusCurve::to_csv() const {
  std::string out = "eps,sup_midpoint,witness_x,witness_y\n";
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    out += fmt9(eps_grid[i]) + ',' + fmt9(sup_midpoint[i]) + ',' + join_vector(witnesses[i].first) +
           ',' + join_vector(witnesses[i].second) + '\n';
  }
  return out;
}

ModulusCurve modulus_curve(const NormSpec& spec, std::size_t dim, const std::vector<double>& eps_grid,
                           std::uint64_t budget, std::uint64_t seed, Exec exec) {
  if (eps_grid.empty()) throw DomainError("eps grid must not be empty");
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    require_eps(eps_grid[i]);
    if (i && !(eps_grid[i] > eps_grid[i - 1])) throw DomainError("eps grid must be ascending");
  }
  ModulusCurve c;
  c.eps_grid = eps_grid;
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    auto est = midpoint_sup(spec, dim, eps_grid[i], budget, seed + i, exec);
    c.sup_midpoint.push_back(est.value);
    c.witnesses.emplace_back(std::move(est.x), std::move(est.y));
  }
  for (std::size_t i = eps_grid.size() - 1; i-- > 0;) {
    if (c.sup_midpoint[i + 1] > c.sup_midpoint[i]) {
      c.sup_midpoint[i] = c.sup_midpoint[i + 1];
      c.witnesses[i] = c.witnesses[i + 1];
    }
  }
  return c;
}

double euclidean_modulus_closed_form(double eps) {
  require_eps(eps);
  return std::sqrt(std::max(0.0, 1.0 - 0.25 * eps * eps));
}

namespace {

std::optional<StrictVerdict> flat_pair(const NormSpec& spec, const Vector& a, const Vector& b) {
  if (norm_eval(Vector(a - b), spec) < 1e-3) return std::nullopt;
  const double m = norm_eval(Vector(0.5 * (a + b)), spec);
  if (std::abs(m - 1.0) > 1e-12) return std::nullopt;
  return StrictVerdict{true, a, b, m};
}

Vector to_sphere(const NormSpec& spec, const Vector& v) { return v / norm_eval(v, spec); }

std::optional<StrictVerdict> random_pair(const NormSpec& spec, std::size_t dim, std::uint64_t seed,
                                         std::uint64_t trial) {
  auto rng = substream(seed, trial);
  std::normal_distribution<double> normal;
  const auto n = static_cast<Eigen::Index>(dim);
  Vector a(n), b(n);
  for (auto& c : a) c = normal(rng);
  for (auto& c : b) c = normal(rng);
  if (a.isZero(0.0) || b.isZero(0.0)) return std::nullopt;
  return flat_pair(spec, to_sphere(spec, a), to_sphere(spec, b));
}

std::vector<Vector> ternary_vectors(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  std::vector<Vector> out;
  if (dim <= 6) {
    std::size_t total = 1;
    for (std::size_t i = 0; i < dim; ++i) total *= 3;
    for (std::size_t code = 0; code < total; ++code) {
      Vector v(n);
      std::size_t c = code;
      for (Eigen::Index i = 0; i < n; ++i, c /= 3) v[i] = static_cast<double>(c % 3) - 1.0;
      if (!v.isZero(0.0)) out.push_back(std::move(v));
    }
    // Sparse nonnegative vectors first: edge midpoints show up early.
    std::stable_sort(out.begin(), out.end(), [](const Vector& a, const Vector& b) {
      const auto key = [](const Vector& v) {
        return std::pair{v.minCoeff() < 0.0, (v.array() != 0.0).count()};
      };
      return key(a) < key(b);
    });
    return out;
  }
  for (const auto& d : polyhedral_directions(dim)) {
    out.push_back(d);
    out.push_back(-d);
  }
  return out;
}

}  // namespace

StrictVerdict strict_convexity_probe(const NormSpec& spec, std::size_t dim, std::uint64_t trials,
                                     std::uint64_t seed, Exec exec) {
  if (trials < 1) throw DomainError("trials must be >= 1");
  if (dim < 1) throw DomainError("dimension must be >= 1");
  spec.check_dim(dim);

  std::vector<Vector> cands;
  for (const auto& v : ternary_vectors(dim)) cands.push_back(to_sphere(spec, v));
  for (std::size_t i = 0; i < cands.size(); ++i) {
    for (std::size_t j = i + 1; j < cands.size(); ++j) {
      if (auto hit = flat_pair(spec, cands[i], cands[j])) return *hit;
    }
  }

  std::uint64_t first = trials;
  if (exec == Exec::serial) {
    for (std::uint64_t t = 0; t < trials && first == trials; ++t) {
      if (random_pair(spec, dim, seed, t)) first = t;
    }
  } else {
    const auto nt = static_cast<std::int64_t>(trials);
#pragma omp parallel for schedule(static) reduction(min : first)
    for (std::int64_t t = 0; t < nt; ++t) {
      const auto idx = static_cast<std::uint64_t>(t);
      if (idx < first && random_pair(spec, dim, seed, idx)) first = idx;
    }
  }
  if (first < trials) return *random_pair(spec, dim, seed, first);
  return StrictVerdict{};
}

double angle_law_of_cosines(const Vector& x, const Vector& y, const Matrix& gram) {
  require_valid(x);
  require_same_dim(x, y);
  if (gram.rows() != x.size() || gram.cols() != x.size()) {
    throw DimensionError("gram matrix must match the vector dimension");
  }
  const double xx = x.dot(gram * x), yy = y.dot(gram * y), xy = x.dot(gram * y);
  if (!(xx * yy - xy * xy > 1e-12 * xx * yy)) throw DomainError("vectors must be linearly independent");
  return std::acos(std::clamp(xy / std::sqrt(xx * yy), -1.0, 1.0));
}

L1L2Pair l1l2_pair(std::size_t n) {
  if (n < 1) throw DomainError("N must be >= 1");
  static const NormSpec spec = NormSpec::sum({NormSpec::lp(1.0), NormSpec::lp(2.0)});
  L1L2Pair r;
  r.n = n;
  r.x = SparseSeq::constant(1, n, 1.0);
  r.y = SparseSeq::constant(n + 1, 2 * n, 1.0);
  r.norm_x = norm_eval(r.x, spec);
  r.norm_y = norm_eval(r.y, spec);
  r.norm_diff = norm_eval(r.x - r.y, spec);
  r.norm_mid = norm_eval(0.5 * (r.x + r.y), spec);
  r.mid_ratio = r.norm_mid / r.norm_x;
  r.sep_ratio = r.norm_diff / r.norm_x;
  return r;
}

ConvexityVerdict uniform_convexity_verdict(const NormSpec& spec, std::size_t dim,
                                           const std::vector<double>& eps_grid,
                                           std::uint64_t budget, std::uint64_t seed, Exec exec) {
  ConvexityVerdict v;
  v.curve = modulus_curve(spec, dim, eps_grid, budget, seed, exec);
  v.strict = strict_convexity_probe(spec, dim, 2000, seed, exec);
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    if (v.curve.sup_midpoint[i] >= 1.0 - 1e-6) {
      v.uniform_violated = true;
      v.violated_eps = eps_grid[i];
      v.witnesses.push_back(v.curve.witnesses[i]);
      v.witness_midpoints.push_back(v.curve.sup_midpoint[i]);
      break;
    }
  }
  if (!v.uniform_violated && v.strict.violated) {
    v.uniform_violated = true;
    v.violated_eps = norm_eval(Vector(v.strict.x - v.strict.y), spec);
    v.witnesses.emplace_back(v.strict.x, v.strict.y);
    v.witness_midpoints.push_back(v.strict.midpoint_norm);
  }
  if (v.uniform_violated) v.evidence = "witness";
  return v;
}

ConvexityVerdict l1l2_uniform_convexity_verdict(const std::vector<std::size_t>& ns, double min_ratio) {
  if (ns.empty()) throw DomainError("need at least one N");
  ConvexityVerdict v;
  v.evidence = "sequence";
  bool ok = true;
  double prev = 0.0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (i && ns[i] <= ns[i - 1]) throw DomainError("N values must increase");
    const auto p = l1l2_pair(ns[i]);
    ok = ok && p.sep_ratio >= std::sqrt(2.0) && p.mid_ratio > prev;
    prev = p.mid_ratio;
    const auto dim = static_cast<Eigen::Index>(2 * ns[i]);
    v.witnesses.emplace_back(p.x.to_dense(dim) / p.norm_x, p.y.to_dense(dim) / p.norm_y);
    v.witness_midpoints.push_back(p.mid_ratio);
  }
  v.uniform_violated = ok && prev >= min_ratio;
  if (v.uniform_violated) v.violated_eps = std::sqrt(2.0);
  v.strict.violated = false;
  return v;
}

}  // namespace convexlab

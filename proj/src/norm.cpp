#include "convexlab/norm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace convexlab {

double conjugate_exponent(double p) {
  if (!(p >= 1.0)) throw DomainError("lp p must lie in [1, inf]");
  if (p == 1.0) return kInf;
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

namespace {

template <class Range>
double lp_of_range(const Range& abs_values, double p) {
  double m = 0.0;
  for (double a : abs_values) m = std::max(m, a);
  if (m == 0.0 || std::isinf(p)) return m;
  if (p == 1.0) {
    double s = 0.0;
    for (double a : abs_values) s += a;
    return s;
  }
  double s = 0.0;
  for (double a : abs_values) s += std::pow(a / m, p);
  return m * std::pow(s, 1.0 / p);
}

struct AbsView {
  const double* data;
  std::size_t n;
  struct It {
    const double* p;
    double operator*() const { return std::abs(*p); }
    It& operator++() {
      ++p;
      return *this;
    }
    bool operator!=(const It& o) const { return p != o.p; }
  };
  It begin() const { return {data}; }
  It end() const { return {data + n}; }
};

struct SeqAbsView {
  std::span<const SparseSeq::Entry> e;
  struct It {
    const SparseSeq::Entry* p;
    double operator*() const { return std::abs(p->value); }
    It& operator++() {
      ++p;
      return *this;
    }
    bool operator!=(const It& o) const { return p != o.p; }
  };
  It begin() const { return {e.data()}; }
  It end() const { return {e.data() + e.size()}; }
};

void validate_p(double p) {
  if (!(p >= 1.0)) throw DomainError("lp p must lie in [1, inf]");
}

}  // namespace

double lp_norm(const Vector& v, double p) {
  validate_p(p);
  return lp_of_range(AbsView{v.data(), static_cast<std::size_t>(v.size())}, p);
}

NormSpec NormSpec::lp(double p) {
  validate_p(p);
  return NormSpec(LpKind{p});
}

NormSpec NormSpec::inner(Matrix gram) {
  if (gram.rows() == 0 || gram.rows() != gram.cols()) {
    throw DomainError("inner product gram must be a nonempty square matrix");
  }
  if (!gram.allFinite()) throw DomainError("inner product gram has a non-finite entry");
  const double scale = std::max(1.0, gram.cwiseAbs().maxCoeff());
  if ((gram - gram.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw DomainError("inner product gram must be symmetric");
  }
  Matrix sym = 0.5 * (gram + gram.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() <= 0.0) {
    throw DomainError("inner product gram must be positive-definite");
  }
  Eigen::LLT<Matrix> llt(sym);
  if (llt.info() != Eigen::Success) {
    throw DomainError("inner product gram must be positive-definite");
  }
  Matrix L = llt.matrixL();
  return NormSpec(InnerProductKind{std::move(sym), std::move(L)});
}

NormSpec NormSpec::sum(std::vector<NormSpec> parts) {
  if (parts.empty()) throw DomainError("sum norm needs at least one part");
  std::optional<std::size_t> dim;
  for (const auto& part : parts) {
    if (auto d = part.fixed_dim()) {
      if (dim && *dim != *d) throw DimensionError("sum norm parts disagree on dimension");
      dim = d;
    }
  }
  return NormSpec(SumKind{std::move(parts)});
}

std::optional<std::size_t> NormSpec::fixed_dim() const {
  if (auto* ip = as_inner()) return static_cast<std::size_t>(ip->gram.rows());
  if (auto* s = as_sum()) {
    for (const auto& part : s->parts) {
      if (auto d = part.fixed_dim()) return d;
    }
  }
  return std::nullopt;
}

void NormSpec::check_dim(std::size_t n) const {
  if (n == 0) throw DomainError("vector must have dimension >= 1");
  if (auto d = fixed_dim(); d && *d != n) {
    throw DimensionError("vector has dimension " + std::to_string(n) + " but the gram matrix is " +
                         std::to_string(*d) + "x" + std::to_string(*d));
  }
}

bool NormSpec::is_polyhedral() const {
  if (auto* lp = as_lp()) return lp->p == 1.0 || std::isinf(lp->p);
  if (auto* s = as_sum()) {
    return std::all_of(s->parts.begin(), s->parts.end(),
                       [](const NormSpec& n) { return n.is_polyhedral(); });
  }
  return false;
}

bool NormSpec::is_strictly_convex() const {
  if (auto* lp = as_lp()) return lp->p > 1.0 && !std::isinf(lp->p);
  if (as_inner()) return true;
  // A sum is strictly convex as soon as one summand is.
  const auto& parts = as_sum()->parts;
  return std::any_of(parts.begin(), parts.end(),
                     [](const NormSpec& n) { return n.is_strictly_convex(); });
}

bool NormSpec::acts_on_sequences() const {
  if (as_lp()) return true;
  if (auto* s = as_sum()) {
    return std::all_of(s->parts.begin(), s->parts.end(),
                       [](const NormSpec& n) { return n.acts_on_sequences(); });
  }
  return false;
}

std::string NormSpec::label() const {
  if (auto* lp = as_lp()) {
    if (std::isinf(lp->p)) return "linf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "l%g", lp->p);
    return buf;
  }
  if (auto* ip = as_inner()) return "inner(" + std::to_string(ip->gram.rows()) + ")";
  std::string out = "sum(";
  const auto& parts = as_sum()->parts;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += '+';
    out += parts[i].label();
  }
  return out + ")";
}

double norm_eval(const Vector& v, const NormSpec& spec) {
  require_valid(v);
  spec.check_dim(static_cast<std::size_t>(v.size()));
  if (auto* lp = spec.as_lp()) return lp_norm(v, lp->p);
  if (auto* ip = spec.as_inner()) return (ip->chol.transpose() * v).norm();
  double total = 0.0;
  for (const auto& part : spec.as_sum()->parts) total += norm_eval(v, part);
  return total;
}

double norm_eval(const SparseSeq& v, const NormSpec& spec) {
  if (auto* lp = spec.as_lp()) return lp_of_range(SeqAbsView{v.entries()}, lp->p);
  if (auto* s = spec.as_sum(); s && spec.acts_on_sequences()) {
    double total = 0.0;
    for (const auto& part : s->parts) total += norm_eval(v, part);
    return total;
  }
  throw DomainError("sequence norms support only lp and sums of lp");
}

double triangle_defect(const Vector& x, const Vector& y, const NormSpec& spec) {
  require_same_dim(x, y);
  return norm_eval(x, spec) + norm_eval(y, spec) - norm_eval(Vector(x + y), spec);
}

double parallelogram_defect(const Vector& x, const Vector& y, const NormSpec& spec) {
  require_same_dim(x, y);
  const double s = norm_eval(Vector(x + y), spec);
  const double d = norm_eval(Vector(x - y), spec);
  const double nx = norm_eval(x, spec);
  const double ny = norm_eval(y, spec);
  return s * s + d * d - 2.0 * nx * nx - 2.0 * ny * ny;
}

BallRegion ball_membership(const Vector& v, const NormSpec& spec, double tol) {
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  const double n = norm_eval(v, spec);
  if (std::abs(n - 1.0) <= tol) return BallRegion::boundary;
  return n < 1.0 - tol ? BallRegion::inside : BallRegion::outside;
}

const char* to_string(BallRegion r) {
  switch (r) {
    case BallRegion::inside:
      return "inside";
    case BallRegion::boundary:
      return "boundary";
    case BallRegion::outside:
      return "outside";
  }
  return "?";
}

std::vector<Vector> sphere_sample_2d(const NormSpec& spec, std::size_t k) {
  if (k < 8) throw DomainError("sphere_sample_2d needs k >= 8");
  spec.check_dim(2);
  std::vector<Vector> pts;
  pts.reserve(k);
  for (std::size_t j = 0; j < k; ++j) {
    const double a = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(k);
    Vector dir(2);
    dir << std::cos(a), std::sin(a);
    // Snap to exact axis points where cos/sin leave ~1e-16 residue.
    for (auto& c : dir) {
      if (std::abs(c) < 1e-15) c = 0.0;
    }
    pts.push_back(dir / norm_eval(dir, spec));
  }
  return pts;
}

Vector sample_in_ball(const Gauge& gauge, std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Vector dir(static_cast<Eigen::Index>(dim));
  double g = 0.0;
  do {
    for (auto& c : dir) c = normal(rng);
    g = gauge(dir);
  } while (!(g > 0.0));
  const double r = std::pow(unif(rng), 1.0 / static_cast<double>(dim));
  return (r / g) * dir;
}

namespace {

std::optional<ConvexityViolation> chord_trial(const Gauge& gauge, std::size_t dim,
                                              std::uint64_t seed, std::uint64_t trial) {
  auto rng = substream(seed, trial);
  Vector x = sample_in_ball(gauge, dim, rng);
  Vector y = sample_in_ball(gauge, dim, rng);
  const double t = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  const double value = gauge(Vector(t * x + (1.0 - t) * y));
  if (value > 1.0 + 1e-9) return ConvexityViolation{std::move(x), std::move(y), t, value, trial};
  return std::nullopt;
}

}  // namespace

std::optional<ConvexityViolation> ball_convexity_probe(const Gauge& gauge, std::size_t dim,
                                                       std::uint64_t trials, std::uint64_t seed,
                                                       Exec exec) {
  if (trials < 1) throw DomainError("trials must be >= 1");
  if (dim < 1) throw DomainError("dimension must be >= 1");
  if (exec == Exec::serial) {
    for (std::uint64_t i = 0; i < trials; ++i) {
      if (auto v = chord_trial(gauge, dim, seed, i)) return v;
    }
    return std::nullopt;
  }
  std::uint64_t first = trials;
  const auto n = static_cast<std::int64_t>(trials);
#pragma omp parallel for schedule(static) reduction(min : first)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::uint64_t>(i);
    if (idx < first && chord_trial(gauge, dim, seed, idx)) first = idx;
  }
  if (first == trials) return std::nullopt;
  return chord_trial(gauge, dim, seed, first);
}

std::optional<ConvexityViolation> ball_convexity_probe(const NormSpec& spec, std::size_t dim,
                                                       std::uint64_t trials, std::uint64_t seed,
                                                       Exec exec) {
  spec.check_dim(dim);
  return ball_convexity_probe([&spec](const Vector& v) { return norm_eval(v, spec); }, dim, trials,
                              seed, exec);
}

}  // namespace convexlab

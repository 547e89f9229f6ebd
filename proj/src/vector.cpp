#include "convexlab/vector.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace convexlab {

void require_valid(const Vector& v, const char* what) {
  if (v.size() == 0) {
    throw DomainError(std::string(what) + " must have dimension >= 1");
  }
  if (!v.allFinite()) {
    throw DomainError(std::string(what) + " has a non-finite entry");
  }
}

void require_same_dim(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) {
    throw DimensionError("dimension mismatch: " + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()));
  }
}

Vector make_vector(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

std::string fmt9(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

std::string join_vector(const Vector& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ';';
    out += fmt9(v[i]);
  }
  return out;
}

SparseSeq::SparseSeq(std::vector<Entry> entries) {
  entries_.reserve(entries.size());
  std::size_t prev = 0;
  for (const auto& e : entries) {
    if (e.index < 1) throw DomainError("SparseSeq indices start at 1");
    if (e.index <= prev) throw DomainError("SparseSeq indices must be strictly increasing");
    if (!std::isfinite(e.value)) throw DomainError("SparseSeq value must be finite");
    prev = e.index;
    if (e.value != 0.0) entries_.push_back(e);
  }
}

SparseSeq SparseSeq::unit(std::size_t n) { return SparseSeq({{n, 1.0}}); }

SparseSeq SparseSeq::from_dense(const Vector& v) {
  std::vector<Entry> e;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v[i] != 0.0) e.push_back({static_cast<std::size_t>(i) + 1, v[i]});
  }
  return SparseSeq(std::move(e));
}

SparseSeq SparseSeq::constant(std::size_t first, std::size_t last, double value) {
  std::vector<Entry> e;
  if (first < 1) throw DomainError("SparseSeq indices start at 1");
  for (std::size_t k = first; k <= last; ++k) e.push_back({k, value});
  return SparseSeq(std::move(e));
}

std::size_t SparseSeq::max_index() const { return entries_.empty() ? 0 : entries_.back().index; }

double SparseSeq::at(std::size_t n) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), n,
                             [](const Entry& e, std::size_t k) { return e.index < k; });
  return (it != entries_.end() && it->index == n) ? it->value : 0.0;
}

Vector SparseSeq::to_dense(std::size_t dim) const {
  Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
  for (const auto& e : entries_) {
    if (e.index <= dim) v[static_cast<Eigen::Index>(e.index - 1)] = e.value;
  }
  return v;
}

namespace {

template <class Op>
SparseSeq merge(const SparseSeq& a, const SparseSeq& b, Op op) {
  auto ea = a.entries();
  auto eb = b.entries();
  std::vector<SparseSeq::Entry> out;
  out.reserve(ea.size() + eb.size());
  std::size_t i = 0, j = 0;
  while (i < ea.size() || j < eb.size()) {
    if (j == eb.size() || (i < ea.size() && ea[i].index < eb[j].index)) {
      out.push_back({ea[i].index, op(ea[i].value, 0.0)});
      ++i;
    } else if (i == ea.size() || eb[j].index < ea[i].index) {
      out.push_back({eb[j].index, op(0.0, eb[j].value)});
      ++j;
    } else {
      out.push_back({ea[i].index, op(ea[i].value, eb[j].value)});
      ++i;
      ++j;
    }
  }
  return SparseSeq(std::move(out));
}

}  // namespace

SparseSeq operator+(const SparseSeq& a, const SparseSeq& b) {
  return merge(a, b, [](double x, double y) { return x + y; });
}

SparseSeq operator-(const SparseSeq& a, const SparseSeq& b) {
  return merge(a, b, [](double x, double y) { return x - y; });
}

SparseSeq operator*(double s, const SparseSeq& a) {
  if (!std::isfinite(s)) throw DomainError("SparseSeq scale must be finite");
  std::vector<SparseSeq::Entry> out(a.entries().begin(), a.entries().end());
  for (auto& e : out) e.value *= s;
  return SparseSeq(std::move(out));
}

bool operator==(const SparseSeq& a, const SparseSeq& b) {
  auto ea = a.entries();
  auto eb = b.entries();
  if (ea.size() != eb.size()) return false;
  for (std::size_t i = 0; i < ea.size(); ++i) {
    if (ea[i].index != eb[i].index || ea[i].value != eb[i].value) return false;
  }
  return true;
}

double pairing(const SparseSeq& g, const SparseSeq& x) {
  auto eg = g.entries();
  auto ex = x.entries();
  double sum = 0.0;
  std::size_t i = 0, j = 0;
  while (i < eg.size() && j < ex.size()) {
    if (eg[i].index < ex[j].index) {
      ++i;
    } else if (ex[j].index < eg[i].index) {
      ++j;
    } else {
      sum += eg[i].value * ex[j].value;
      ++i;
      ++j;
    }
  }
  return sum;
}

}  // namespace convexlab

#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "convexlab/errors.hpp"

namespace convexlab {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Throws DomainError unless v is nonempty with finite entries.
void require_valid(const Vector& v, const char* what = "vector");

/// Throws DimensionError unless a and b have equal length.
void require_same_dim(const Vector& a, const Vector& b);

Vector make_vector(std::initializer_list<double> values);

/// 9 significant digits, printf %.9g.
std::string fmt9(double x);

/// Semicolon-joined decimals with 9 significant digits ("1;0.5;-2").
std::string join_vector(const Vector& v);

/// Finitely supported real sequence (x_1, x_2, ...), indices start at 1.
///
/// Storage is a strictly increasing index list with matching nonzero values.
/// Arithmetic merges supports exactly and drops entries that cancel to zero.
class SparseSeq {
 public:
  struct Entry {
    std::size_t index;
    double value;
  };

  SparseSeq() = default;

  /// Entries must have strictly increasing indices >= 1; zero values are dropped.
  explicit SparseSeq(std::vector<Entry> entries);

  /// Unit vector e_n.
  static SparseSeq unit(std::size_t n);
  /// Dense prefix (v_0 -> index 1, ...); zero entries are skipped.
  static SparseSeq from_dense(const Vector& v);
  /// Constant value on indices first..last inclusive.
  static SparseSeq constant(std::size_t first, std::size_t last, double value);

  [[nodiscard]] std::span<const Entry> entries() const { return entries_; }
  [[nodiscard]] bool empty() const { return entries_.empty(); }
  [[nodiscard]] std::size_t nnz() const { return entries_.size(); }
  /// Largest stored index, 0 for the zero sequence.
  [[nodiscard]] std::size_t max_index() const;
  /// Value at index n (0 off the support).
  [[nodiscard]] double at(std::size_t n) const;

  /// Dense copy of the first `dim` coordinates.
  [[nodiscard]] Vector to_dense(std::size_t dim) const;

  friend SparseSeq operator+(const SparseSeq& a, const SparseSeq& b);
  friend SparseSeq operator-(const SparseSeq& a, const SparseSeq& b);
  friend SparseSeq operator*(double s, const SparseSeq& a);
  friend bool operator==(const SparseSeq& a, const SparseSeq& b);

 private:
  std::vector<Entry> entries_;
};

/// Sum of g_k x_k over the merged supports, accumulated in index order.
double pairing(const SparseSeq& g, const SparseSeq& x);

}  // namespace convexlab

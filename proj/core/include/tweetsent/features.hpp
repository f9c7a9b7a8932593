#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace tweetsent {

/// Sparse feature vector: indices strictly increasing, paired values.
struct SparseVector {
  std::vector<std::uint32_t> indices;
  std::vector<double> values;
  std::size_t dimension = 0;

  std::size_t nnz() const { return indices.size(); }
  double sum() const;
  // Throws DataError unless indices are strictly increasing and < dimension.
  void check() const;

  friend bool operator==(const SparseVector&, const SparseVector&) = default;
};

using DenseVector = std::vector<double>;

/// A classifier input: sparse BOW counts or a dense embedding.
class FeatureVector {
 public:
  FeatureVector() = default;
  FeatureVector(SparseVector v) : data_(std::move(v)) {}  // NOLINT(google-explicit-constructor)
  FeatureVector(DenseVector v) : data_(std::move(v)) {}   // NOLINT(google-explicit-constructor)

  bool is_sparse() const { return std::holds_alternative<SparseVector>(data_); }
  const SparseVector& sparse() const { return std::get<SparseVector>(data_); }
  const DenseVector& dense() const { return std::get<DenseVector>(data_); }

  std::size_t dimension() const;
  double at(std::size_t j) const;
  // Dot product with the first dimension() entries of `w`.
  double dot(std::span<const double> w) const;
  // w += scale * x
  void add_scaled_to(std::span<double> w, double scale) const;
  double squared_norm() const;
  bool all_finite() const;
  // Unit L2 norm; the zero vector is returned unchanged.
  FeatureVector normalized() const;
  DenseVector to_dense() const;

  template <typename Fn>
  void for_each_nonzero(Fn&& fn) const {
    if (is_sparse()) {
      const auto& s = sparse();
      for (std::size_t k = 0; k < s.indices.size(); ++k) fn(static_cast<std::size_t>(s.indices[k]), s.values[k]);
    } else {
      const auto& d = dense();
      for (std::size_t j = 0; j < d.size(); ++j) {
        if (d[j] != 0.0) fn(j, d[j]);
      }
    }
  }

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;

 private:
  std::variant<SparseVector, DenseVector> data_;
};

double dot(const FeatureVector& a, const FeatureVector& b);
double squared_distance(const FeatureVector& a, const FeatureVector& b);

}  // namespace tweetsent

#include "tweetsent/features.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "tweetsent/error.hpp"

namespace tweetsent {

double SparseVector::sum() const { return std::accumulate(values.begin(), values.end(), 0.0); }

void SparseVector::check() const {
  if (indices.size() != values.size()) throw DataError("sparse vector: index/value length mismatch");
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (indices[k] >= dimension) throw DataError("sparse vector: index out of range");
    if (k && indices[k] <= indices[k - 1]) throw DataError("sparse vector: indices not strictly increasing");
  }
}

std::size_t FeatureVector::dimension() const { return is_sparse() ? sparse().dimension : dense().size(); }

double FeatureVector::at(std::size_t j) const {
  if (!is_sparse()) return dense()[j];
  const auto& s = sparse();
  auto it = std::lower_bound(s.indices.begin(), s.indices.end(), static_cast<std::uint32_t>(j));
  if (it == s.indices.end() || *it != j) return 0.0;
  return s.values[static_cast<std::size_t>(it - s.indices.begin())];
}

double FeatureVector::dot(std::span<const double> w) const {
  double acc = 0.0;
  if (is_sparse()) {
    const auto& s = sparse();
    for (std::size_t k = 0; k < s.indices.size(); ++k) acc += w[s.indices[k]] * s.values[k];
  } else {
    const auto& d = dense();
    for (std::size_t j = 0; j < d.size(); ++j) acc += w[j] * d[j];
  }
  return acc;
}

void FeatureVector::add_scaled_to(std::span<double> w, double scale) const {
  if (is_sparse()) {
    const auto& s = sparse();
    for (std::size_t k = 0; k < s.indices.size(); ++k) w[s.indices[k]] += scale * s.values[k];
  } else {
    const auto& d = dense();
    for (std::size_t j = 0; j < d.size(); ++j) w[j] += scale * d[j];
  }
}

double FeatureVector::squared_norm() const {
  double acc = 0.0;
  for_each_nonzero([&](std::size_t, double v) { acc += v * v; });
  return acc;
}

bool FeatureVector::all_finite() const {
  bool ok = true;
  for_each_nonzero([&](std::size_t, double v) { ok = ok && std::isfinite(v); });
  return ok;
}

FeatureVector FeatureVector::normalized() const {
  const double norm = std::sqrt(squared_norm());
  if (norm == 0.0) return *this;
  if (is_sparse()) {
    SparseVector s = sparse();
    for (auto& v : s.values) v /= norm;
    return s;
  }
  DenseVector d = dense();
  for (auto& v : d) v /= norm;
  return d;
}

DenseVector FeatureVector::to_dense() const {
  if (!is_sparse()) return dense();
  DenseVector d(dimension(), 0.0);
  for_each_nonzero([&](std::size_t j, double v) { d[j] = v; });
  return d;
}

double dot(const FeatureVector& a, const FeatureVector& b) {
  if (a.dimension() != b.dimension()) throw DataError("dimension mismatch in dot product");
  if (a.is_sparse() && b.is_sparse()) {
    const auto& x = a.sparse();
    const auto& y = b.sparse();
    double acc = 0.0;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < x.indices.size() && j < y.indices.size()) {
      if (x.indices[i] == y.indices[j]) {
        acc += x.values[i++] * y.values[j++];
      } else if (x.indices[i] < y.indices[j]) {
        ++i;
      } else {
        ++j;
      }
    }
    return acc;
  }
  if (a.is_sparse()) return a.dot(b.dense());
  return b.dot(a.dense());
}

double squared_distance(const FeatureVector& a, const FeatureVector& b) {
  if (a.dimension() != b.dimension()) throw DataError("dimension mismatch in distance");
  if (!a.is_sparse() && !b.is_sparse()) {
    const auto& x = a.dense();
    const auto& y = b.dense();
    double acc = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double d = x[j] - y[j];
      acc += d * d;
    }
    return acc;
  }
  return std::max(0.0, a.squared_norm() + b.squared_norm() - 2.0 * dot(a, b));
}

}  // namespace tweetsent

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace trunctail {

/// Ascending positive observations X_{1,n} <= ... <= X_{n,n}.
///
/// Order-statistic accessors are 1-based to mirror the usual notation:
/// `order_stat(j)` is X_{j,n}, `top(j)` is X_{n-j+1,n} (so `top(1)` is the
/// maximum) and `threshold(k)` is X_{n-k,n}.
class SortedSample {
 public:
  SortedSample() = default;

  /// Sorts `values`; throws InvalidArgument on non-finite or non-positive
  /// entries.
  explicit SortedSample(std::vector<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  double order_stat(std::size_t j) const { return values_[j - 1]; }
  double top(std::size_t j) const { return values_[values_.size() - j]; }
  double threshold(std::size_t k) const { return values_[values_.size() - k - 1]; }
  double max() const { return values_.back(); }
  double min() const { return values_.front(); }

  friend bool operator==(const SortedSample&, const SortedSample&) = default;

 private:
  std::vector<double> values_;
};

/// Scales every observation by c > 0.
SortedSample scaled(const SortedSample& sample, double c);

}  // namespace trunctail

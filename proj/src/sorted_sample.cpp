#include "trunctail/sorted_sample.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "trunctail/error.hpp"

namespace trunctail {

SortedSample::SortedSample(std::vector<double> values) : values_(std::move(values)) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i]) || values_[i] <= 0.0) {
      fail(ErrorCode::InvalidArgument,
           "observation " + std::to_string(i) + " is not a finite positive value");
    }
  }
  std::sort(values_.begin(), values_.end());
}

SortedSample scaled(const SortedSample& sample, double c) {
  std::vector<double> v(sample.values().begin(), sample.values().end());
  for (auto& x : v) x *= c;
  return SortedSample(std::move(v));
}

}  // namespace trunctail

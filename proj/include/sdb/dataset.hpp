#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace sdb {

// Row storage. y holds the response (or the series itself when d == 0);
// x is row-major n-by-d regressor storage, empty when d == 0.
struct Dataset {
  std::vector<double> y;
  std::vector<double> x;
  std::uint64_t d = 0;

  std::uint64_t n() const { return y.size(); }
  const double* row(std::uint64_t i) const { return x.data() + i * d; }
};

// A resample encoded as b distinct rows of a parent dataset plus nonnegative
// integer weights summing to nominal_n. Unit weights with nominal_n == b
// describe the plain (unweighted) subset.
struct WeightedSample {
  const Dataset* data = nullptr;
  std::span<const std::uint64_t> indices;
  std::span<const std::uint64_t> weights;
  std::uint64_t nominal_n = 0;

  std::uint64_t size() const { return indices.size(); }
  double y(std::uint64_t k) const { return data->y[indices[k]]; }
  const double* row(std::uint64_t k) const { return data->row(indices[k]); }
};

}  // namespace sdb

#pragma once

#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "sdb/dataset.hpp"
#include "sdb/rng.hpp"

namespace testutil {

// Owns the index/weight storage a WeightedSample views.
struct OwnedSample {
  const sdb::Dataset* data = nullptr;
  std::vector<std::uint64_t> idx;
  std::vector<std::uint64_t> w;
  std::uint64_t nominal = 0;

  sdb::WeightedSample view() const { return {data, idx, w, nominal}; }
};

inline OwnedSample sample_of(const sdb::Dataset& data, std::vector<std::uint64_t> idx,
                             std::vector<std::uint64_t> w) {
  OwnedSample s;
  s.data = &data;
  s.nominal = std::accumulate(w.begin(), w.end(), std::uint64_t{0});
  s.idx = std::move(idx);
  s.w = std::move(w);
  return s;
}

inline OwnedSample whole_sample(const sdb::Dataset& data, std::vector<std::uint64_t> w) {
  std::vector<std::uint64_t> idx(data.n());
  std::iota(idx.begin(), idx.end(), 0);
  return sample_of(data, std::move(idx), std::move(w));
}

inline OwnedSample unit_sample(const sdb::Dataset& data) {
  return whole_sample(data, std::vector<std::uint64_t>(data.n(), 1));
}

// Univariate dataset from raw values.
inline sdb::Dataset series(std::vector<double> y) {
  sdb::Dataset d;
  d.y = std::move(y);
  d.d = 0;
  return d;
}

// Row-replicates the referenced rows according to their weights.
inline sdb::Dataset expand(const sdb::WeightedSample& ws) {
  sdb::Dataset out;
  out.d = ws.data->d;
  for (std::uint64_t k = 0; k < ws.size(); ++k) {
    for (std::uint64_t c = 0; c < ws.weights[k]; ++c) {
      out.y.push_back(ws.y(k));
      for (std::uint64_t j = 0; j < out.d; ++j) out.x.push_back(ws.row(k)[j]);
    }
  }
  return out;
}

}  // namespace testutil

#include "sdb/sampling.hpp"

#include <algorithm>
#include <random>
#include <string>
#include <unordered_set>

#include "sdb/error.hpp"

namespace sdb {

IndexSubset draw_iid_subset(std::uint64_t n, std::uint64_t b, RngStream& rng) {
  if (b == 0 || b > n) {
    throw ConfigError("subset size must satisfy 1 <= b <= n, got b=" + std::to_string(b) +
                      ", n=" + std::to_string(n));
  }
  IndexSubset s;
  s.parent_n = n;
  s.indices.reserve(b);
  if (b == n) {
    for (std::uint64_t i = 0; i < n; ++i) s.indices.push_back(i);
    s.contiguous = true;
    return s;
  }
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(2 * b);
  for (std::uint64_t j = n - b; j < n; ++j) {
    const std::uint64_t t = rng.uniform_index(j + 1);
    if (seen.insert(t).second) {
      s.indices.push_back(t);
    } else {
      seen.insert(j);
      s.indices.push_back(j);
    }
  }
  std::sort(s.indices.begin(), s.indices.end());
  s.contiguous = false;
  return s;
}

IndexSubset draw_ts_subset(std::uint64_t n, std::uint64_t b, RngStream& rng) {
  if (b == 0 || b > n) {
    throw ConfigError("window size must satisfy 1 <= b <= n, got b=" + std::to_string(b) +
                      ", n=" + std::to_string(n));
  }
  const std::uint64_t start = rng.uniform_index(n - b + 1);
  IndexSubset s;
  s.parent_n = n;
  s.contiguous = true;
  s.indices.reserve(b);
  for (std::uint64_t i = 0; i < b; ++i) s.indices.push_back(start + i);
  return s;
}

WeightVector draw_multinomial_weights(std::uint64_t nominal_n, std::uint64_t b, RngStream& rng) {
  if (nominal_n == 0 || b == 0) {
    throw ConfigError("multinomial weights need nominal_n >= 1 and b >= 1");
  }
  WeightVector wv;
  wv.nominal_n = nominal_n;
  wv.w.assign(b, 0);
  std::uint64_t remaining = nominal_n;
  for (std::uint64_t i = 0; i + 1 < b && remaining > 0; ++i) {
    std::binomial_distribution<long long> cell(static_cast<long long>(remaining),
                                               1.0 / static_cast<double>(b - i));
    const auto wi = static_cast<std::uint64_t>(cell(rng));
    wv.w[i] = wi;
    remaining -= wi;
  }
  wv.w[b - 1] += remaining;
  return wv;
}

WeightVector draw_mbb_weights(std::uint64_t nominal_n, std::uint64_t b, std::uint64_t block_length,
                              RngStream& rng) {
  if (block_length == 0 || block_length > b) {
    throw ConfigError("block length must satisfy 1 <= L <= b, got L=" +
                      std::to_string(block_length) + ", b=" + std::to_string(b));
  }
  if (b > nominal_n) {
    throw ConfigError("window size b cannot exceed nominal_n");
  }
  WeightVector wv;
  wv.nominal_n = nominal_n;
  wv.w.assign(b, 0);
  const std::uint64_t blocks = (nominal_n + block_length - 1) / block_length;
  const std::uint64_t tail = nominal_n - (blocks - 1) * block_length;
  for (std::uint64_t k = 0; k < blocks; ++k) {
    const std::uint64_t start = rng.uniform_index(b - block_length + 1);
    const std::uint64_t len = (k + 1 == blocks) ? tail : block_length;
    for (std::uint64_t i = start; i < start + len; ++i) ++wv.w[i];
  }
  return wv;
}

WeightVector unit_weights(std::uint64_t b) {
  WeightVector wv;
  wv.nominal_n = b;
  wv.w.assign(b, 1);
  return wv;
}

}  // namespace sdb

#pragma once

#include <cstdint>
#include <vector>

#include "sdb/rng.hpp"

namespace sdb {

// Row indices into a parent dataset of size parent_n. Ascending, no duplicates.
struct IndexSubset {
  std::vector<std::uint64_t> indices;
  bool contiguous = false;
  std::uint64_t parent_n = 0;
};

// Integer resampling weights over b subset positions; sum(w) == nominal_n.
struct WeightVector {
  std::vector<std::uint64_t> w;
  std::uint64_t nominal_n = 0;
};

// Uniform b-subset of {0,...,n-1} without replacement (Floyd's sampler).
// b == n returns the identity subset and consumes no randomness.
IndexSubset draw_iid_subset(std::uint64_t n, std::uint64_t b, RngStream& rng);

// Contiguous window of length b starting at J, J uniform on {0,...,n-b}.
// b == n returns the full window and consumes no randomness.
IndexSubset draw_ts_subset(std::uint64_t n, std::uint64_t b, RngStream& rng);

// Multinomial(nominal_n; 1/b,...,1/b) by the conditional binomial method:
// each cell is a binomial split of the remaining trials, O(b) total.
WeightVector draw_multinomial_weights(std::uint64_t nominal_n, std::uint64_t b, RngStream& rng);

// Moving-block weights over a window of b positions: K = ceil(nominal_n / L)
// block offsets drawn i.i.d. uniform on {0,...,b-L} (blocks never cross the
// window edge); the first K-1 blocks add 1 to positions t..t+L-1, the final
// block is truncated to its first nominal_n - (K-1)*L positions so the total
// weight is exactly nominal_n.
WeightVector draw_mbb_weights(std::uint64_t nominal_n, std::uint64_t b, std::uint64_t block_length,
                              RngStream& rng);

// All-ones weights with nominal_n == b: the unweighted subset itself.
WeightVector unit_weights(std::uint64_t b);

}  // namespace sdb

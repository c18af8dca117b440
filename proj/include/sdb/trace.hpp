#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sdb {

enum class Scheme { Boot, Blb, Sdb, Mbb, BlbTs, SdbTs };

// BLB variants carry R roots and a per-subset measure per record; all other
// schemes carry exactly one root per record.
constexpr bool scheme_is_blb(Scheme s) { return s == Scheme::Blb || s == Scheme::BlbTs; }

constexpr bool scheme_is_ts(Scheme s) {
  return s == Scheme::Mbb || s == Scheme::BlbTs || s == Scheme::SdbTs;
}

const char* scheme_name(Scheme s);
Scheme scheme_by_name(const std::string& name);  // boot|blb|sdb|mbb|blb_ts|sdb_ts

// Which estimate the roots of a record were centered on.
enum class ReferenceKind { SubsetEstimate, FullDataEstimate };

struct IterationRecord {
  std::uint64_t iteration_index = 0;  // 1-based, dense
  std::vector<double> roots;          // empty when failed
  std::optional<double> per_subset_measure;
  double completed_at = 0.0;          // seconds since run start
  bool failed = false;
  std::string error;                  // failure reason when failed
  ReferenceKind reference = ReferenceKind::SubsetEstimate;
  int worker = 0;
};

struct RootTrace {
  Scheme scheme = Scheme::Sdb;
  std::vector<IterationRecord> records;  // ascending iteration_index

  std::uint64_t failed_count() const {
    std::uint64_t c = 0;
    for (const auto& r : records) c += r.failed ? 1 : 0;
    return c;
  }
};

}  // namespace sdb

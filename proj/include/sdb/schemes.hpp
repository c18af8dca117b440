#pragma once

#include <chrono>
#include <cstdint>
#include <vector>

#include "sdb/dataset.hpp"
#include "sdb/estimators.hpp"
#include "sdb/measures.hpp"
#include "sdb/rng.hpp"
#include "sdb/sampling.hpp"
#include "sdb/trace.hpp"

namespace sdb {

struct SchemeConfig {
  Scheme scheme = Scheme::Sdb;
  std::uint64_t b = 0;             // distinct rows per subset; forced to n for Boot/Mbb
  std::uint64_t max_subsets = 0;   // S; 0 means no cap (budget only)
  std::uint64_t resamples = 100;   // R, BLB variants
  std::uint64_t block_length = 0;  // L, time-series schemes
  double budget_seconds = 0.0;
  std::uint64_t seed = 1;
};

// Injectable wall clock; now() returns seconds since the run started.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual double now() = 0;
};

class SteadyClock final : public Clock {
 public:
  SteadyClock() : start_(std::chrono::steady_clock::now()) {}
  double now() override {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

// Deterministic test clock: the k-th call returns (k-1)*step. Only meaningful
// with the serial executor, which calls now() once before the loop and once
// per completed iteration (so iteration i is stamped i*step).
class ManualClock final : public Clock {
 public:
  explicit ManualClock(double step) : step_(step) {}
  double now() override {
    const double t = t_;
    t_ += step_;
    return t;
  }

 private:
  double t_ = 0.0;
  double step_;
};

// Stream-aligned building blocks. Each draws everything it needs from the
// given stream in a fixed order, so two schemes fed the same stream state
// produce identical draws.
double sdb_root_draw(const Dataset& data, const Estimator& est, const RootSpec& root,
                     std::uint64_t b, RngStream& rng);
double sdb_ts_root_draw(const Dataset& data, const Estimator& est, const RootSpec& root,
                        std::uint64_t b, std::uint64_t block_length, RngStream& rng);
double boot_root_draw(const Dataset& data, const Estimator& est, const RootSpec& root,
                      const EstimateVector& full_reference, RngStream& rng);
double mbb_root_draw(const Dataset& data, const Estimator& est, const RootSpec& root,
                     const EstimateVector& full_reference, std::uint64_t block_length,
                     RngStream& rng);

struct BlbSubsetResult {
  std::vector<double> roots;  // R roots
  double measure = 0.0;       // plug-in of the subset's root ecdf
};
BlbSubsetResult blb_subset_draw(const Dataset& data, const Estimator& est, const RootSpec& root,
                                const MeasureSpec& measure, std::uint64_t b, std::uint64_t resamples,
                                RngStream& rng);
BlbSubsetResult blb_ts_subset_draw(const Dataset& data, const Estimator& est, const RootSpec& root,
                                   const MeasureSpec& measure, std::uint64_t b,
                                   std::uint64_t resamples, std::uint64_t block_length,
                                   RngStream& rng);

// Validated execution plan. For Boot/Mbb the full-data reference estimate is
// computed once here and shared by every iteration.
struct RunPlan {
  const Dataset* data = nullptr;
  const Estimator* estimator = nullptr;
  const RootSpec* root = nullptr;
  MeasureSpec measure;
  SchemeConfig config;
  EstimateVector full_reference;
};

RunPlan make_plan(const Dataset& data, const Estimator& est, const RootSpec& root,
                  const MeasureSpec& measure, SchemeConfig config);

// One iteration: derives substream(seed, iteration_index), draws the subset
// and resample(s), and computes the root(s). Estimation errors are captured
// in the record (failed = true), not thrown.
IterationRecord run_iteration(const RunPlan& plan, std::uint64_t iteration_index);

// Runs iterations until the budget expires or max_subsets is reached. An
// iteration in flight at expiry completes and is included with its true
// completion time. workers <= 1 uses the serial reference executor; more
// workers run an OpenMP pool over the same per-iteration substreams, so the
// set of produced records is identical either way.
RootTrace run_budgeted(const RunPlan& plan, Clock& clock, int workers = 1);

}  // namespace sdb

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sdb/trace.hpp"

namespace sdb {

// Root ensemble in sorted order.
struct EmpiricalDistribution {
  std::vector<double> sorted;
  std::uint64_t count() const { return sorted.size(); }
};

// Throws EmptyEnsembleError on an empty input.
EmpiricalDistribution ecdf_build(std::vector<double> roots);

// Inverse-ecdf (left-continuous) quantile: the value of rank ceil(alpha * count).
// Requires 0 < alpha < 1.
double quantile(const EmpiricalDistribution& dist, double alpha);

// Precision functional applied to a root ensemble.
struct MeasureSpec {
  enum class Kind { Quantile, Width, ScaledMse };
  Kind kind = Kind::Quantile;
  double alpha = 0.95;  // Quantile
  double lo = 0.05;     // Width
  double hi = 0.95;

  // "quantile:A" | "width:LO,HI" | "mse"
  static MeasureSpec parse(const std::string& text);
  std::string str() const;
};

double plug_in(const EmpiricalDistribution& dist, const MeasureSpec& measure);

// Arithmetic mean of per-subset measures (the BLB aggregation step).
double blb_aggregate(const std::vector<double>& per_subset);

// |estimate / truth - 1|. Requires truth != 0.
double error_rate(double estimate, double truth);

struct EvolutionPoint {
  double t = 0.0;
  double estimate = 0.0;
  double error = 0.0;
  bool has_estimate = false;
};

struct ErrorEvolution {
  std::vector<EvolutionPoint> points;
};

// Cumulative estimate and error rate on the grid {grid_step, 2*grid_step, ...}
// up to horizon. At time t only successful records with completed_at <= t
// contribute: pooled roots for single-root schemes, the running mean of
// per-subset measures for BLB variants. Before the first contributing record
// the error is 1 (when truth is known) and the estimate is absent. Without a
// truth the error stays NaN.
ErrorEvolution evaluate_trace(const RootTrace& trace, const MeasureSpec& measure,
                              std::optional<double> truth, double grid_step, double horizon);

}  // namespace sdb

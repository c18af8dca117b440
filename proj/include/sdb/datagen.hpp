#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sdb/dataset.hpp"
#include "sdb/estimators.hpp"
#include "sdb/measures.hpp"
#include "sdb/rng.hpp"

namespace sdb {

// Synthetic model families:
//   LinReg:  x_ij ~ t3, e_i ~ N(0, noise_sd^2), y = x'beta + e, beta = (1,...,1)'
//   LogReg:  x_ij ~ t3, P(y=1|x) = logistic(x'beta), beta = (1,...,1)'
//   Ar1:     X_t = rho X_{t-1} + e_t, e_t ~ N(0, innovation_sd^2), stationary start
//   Ar1Homo: d+1 mutually independent unit-innovation AR(1) series; the first d
//            are regressors, y = x'beta + u with beta = 0
// beta_fill overrides the coefficient fill value (test hook).
struct ModelSpec {
  enum class Kind { LinReg, LogReg, Ar1, Ar1Homo };
  Kind kind = Kind::LinReg;
  std::uint64_t n = 0;
  std::uint64_t d = 0;
  double rho = 0.0;
  double noise_sd = 10.0;
  double innovation_sd = 1.0;
  std::optional<double> beta_fill;

  // The analytically known parameter the roots are centered on: the
  // coefficient vector for regressions, 0 (mean and median) for Ar1.
  EstimateVector true_parameter() const;

  static ModelSpec::Kind kind_by_name(const std::string& name);
  const char* kind_name() const;
};

// Student t with 3 degrees of freedom: Z / sqrt((Z1^2+Z2^2+Z3^2)/3).
double sample_t3(RngStream& rng);

Dataset generate(const ModelSpec& spec, RngStream& rng);

struct OracleResult {
  double measure_truth = 0.0;
  std::uint64_t reps = 0;
  double standard_error = 0.0;  // bootstrap SE of measure_truth (500 resamples)
};

// Monte Carlo truth: generates `reps` independent datasets (substream(seed, r),
// r = 1..reps), computes the full-data root against the analytic parameter for
// each, and applies the measure to the resulting ensemble. Replications are
// independent and run in parallel when workers > 1 with identical results.
OracleResult mc_oracle(const ModelSpec& spec, const Estimator& est, const RootSpec& root,
                       const MeasureSpec& measure, std::uint64_t reps, std::uint64_t seed,
                       int workers = 1);

}  // namespace sdb

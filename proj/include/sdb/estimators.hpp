#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>

#include "sdb/dataset.hpp"

namespace sdb {

using EstimateVector = Eigen::VectorXd;

struct LogisticOptions {
  double tol = 1e-8;            // convergence: max-norm of the weighted score
  int max_iter = 50;
  double divergence_norm = 1e6; // ||beta|| beyond this signals separation
};

// Weighted mean of a univariate sample: sum(w*y) / sum(w).
EstimateVector weighted_mean(const WeightedSample& ws);

// Weighted median, lower-median convention: the value at rank ceil(N/2) of the
// weight-expanded multiset (N = total weight). Equals the inverse-ecdf
// quantile at alpha = 1/2.
EstimateVector weighted_median(const WeightedSample& ws);

// Weighted least squares: solves (X'WX) beta = X'Wy. The Gram matrix is
// eigendecomposed; condition number above 1e12 (or a nonpositive eigenvalue)
// raises SingularDesignError.
EstimateVector weighted_ols(const WeightedSample& ws);

// Weighted logistic MLE (logit link) by Newton-Raphson from beta = 0.
// Converges when the weighted score max-norm drops below tol; throws
// SeparationError when ||beta|| exceeds divergence_norm and ConvergenceError
// after max_iter updates.
EstimateVector weighted_logistic(const WeightedSample& ws, const LogisticOptions& opt = {});

// sqrt(nominal_n) * (est - ref) for scalar estimates.
double root_sqrt_n_diff(const WeightedSample& resample, const EstimateVector& est,
                        const EstimateVector& ref);

// F-type root with weighted cross-products:
//   [(est-ref)' (X'WX) (est-ref) / d] / [sum_i w_i (y_i - x_i'est)^2 / (nominal_n - d - 1)].
double root_f_statistic(const WeightedSample& resample, const EstimateVector& est,
                        const EstimateVector& ref);

// Wald-type root (est-ref)' Sigma (est-ref) with
// Sigma = sum_i w_i p_i (1-p_i) x_i x_i' evaluated at est.
double root_wald_logistic(const WeightedSample& resample, const EstimateVector& est,
                          const EstimateVector& ref);

struct Estimator {
  std::string name;
  std::function<EstimateVector(const WeightedSample&)> fit;
};

struct RootSpec {
  std::string name;
  std::function<double(const WeightedSample&, const EstimateVector&, const EstimateVector&)> eval;
};

// mean | median | ols | logistic
const Estimator& estimator_by_name(const std::string& name);

// sqrtn | fstat | wald
const RootSpec& root_by_name(const std::string& name);

}  // namespace sdb

#include "sdb/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "sdb/error.hpp"

namespace sdb {

namespace {

constexpr double kConditionLimit = 1e12;

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

// Solves G x = v through the eigendecomposition of the symmetric PSD matrix G;
// rejects nonpositive eigenvalues and condition numbers above kConditionLimit.
Eigen::VectorXd solve_spd(const Eigen::MatrixXd& G, const Eigen::VectorXd& v, const char* what) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
  if (es.info() != Eigen::Success) throw SingularDesignError(std::string(what) + ": eigendecomposition failed");
  const auto& ev = es.eigenvalues();
  const double lmin = ev(0);
  const double lmax = ev(ev.size() - 1);
  if (!(lmin > 0.0) || lmax / lmin > kConditionLimit) {
    throw SingularDesignError(std::string(what) + ": matrix is singular or ill-conditioned");
  }
  return es.eigenvectors() * (es.eigenvectors().transpose() * v).cwiseQuotient(ev);
}

void require_univariate(const WeightedSample& ws, const char* name) {
  if (ws.data == nullptr || ws.data->d != 0) {
    throw ConfigError(std::string(name) + " expects a univariate dataset (d == 0)");
  }
}

void require_regression(const WeightedSample& ws, const char* name) {
  if (ws.data == nullptr || ws.data->d == 0) {
    throw ConfigError(std::string(name) + " expects a regression dataset (d >= 1)");
  }
}

struct ErrorFreePair {
  double value;
  double error;
};

ErrorFreePair two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

ErrorFreePair two_prod(double a, double b) {
  constexpr double splitter = 134217729.0;  // 2^27 + 1
  const double p = a * b;
  const double ca = splitter * a;
  const double a_hi = ca - (ca - a);
  const double a_lo = a - a_hi;
  const double cb = splitter * b;
  const double b_hi = cb - (cb - b);
  const double b_lo = b - b_hi;
  const double err = ((a_hi * b_hi - p) + a_hi * b_lo + a_lo * b_hi) + a_lo * b_lo;
  return {p, err};
}

}  // namespace

EstimateVector weighted_mean(const WeightedSample& ws) {
  require_univariate(ws, "mean");
  // Error-free products and a compensated sum keep the result independent of
  // weight splitting: the mean of any weight expansion matches bitwise.
  std::uint64_t sw = 0;
  double hi = 0.0;
  double lo = 0.0;
  for (std::uint64_t k = 0; k < ws.size(); ++k) {
    const std::uint64_t w = ws.weights[k];
    if (w == 0) continue;
    sw += w;
    const ErrorFreePair prod = two_prod(static_cast<double>(w), ws.y(k));
    const ErrorFreePair sum = two_sum(hi, prod.value);
    hi = sum.value;
    lo += prod.error + sum.error;
  }
  if (sw == 0) throw DegenerateSampleError("mean: all weights are zero");
  EstimateVector out(1);
  out(0) = (hi + lo) / static_cast<double>(sw);
  return out;
}

EstimateVector weighted_median(const WeightedSample& ws) {
  require_univariate(ws, "median");
  std::vector<std::pair<double, std::uint64_t>> vw;
  vw.reserve(ws.size());
  std::uint64_t total = 0;
  for (std::uint64_t k = 0; k < ws.size(); ++k) {
    const std::uint64_t w = ws.weights[k];
    if (w == 0) continue;
    vw.emplace_back(ws.y(k), w);
    total += w;
  }
  if (total == 0) throw DegenerateSampleError("median: all weights are zero");
  std::sort(vw.begin(), vw.end());
  const std::uint64_t target = (total + 1) / 2;  // rank ceil(N/2), the lower median
  std::uint64_t cum = 0;
  for (const auto& [value, w] : vw) {
    cum += w;
    if (cum >= target) {
      EstimateVector out(1);
      out(0) = value;
      return out;
    }
  }
  throw DegenerateSampleError("median: cumulative weights never reach the median rank");
}

EstimateVector weighted_ols(const WeightedSample& ws) {
  require_regression(ws, "ols");
  const auto d = static_cast<Eigen::Index>(ws.data->d);
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(d, d);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
  double sw = 0.0;
  for (std::uint64_t k = 0; k < ws.size(); ++k) {
    const double w = static_cast<double>(ws.weights[k]);
    if (w == 0.0) continue;
    sw += w;
    Eigen::Map<const Eigen::VectorXd> xi(ws.row(k), d);
    G.noalias() += w * (xi * xi.transpose());
    v.noalias() += (w * ws.y(k)) * xi;
  }
  if (sw == 0.0) throw DegenerateSampleError("ols: all weights are zero");
  return solve_spd(G, v, "ols");
}

EstimateVector weighted_logistic(const WeightedSample& ws, const LogisticOptions& opt) {
  require_regression(ws, "logistic");
  const auto d = static_cast<Eigen::Index>(ws.data->d);
  {
    std::uint64_t total = 0;
    for (std::uint64_t k = 0; k < ws.size(); ++k) total += ws.weights[k];
    if (total == 0) throw DegenerateSampleError("logistic: all weights are zero");
  }
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(d);
  double score_norm = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < opt.max_iter; ++iter) {
    Eigen::VectorXd score = Eigen::VectorXd::Zero(d);
    Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(d, d);
    for (std::uint64_t k = 0; k < ws.size(); ++k) {
      const double w = static_cast<double>(ws.weights[k]);
      if (w == 0.0) continue;
      Eigen::Map<const Eigen::VectorXd> xi(ws.row(k), d);
      const double p = sigmoid(xi.dot(beta));
      score.noalias() += (w * (ws.y(k) - p)) * xi;
      hess.noalias() += (w * p * (1.0 - p)) * (xi * xi.transpose());
    }
    score_norm = score.lpNorm<Eigen::Infinity>();
    if (score_norm < opt.tol) return beta;
    beta += solve_spd(hess, score, "logistic");
    if (beta.norm() > opt.divergence_norm) {
      throw SeparationError("logistic: estimate diverged (separated sample)");
    }
  }
  if (score_norm < opt.tol) return beta;
  throw ConvergenceError("logistic: Newton-Raphson did not converge", opt.max_iter, score_norm);
}

double root_sqrt_n_diff(const WeightedSample& resample, const EstimateVector& est,
                        const EstimateVector& ref) {
  if (est.size() != 1 || ref.size() != 1) {
    throw ConfigError("sqrtn root expects scalar estimates");
  }
  return std::sqrt(static_cast<double>(resample.nominal_n)) * (est(0) - ref(0));
}

double root_f_statistic(const WeightedSample& resample, const EstimateVector& est,
                        const EstimateVector& ref) {
  require_regression(resample, "fstat root");
  const auto d = static_cast<Eigen::Index>(resample.data->d);
  if (est.size() != d || ref.size() != d) {
    throw ConfigError("fstat root: estimate dimension does not match the design");
  }
  if (resample.nominal_n <= resample.data->d + 1) {
    throw ConfigError("fstat root needs nominal_n > d + 1");
  }
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(d, d);
  double rss = 0.0;
  for (std::uint64_t k = 0; k < resample.size(); ++k) {
    const double w = static_cast<double>(resample.weights[k]);
    if (w == 0.0) continue;
    Eigen::Map<const Eigen::VectorXd> xi(resample.row(k), d);
    G.noalias() += w * (xi * xi.transpose());
    const double r = resample.y(k) - xi.dot(est);
    rss += w * r * r;
  }
  const Eigen::VectorXd diff = est - ref;
  const double numerator = diff.dot(G * diff) / static_cast<double>(d);
  const double denominator =
      rss / static_cast<double>(resample.nominal_n - resample.data->d - 1);
  if (!(denominator > 0.0)) {
    throw DegenerateSampleError("fstat root: zero residual variance");
  }
  return numerator / denominator;
}

double root_wald_logistic(const WeightedSample& resample, const EstimateVector& est,
                          const EstimateVector& ref) {
  require_regression(resample, "wald root");
  const auto d = static_cast<Eigen::Index>(resample.data->d);
  if (est.size() != d || ref.size() != d) {
    throw ConfigError("wald root: estimate dimension does not match the design");
  }
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(d, d);
  for (std::uint64_t k = 0; k < resample.size(); ++k) {
    const double w = static_cast<double>(resample.weights[k]);
    if (w == 0.0) continue;
    Eigen::Map<const Eigen::VectorXd> xi(resample.row(k), d);
    const double p = sigmoid(xi.dot(est));
    sigma.noalias() += (w * p * (1.0 - p)) * (xi * xi.transpose());
  }
  const Eigen::VectorXd diff = est - ref;
  return diff.dot(sigma * diff);
}

const Estimator& estimator_by_name(const std::string& name) {
  static const Estimator kMean{"mean", [](const WeightedSample& ws) { return weighted_mean(ws); }};
  static const Estimator kMedian{"median",
                                 [](const WeightedSample& ws) { return weighted_median(ws); }};
  static const Estimator kOls{"ols", [](const WeightedSample& ws) { return weighted_ols(ws); }};
  static const Estimator kLogistic{
      "logistic", [](const WeightedSample& ws) { return weighted_logistic(ws); }};
  if (name == "mean") return kMean;
  if (name == "median") return kMedian;
  if (name == "ols") return kOls;
  if (name == "logistic") return kLogistic;
  throw ConfigError("unknown estimator '" + name + "' (expected mean|median|ols|logistic)");
}

const RootSpec& root_by_name(const std::string& name) {
  static const RootSpec kSqrtN{"sqrtn", root_sqrt_n_diff};
  static const RootSpec kFstat{"fstat", root_f_statistic};
  static const RootSpec kWald{"wald", root_wald_logistic};
  if (name == "sqrtn") return kSqrtN;
  if (name == "fstat") return kFstat;
  if (name == "wald") return kWald;
  throw ConfigError("unknown root '" + name + "' (expected sqrtn|fstat|wald)");
}

}  // namespace sdb

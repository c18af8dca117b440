#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "sdb/error.hpp"
#include "sdb/estimators.hpp"
#include "sdb/rng.hpp"
#include "test_util.hpp"

using namespace sdb;
using testutil::expand;
using testutil::sample_of;
using testutil::series;
using testutil::unit_sample;

namespace {

// Reference implementations operating on raw (expanded) data only.

double plain_mean(const std::vector<double>& v) {
  double s = 0.0;
  for (const double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double plain_lower_median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[(v.size() + 1) / 2 - 1];
}

Eigen::MatrixXd design_of(const Dataset& data) {
  Eigen::MatrixXd X(data.n(), data.d);
  for (std::uint64_t i = 0; i < data.n(); ++i) {
    for (std::uint64_t j = 0; j < data.d; ++j) X(i, j) = data.x[i * data.d + j];
  }
  return X;
}

Eigen::VectorXd response_of(const Dataset& data) {
  return Eigen::Map<const Eigen::VectorXd>(data.y.data(), data.n());
}

Eigen::VectorXd qr_ols(const Dataset& data) {
  return design_of(data).colPivHouseholderQr().solve(response_of(data));
}

// Independent logistic MLE on raw data: damped-free Newton with a tight
// tolerance and generous iteration cap.
Eigen::VectorXd reference_logistic(const Dataset& data) {
  const Eigen::MatrixXd X = design_of(data);
  const Eigen::VectorXd y = response_of(data);
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(data.d);
  for (int it = 0; it < 200; ++it) {
    const Eigen::VectorXd eta = X * beta;
    Eigen::VectorXd p(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i) p[i] = 1.0 / (1.0 + std::exp(-eta[i]));
    const Eigen::VectorXd score = X.transpose() * (y - p);
    if (score.lpNorm<Eigen::Infinity>() < 1e-12) break;
    const Eigen::VectorXd s = p.array() * (1.0 - p.array());
    const Eigen::MatrixXd H = X.transpose() * s.asDiagonal() * X;
    beta += H.ldlt().solve(score);
  }
  return beta;
}

Dataset random_univariate(RngStream& rng, std::uint64_t b) {
  Dataset d;
  d.d = 0;
  for (std::uint64_t i = 0; i < b; ++i) d.y.push_back(rng.normal());
  return d;
}

Dataset random_regression(RngStream& rng, std::uint64_t b, std::uint64_t dim, bool binary) {
  Dataset d;
  d.d = dim;
  for (std::uint64_t i = 0; i < b; ++i) {
    double xb = 0.0;
    for (std::uint64_t j = 0; j < dim; ++j) {
      const double x = rng.normal();
      d.x.push_back(x);
      xb += 0.5 * x;
    }
    if (binary) {
      const double p = 1.0 / (1.0 + std::exp(-xb));
      d.y.push_back(rng.next_unit() < p ? 1.0 : 0.0);
    } else {
      d.y.push_back(xb + rng.normal());
    }
  }
  return d;
}

std::vector<std::uint64_t> random_weights(RngStream& rng, std::uint64_t b) {
  std::vector<std::uint64_t> w(b);
  std::uint64_t total = 0;
  for (auto& wi : w) {
    wi = rng.uniform_index(4);  // 0..3, zeros exercise dropped rows
    total += wi;
  }
  if (total == 0) w[rng.uniform_index(b)] = 1 + rng.uniform_index(3);
  return w;
}

}  // namespace

TEST_CASE("weighted mean: pinned examples") {
  const Dataset d1 = series({1, 2, 3});
  CHECK(weighted_mean(sample_of(d1, {0, 1, 2}, {1, 1, 1}).view())[0] == 2.0);
  CHECK(weighted_mean(sample_of(d1, {0, 1, 2}, {0, 0, 3}).view())[0] == 3.0);
  const Dataset d2 = series({1.5, -0.5, 4.0});
  CHECK(weighted_mean(sample_of(d2, {0, 1, 2}, {2, 1, 1}).view())[0] == doctest::Approx(1.625).epsilon(1e-15));
}

TEST_CASE("weighted mean: all-zero weights degenerate") {
  const Dataset d = series({1, 2});
  CHECK_THROWS_AS(weighted_mean(sample_of(d, {0, 1}, {0, 0}).view()), DegenerateSampleError);
}

TEST_CASE("weighted mean: rejects regression data") {
  Dataset d;
  d.d = 1;
  d.y = {1, 2};
  d.x = {1, 2};
  CHECK_THROWS_AS(weighted_mean(unit_sample(d).view()), ConfigError);
}

TEST_CASE("weighted median: pinned examples") {
  const Dataset d1 = series({1, 2, 3});
  CHECK(weighted_median(sample_of(d1, {0, 1, 2}, {1, 1, 3}).view())[0] == 3.0);
  const Dataset d2 = series({5});
  CHECK(weighted_median(sample_of(d2, {0}, {4}).view())[0] == 5.0);
  const Dataset d3 = series({1, 2, 3, 4});
  // lower median of the expansion {1,2,2,3,3,4}
  CHECK(weighted_median(sample_of(d3, {0, 1, 2, 3}, {1, 2, 2, 1}).view())[0] == 2.0);
}

TEST_CASE("weighted median: all-zero weights degenerate") {
  const Dataset d = series({1, 2});
  CHECK_THROWS_AS(weighted_median(sample_of(d, {0, 1}, {0, 0}).view()), DegenerateSampleError);
}

TEST_CASE("weighted ols: pinned examples") {
  Dataset exact;
  exact.d = 1;
  exact.y = {2, 4};
  exact.x = {1, 2};
  CHECK(weighted_ols(unit_sample(exact).view())[0] == doctest::Approx(2.0).epsilon(1e-12));

  Dataset weighted;
  weighted.d = 1;
  weighted.y = {1, 3};
  weighted.x = {1, 1};
  // closed form: sum(w x y) / sum(w x^2) = (1 + 9) / 4
  CHECK(weighted_ols(sample_of(weighted, {0, 1}, {1, 3}).view())[0] ==
        doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("weighted ols: all-zero regressors are singular") {
  Dataset d;
  d.d = 1;
  d.y = {1, 2, 3};
  d.x = {0, 0, 0};
  CHECK_THROWS_AS(weighted_ols(unit_sample(d).view()), SingularDesignError);
}

TEST_CASE("weighted ols: scale equivariance in y") {
  RngStream rng(101);
  for (int trial = 0; trial < 20; ++trial) {
    const Dataset d = random_regression(rng, 12, 2, false);
    const auto s = unit_sample(d);
    const Eigen::VectorXd beta = weighted_ols(s.view());
    Dataset scaled = d;
    for (auto& y : scaled.y) y *= -3.5;
    const auto s2 = unit_sample(scaled);
    const Eigen::VectorXd beta2 = weighted_ols(s2.view());
    CHECK((beta2 + 3.5 * beta).lpNorm<Eigen::Infinity>() < 1e-10);
  }
}

TEST_CASE("weighted logistic: symmetry pins beta at zero") {
  Dataset d;
  d.d = 1;
  d.y = {1, 1, 0, 0};
  d.x = {1, -1, 1, -1};
  CHECK(std::abs(weighted_logistic(unit_sample(d).view())[0]) < 1e-8);

  Dataset half;
  half.d = 1;
  half.y = {1, 0};
  half.x = {1, 1};
  CHECK(std::abs(weighted_logistic(unit_sample(half).view())[0]) < 1e-8);
}

TEST_CASE("weighted logistic: matches the expanded-data MLE") {
  Dataset d;
  d.d = 1;
  d.y = {1, 0, 0, 1};
  d.x = {1, 2, -1, -2};
  const auto s = sample_of(d, {0, 1, 2, 3}, {2, 1, 1, 1});
  const Eigen::VectorXd beta = weighted_logistic(s.view());
  const Eigen::VectorXd ref = reference_logistic(expand(s.view()));
  CHECK((beta - ref).lpNorm<Eigen::Infinity>() < 1e-8);
}

TEST_CASE("weighted logistic: divergence threshold reports separation") {
  Dataset d;
  d.d = 1;
  d.y = {1, 0};
  d.x = {1, -1};  // perfectly separated
  LogisticOptions opt;
  opt.divergence_norm = 3.0;
  CHECK_THROWS_AS(weighted_logistic(unit_sample(d).view(), opt), SeparationError);
}

TEST_CASE("weighted logistic: iteration cap reports nonconvergence") {
  Dataset d;
  d.d = 1;
  d.y = {1, 0, 0, 1, 1};
  d.x = {0.5, 2.0, -1.0, -2.0, 1.5};
  LogisticOptions opt;
  opt.max_iter = 1;
  opt.tol = 1e-14;
  try {
    weighted_logistic(unit_sample(d).view(), opt);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.iterations == 1);
    CHECK(e.score_norm > 0.0);
  }
}

TEST_CASE("weighted logistic: score small and Hessian negative semidefinite at the fit") {
  RngStream rng(103);
  for (int trial = 0; trial < 20; ++trial) {
    const Dataset d = random_regression(rng, 20, 2, true);
    const double ymin = *std::min_element(d.y.begin(), d.y.end());
    const double ymax = *std::max_element(d.y.begin(), d.y.end());
    if (ymin == ymax) continue;  // degenerate draw, nothing to fit
    const auto s = unit_sample(d);
    Eigen::VectorXd beta;
    try {
      beta = weighted_logistic(s.view());
    } catch (const EstimationError&) {
      continue;  // separated draw
    }
    const Eigen::MatrixXd X = design_of(d);
    const Eigen::VectorXd y = response_of(d);
    const Eigen::VectorXd eta = X * beta;
    Eigen::VectorXd p(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i) p[i] = 1.0 / (1.0 + std::exp(-eta[i]));
    CHECK((X.transpose() * (y - p)).lpNorm<Eigen::Infinity>() < 1e-8);
    const Eigen::VectorXd sdiag = p.array() * (1.0 - p.array());
    const Eigen::MatrixXd negH = X.transpose() * sdiag.asDiagonal() * X;
    CHECK(Eigen::LLT<Eigen::MatrixXd>(negH).info() == Eigen::Success);
  }
}

TEST_CASE("sqrt-n root: pinned examples") {
  const Dataset d = series({0});
  const auto s = sample_of(d, {0}, {100});
  Eigen::VectorXd a(1), b(1);
  a << 1.0;
  b << 1.0;
  CHECK(root_sqrt_n_diff(s.view(), a, b) == 0.0);
  a << 1.2;
  CHECK(root_sqrt_n_diff(s.view(), a, b) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("sqrt-n root: hand computation on a 6-point subset") {
  const Dataset d = series({3, 1, 4, 1, 5, 9});
  const auto subset = unit_sample(d);
  const auto resample = sample_of(d, {0, 1, 2, 3, 4, 5}, {2, 0, 1, 1, 2, 0});
  const Eigen::VectorXd ref = weighted_median(subset.view());
  const Eigen::VectorXd est = weighted_median(resample.view());
  // expansion {3,3,4,1,5,5}: sorted {1,3,3,4,5,5}, lower median 3; subset median 3
  CHECK(est[0] == 3.0);
  CHECK(ref[0] == 3.0);
  CHECK(root_sqrt_n_diff(resample.view(), est, ref) == 0.0);
}

TEST_CASE("f root: zero at the reference and textbook reduction at unit weights") {
  RngStream rng(107);
  const Dataset d = random_regression(rng, 15, 2, false);
  const auto s = unit_sample(d);
  const Eigen::VectorXd est = weighted_ols(s.view());
  CHECK(root_f_statistic(s.view(), est, est) == 0.0);

  Eigen::VectorXd ref = Eigen::VectorXd::Constant(2, 0.25);
  const double got = root_f_statistic(s.view(), est, ref);
  // textbook F on the raw data
  const Eigen::MatrixXd X = design_of(d);
  const Eigen::VectorXd y = response_of(d);
  const Eigen::VectorXd diff = est - ref;
  const double numer = diff.dot((X.transpose() * X) * diff) / 2.0;
  const double denom = (y - X * est).squaredNorm() / (15.0 - 2.0 - 1.0);
  CHECK(got == doctest::Approx(numer / denom).epsilon(1e-12));
}

TEST_CASE("f root: hand-computed weighted 4-row case") {
  Dataset d;
  d.d = 1;
  d.y = {1.0, 2.5, 2.5, 4.0};
  d.x = {1.0, 2.0, 3.0, 4.0};
  const auto s = sample_of(d, {0, 1, 2, 3}, {2, 1, 0, 1});
  const Eigen::VectorXd est = weighted_ols(s.view());
  // beta = sum(w x y)/sum(w x^2) = (2*1 + 1*5 + 0 + 1*16) / (2 + 4 + 0 + 16)
  CHECK(est[0] == doctest::Approx(23.0 / 22.0).epsilon(1e-12));
  Eigen::VectorXd ref(1);
  ref << 0.5;
  const double numer = (est[0] - 0.5) * (est[0] - 0.5) * 22.0;
  const double rss = 2 * std::pow(1.0 - est[0], 2) + std::pow(2.5 - 2.0 * est[0], 2) +
                     std::pow(4.0 - 4.0 * est[0], 2);
  // nominal n = 4, d = 1, so the denominator has 2 degrees of freedom
  CHECK(root_f_statistic(s.view(), est, ref) ==
        doctest::Approx(numer / (rss / 2.0)).epsilon(1e-12));
}

TEST_CASE("f root: insufficient degrees of freedom") {
  Dataset d;
  d.d = 1;
  d.y = {1, 2};
  d.x = {1, 2};
  const auto s = unit_sample(d);
  Eigen::VectorXd est(1), ref(1);
  est << 1.0;
  ref << 0.0;
  CHECK_THROWS_AS(root_f_statistic(s.view(), est, ref), ConfigError);
}

TEST_CASE("wald root: pinned single-row example") {
  Dataset d;
  d.d = 1;
  d.y = {1};
  d.x = {1};
  const auto s = unit_sample(d);
  Eigen::VectorXd est(1), ref(1);
  est << 0.0;
  ref << 1.0;
  CHECK(root_wald_logistic(s.view(), est, ref) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(root_wald_logistic(s.view(), est, est) == 0.0);
}

TEST_CASE("wald root: matches expanded-data information") {
  RngStream rng(109);
  const Dataset d = random_regression(rng, 4, 2, true);
  const auto s = sample_of(d, {0, 1, 2, 3}, {2, 1, 3, 1});
  Eigen::VectorXd est(2), ref(2);
  est << 0.3, -0.2;
  ref << 1.0, 1.0;
  const Dataset big = expand(s.view());
  const Eigen::MatrixXd X = design_of(big);
  const Eigen::VectorXd eta = X * est;
  Eigen::MatrixXd info = Eigen::MatrixXd::Zero(2, 2);
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    const double p = 1.0 / (1.0 + std::exp(-eta[i]));
    info += p * (1.0 - p) * X.row(i).transpose() * X.row(i);
  }
  const Eigen::VectorXd diff = est - ref;
  CHECK(root_wald_logistic(s.view(), est, ref) ==
        doctest::Approx(diff.dot(info * diff)).epsilon(1e-10));
}

TEST_CASE("roots: invariant to permuting rows with their weights") {
  RngStream rng(113);
  const Dataset d = random_regression(rng, 8, 2, true);
  const std::vector<std::uint64_t> idx{0, 1, 2, 3, 4, 5, 6, 7};
  const std::vector<std::uint64_t> w{2, 1, 0, 3, 1, 1, 2, 1};
  const std::vector<std::uint64_t> perm{5, 2, 7, 0, 3, 6, 1, 4};
  std::vector<std::uint64_t> idx_p;
  std::vector<std::uint64_t> w_p;
  for (const std::uint64_t k : perm) {
    idx_p.push_back(idx[k]);
    w_p.push_back(w[k]);
  }
  const auto s = sample_of(d, idx, w);
  const auto sp = sample_of(d, idx_p, w_p);
  Eigen::VectorXd est(2), ref(2);
  est << 0.4, -0.1;
  ref << 0.0, 0.2;
  CHECK(root_wald_logistic(s.view(), est, ref) ==
        doctest::Approx(root_wald_logistic(sp.view(), est, ref)).epsilon(1e-12));

  Dataset cont = d;
  for (std::uint64_t i = 0; i < cont.n(); ++i) cont.y[i] = cont.x[i * 2] + 0.1 * cont.y[i];
  const auto cs = sample_of(cont, idx, w);
  const auto csp = sample_of(cont, idx_p, w_p);
  CHECK(root_f_statistic(cs.view(), est, ref) ==
        doctest::Approx(root_f_statistic(csp.view(), est, ref)).epsilon(1e-12));
}

TEST_CASE("expansion oracle: weighted estimators equal their unweighted counterparts") {
  RngStream rng(127);
  for (int trial = 0; trial < 150; ++trial) {
    const std::uint64_t b = 2 + rng.uniform_index(11);

    {
      const Dataset d = random_univariate(rng, b);
      auto s = testutil::whole_sample(d, random_weights(rng, b));
      const Dataset big = expand(s.view());
      const auto unit = unit_sample(big);
      CHECK(weighted_mean(s.view())[0] == weighted_mean(unit.view())[0]);
      CHECK(weighted_mean(s.view())[0] == doctest::Approx(plain_mean(big.y)).epsilon(1e-14));
      CHECK(weighted_median(s.view())[0] == plain_lower_median(big.y));
    }

    {
      const std::uint64_t dim = 1 + rng.uniform_index(2);
      const Dataset d = random_regression(rng, std::max<std::uint64_t>(b, dim + 2), dim, false);
      auto s = testutil::whole_sample(d, random_weights(rng, d.n()));
      const Dataset big = expand(s.view());
      Eigen::VectorXd beta;
      try {
        beta = weighted_ols(s.view());
      } catch (const SingularDesignError&) {
        continue;  // weights wiped out the design; nothing to compare
      }
      CHECK((beta - qr_ols(big)).lpNorm<Eigen::Infinity>() < 1e-8);
    }
  }
}

TEST_CASE("expansion oracle: weighted logistic equals the expanded MLE") {
  RngStream rng(131);
  int compared = 0;
  for (int trial = 0; trial < 80 && compared < 40; ++trial) {
    const Dataset d = random_regression(rng, 15, 2, true);
    auto s = testutil::whole_sample(d, random_weights(rng, d.n()));
    Eigen::VectorXd beta;
    try {
      beta = weighted_logistic(s.view());
    } catch (const EstimationError&) {
      continue;
    }
    const Eigen::VectorXd ref = reference_logistic(expand(s.view()));
    if (ref.lpNorm<Eigen::Infinity>() > 20.0) continue;  // near-separated, reference unstable
    CHECK((beta - ref).lpNorm<Eigen::Infinity>() < 1e-6);
    ++compared;
  }
  CHECK(compared >= 20);
}

TEST_CASE("unit-weight reduction reproduces the plain estimator") {
  RngStream rng(137);
  const Dataset d = random_univariate(rng, 9);
  const auto s = unit_sample(d);
  CHECK(weighted_mean(s.view())[0] == doctest::Approx(plain_mean(d.y)).epsilon(1e-14));
  CHECK(weighted_median(s.view())[0] == plain_lower_median(d.y));
}

TEST_CASE("registries resolve names") {
  CHECK(estimator_by_name("mean").name == "mean");
  CHECK(estimator_by_name("median").name == "median");
  CHECK(estimator_by_name("ols").name == "ols");
  CHECK(estimator_by_name("logistic").name == "logistic");
  CHECK_THROWS_AS(estimator_by_name("nope"), ConfigError);
  CHECK(root_by_name("sqrtn").name == "sqrtn");
  CHECK(root_by_name("fstat").name == "fstat");
  CHECK(root_by_name("wald").name == "wald");
  CHECK_THROWS_AS(root_by_name("nope"), ConfigError);
}

#include "sdb/datagen.hpp"

#include <cmath>
#include <exception>
#include <numeric>
#include <stdexcept>

#include "sdb/error.hpp"
#include "sdb/sampling.hpp"

namespace sdb {

namespace {

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

// One stationary AR(1) path appended column-wise by the caller.
std::vector<double> ar1_path(std::uint64_t n, double rho, double sd, RngStream& rng) {
  std::vector<double> x(n);
  double prev = rng.normal() * sd / std::sqrt(1.0 - rho * rho);
  x[0] = prev;
  for (std::uint64_t t = 1; t < n; ++t) {
    prev = rho * prev + sd * rng.normal();
    x[t] = prev;
  }
  return x;
}

void check_common(const ModelSpec& spec) {
  if (spec.n == 0) throw ConfigError("model needs n >= 1");
  switch (spec.kind) {
    case ModelSpec::Kind::LinReg:
    case ModelSpec::Kind::LogReg:
      if (spec.d == 0) throw ConfigError("regression model needs d >= 1");
      break;
    case ModelSpec::Kind::Ar1:
      if (!(std::abs(spec.rho) < 1.0)) throw ConfigError("AR(1) needs |rho| < 1");
      break;
    case ModelSpec::Kind::Ar1Homo:
      if (spec.d == 0) throw ConfigError("ar1homo needs d >= 1");
      if (!(std::abs(spec.rho) < 1.0)) throw ConfigError("AR(1) needs |rho| < 1");
      break;
  }
}

}  // namespace

EstimateVector ModelSpec::true_parameter() const {
  switch (kind) {
    case Kind::LinReg:
    case Kind::LogReg:
      return EstimateVector::Constant(static_cast<Eigen::Index>(d), beta_fill.value_or(1.0));
    case Kind::Ar1:
      return EstimateVector::Constant(1, 0.0);
    case Kind::Ar1Homo:
      return EstimateVector::Constant(static_cast<Eigen::Index>(d), beta_fill.value_or(0.0));
  }
  throw ConfigError("unknown model kind");
}

ModelSpec::Kind ModelSpec::kind_by_name(const std::string& name) {
  if (name == "linreg") return Kind::LinReg;
  if (name == "logreg") return Kind::LogReg;
  if (name == "ar1") return Kind::Ar1;
  if (name == "ar1homo") return Kind::Ar1Homo;
  throw ConfigError("unknown model '" + name + "' (expected linreg|logreg|ar1|ar1homo)");
}

const char* ModelSpec::kind_name() const {
  switch (kind) {
    case Kind::LinReg: return "linreg";
    case Kind::LogReg: return "logreg";
    case Kind::Ar1: return "ar1";
    case Kind::Ar1Homo: return "ar1homo";
  }
  return "?";
}

double sample_t3(RngStream& rng) {
  const double z = rng.normal();
  const double c1 = rng.normal();
  const double c2 = rng.normal();
  const double c3 = rng.normal();
  return z / std::sqrt((c1 * c1 + c2 * c2 + c3 * c3) / 3.0);
}

Dataset generate(const ModelSpec& spec, RngStream& rng) {
  check_common(spec);
  Dataset data;
  switch (spec.kind) {
    case ModelSpec::Kind::LinReg: {
      const double fill = spec.beta_fill.value_or(1.0);
      data.d = spec.d;
      data.x.resize(spec.n * spec.d);
      data.y.resize(spec.n);
      for (std::uint64_t i = 0; i < spec.n; ++i) {
        double xb = 0.0;
        for (std::uint64_t j = 0; j < spec.d; ++j) {
          const double xij = sample_t3(rng);
          data.x[i * spec.d + j] = xij;
          xb += xij * fill;
        }
        data.y[i] = xb + spec.noise_sd * rng.normal();
      }
      break;
    }
    case ModelSpec::Kind::LogReg: {
      const double fill = spec.beta_fill.value_or(1.0);
      data.d = spec.d;
      data.x.resize(spec.n * spec.d);
      data.y.resize(spec.n);
      for (std::uint64_t i = 0; i < spec.n; ++i) {
        double xb = 0.0;
        for (std::uint64_t j = 0; j < spec.d; ++j) {
          const double xij = sample_t3(rng);
          data.x[i * spec.d + j] = xij;
          xb += xij * fill;
        }
        data.y[i] = (rng.next_unit() < sigmoid(xb)) ? 1.0 : 0.0;
      }
      break;
    }
    case ModelSpec::Kind::Ar1: {
      data.d = 0;
      data.y = ar1_path(spec.n, spec.rho, spec.innovation_sd, rng);
      break;
    }
    case ModelSpec::Kind::Ar1Homo: {
      const double fill = spec.beta_fill.value_or(0.0);
      data.d = spec.d;
      data.x.resize(spec.n * spec.d);
      data.y.resize(spec.n);
      for (std::uint64_t j = 0; j < spec.d; ++j) {
        const std::vector<double> col = ar1_path(spec.n, spec.rho, 1.0, rng);
        for (std::uint64_t i = 0; i < spec.n; ++i) data.x[i * spec.d + j] = col[i];
      }
      const std::vector<double> u = ar1_path(spec.n, spec.rho, 1.0, rng);
      for (std::uint64_t i = 0; i < spec.n; ++i) {
        double xb = 0.0;
        for (std::uint64_t j = 0; j < spec.d; ++j) xb += data.x[i * spec.d + j] * fill;
        data.y[i] = xb + u[i];
      }
      break;
    }
  }
  return data;
}

OracleResult mc_oracle(const ModelSpec& spec, const Estimator& est, const RootSpec& root,
                       const MeasureSpec& measure, std::uint64_t reps, std::uint64_t seed,
                       int workers) {
  if (reps < 2) throw ConfigError("oracle needs reps >= 2");
  check_common(spec);
  const EstimateVector truth = spec.true_parameter();
  std::vector<double> roots(reps);
  std::exception_ptr failure;

#pragma omp parallel for schedule(dynamic, 16) num_threads(workers > 1 ? workers : 1) \
    if (workers > 1)
  for (std::int64_t r = 0; r < static_cast<std::int64_t>(reps); ++r) {
    try {
      RngStream rng = substream(seed, static_cast<std::uint64_t>(r) + 1);
      const Dataset data = generate(spec, rng);
      std::vector<std::uint64_t> idx(data.n());
      std::iota(idx.begin(), idx.end(), 0);
      const WeightVector ones = unit_weights(data.n());
      const WeightedSample ws{&data, idx, ones.w, ones.nominal_n};
      const EstimateVector fit = est.fit(ws);
      roots[static_cast<std::uint64_t>(r)] = root.eval(ws, fit, truth);
    } catch (...) {
#pragma omp critical
      {
        if (!failure) failure = std::current_exception();
      }
    }
  }
  if (failure) std::rethrow_exception(failure);

  const EmpiricalDistribution dist = ecdf_build(roots);
  OracleResult out;
  out.reps = reps;
  out.measure_truth = plug_in(dist, measure);

  // Bootstrap SE of the measure over the root ensemble. Substream index 0 is
  // never used by replications, so this draw is independent of them.
  RngStream boot_rng = substream(seed, 0);
  constexpr int kBootstrap = 500;
  std::vector<double> values(kBootstrap);
  std::vector<double> resampled(reps);
  for (int bidx = 0; bidx < kBootstrap; ++bidx) {
    for (std::uint64_t i = 0; i < reps; ++i) {
      resampled[i] = roots[boot_rng.uniform_index(reps)];
    }
    values[bidx] = plug_in(ecdf_build(resampled), measure);
  }
  double mean = 0.0;
  for (const double v : values) mean += v;
  mean /= kBootstrap;
  double ss = 0.0;
  for (const double v : values) ss += (v - mean) * (v - mean);
  out.standard_error = std::sqrt(ss / (kBootstrap - 1));
  return out;
}

}  // namespace sdb

#include "sdb/schemes.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <string>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sdb/error.hpp"

namespace sdb {

namespace {

std::vector<std::uint64_t> identity_indices(std::uint64_t n) {
  std::vector<std::uint64_t> idx(n);
  for (std::uint64_t i = 0; i < n; ++i) idx[i] = i;
  return idx;
}

EstimateVector subset_estimate(const Dataset& data, const Estimator& est,
                               const std::vector<std::uint64_t>& indices) {
  const WeightVector ones = unit_weights(indices.size());
  const WeightedSample ws{&data, indices, ones.w, ones.nominal_n};
  return est.fit(ws);
}

double resample_root(const Dataset& data, const Estimator& est, const RootSpec& root,
                     const std::vector<std::uint64_t>& indices, const WeightVector& weights,
                     const EstimateVector& reference) {
  const WeightedSample ws{&data, indices, weights.w, weights.nominal_n};
  const EstimateVector theta = est.fit(ws);
  return root.eval(ws, theta, reference);
}

}  // namespace

const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::Boot: return "boot";
    case Scheme::Blb: return "blb";
    case Scheme::Sdb: return "sdb";
    case Scheme::Mbb: return "mbb";
    case Scheme::BlbTs: return "blb_ts";
    case Scheme::SdbTs: return "sdb_ts";
  }
  return "?";
}

Scheme scheme_by_name(const std::string& name) {
  if (name == "boot") return Scheme::Boot;
  if (name == "blb") return Scheme::Blb;
  if (name == "sdb") return Scheme::Sdb;
  if (name == "mbb") return Scheme::Mbb;
  if (name == "blb_ts") return Scheme::BlbTs;
  if (name == "sdb_ts") return Scheme::SdbTs;
  throw ConfigError("unknown scheme '" + name + "' (expected boot|blb|sdb|mbb|blb_ts|sdb_ts)");
}

double sdb_root_draw(const Dataset& data, const Estimator& est, const RootSpec& root,
                     std::uint64_t b, RngStream& rng) {
  const IndexSubset subset = draw_iid_subset(data.n(), b, rng);
  const EstimateVector reference = subset_estimate(data, est, subset.indices);
  const WeightVector weights = draw_multinomial_weights(data.n(), b, rng);
  return resample_root(data, est, root, subset.indices, weights, reference);
}

double sdb_ts_root_draw(const Dataset& data, const Estimator& est, const RootSpec& root,
                        std::uint64_t b, std::uint64_t block_length, RngStream& rng) {
  const IndexSubset subset = draw_ts_subset(data.n(), b, rng);
  const EstimateVector reference = subset_estimate(data, est, subset.indices);
  const WeightVector weights = draw_mbb_weights(data.n(), b, block_length, rng);
  return resample_root(data, est, root, subset.indices, weights, reference);
}

double boot_root_draw(const Dataset& data, const Estimator& est, const RootSpec& root,
                      const EstimateVector& full_reference, RngStream& rng) {
  const std::vector<std::uint64_t> idx = identity_indices(data.n());
  const WeightVector weights = draw_multinomial_weights(data.n(), data.n(), rng);
  return resample_root(data, est, root, idx, weights, full_reference);
}

double mbb_root_draw(const Dataset& data, const Estimator& est, const RootSpec& root,
                     const EstimateVector& full_reference, std::uint64_t block_length,
                     RngStream& rng) {
  const std::vector<std::uint64_t> idx = identity_indices(data.n());
  const WeightVector weights = draw_mbb_weights(data.n(), data.n(), block_length, rng);
  return resample_root(data, est, root, idx, weights, full_reference);
}

namespace {

BlbSubsetResult blb_subset_common(const Dataset& data, const Estimator& est, const RootSpec& root,
                                  const MeasureSpec& measure, const IndexSubset& subset,
                                  std::uint64_t resamples, bool ts, std::uint64_t block_length,
                                  RngStream& rng) {
  const EstimateVector reference = subset_estimate(data, est, subset.indices);
  BlbSubsetResult out;
  out.roots.reserve(resamples);
  for (std::uint64_t r = 0; r < resamples; ++r) {
    const WeightVector weights =
        ts ? draw_mbb_weights(data.n(), subset.indices.size(), block_length, rng)
           : draw_multinomial_weights(data.n(), subset.indices.size(), rng);
    out.roots.push_back(resample_root(data, est, root, subset.indices, weights, reference));
  }
  out.measure = plug_in(ecdf_build(out.roots), measure);
  return out;
}

}  // namespace

BlbSubsetResult blb_subset_draw(const Dataset& data, const Estimator& est, const RootSpec& root,
                                const MeasureSpec& measure, std::uint64_t b,
                                std::uint64_t resamples, RngStream& rng) {
  if (resamples == 0) throw ConfigError("BLB needs at least one resample per subset");
  const IndexSubset subset = draw_iid_subset(data.n(), b, rng);
  return blb_subset_common(data, est, root, measure, subset, resamples, false, 0, rng);
}

BlbSubsetResult blb_ts_subset_draw(const Dataset& data, const Estimator& est, const RootSpec& root,
                                   const MeasureSpec& measure, std::uint64_t b,
                                   std::uint64_t resamples, std::uint64_t block_length,
                                   RngStream& rng) {
  if (resamples == 0) throw ConfigError("BLB needs at least one resample per subset");
  const IndexSubset subset = draw_ts_subset(data.n(), b, rng);
  return blb_subset_common(data, est, root, measure, subset, resamples, true, block_length, rng);
}

RunPlan make_plan(const Dataset& data, const Estimator& est, const RootSpec& root,
                  const MeasureSpec& measure, SchemeConfig config) {
  if (data.n() == 0) throw ConfigError("empty dataset");
  if (!(config.budget_seconds > 0.0)) throw ConfigError("budget must be positive");

  const bool full_data = config.scheme == Scheme::Boot || config.scheme == Scheme::Mbb;
  if (full_data) {
    config.b = data.n();
  } else {
    if (config.b == 0 || config.b > data.n()) {
      throw ConfigError("subset size must satisfy 1 <= b <= n, got b=" + std::to_string(config.b));
    }
  }
  if (scheme_is_ts(config.scheme)) {
    if (config.block_length == 0 || config.block_length > config.b) {
      throw ConfigError("block length must satisfy 1 <= L <= b");
    }
  }
  if (scheme_is_blb(config.scheme) && config.resamples == 0) {
    throw ConfigError("BLB needs at least one resample per subset");
  }

  RunPlan plan;
  plan.data = &data;
  plan.estimator = &est;
  plan.root = &root;
  plan.measure = measure;
  plan.config = config;
  if (full_data) {
    plan.full_reference = subset_estimate(data, est, identity_indices(data.n()));
  }
  return plan;
}

IterationRecord run_iteration(const RunPlan& plan, std::uint64_t iteration_index) {
  IterationRecord rec;
  rec.iteration_index = iteration_index;
  const Scheme scheme = plan.config.scheme;
  rec.reference = (scheme == Scheme::Boot || scheme == Scheme::Mbb)
                      ? ReferenceKind::FullDataEstimate
                      : ReferenceKind::SubsetEstimate;
  RngStream rng = substream(plan.config.seed, iteration_index);
  try {
    switch (scheme) {
      case Scheme::Sdb:
        rec.roots.push_back(
            sdb_root_draw(*plan.data, *plan.estimator, *plan.root, plan.config.b, rng));
        break;
      case Scheme::SdbTs:
        rec.roots.push_back(sdb_ts_root_draw(*plan.data, *plan.estimator, *plan.root,
                                             plan.config.b, plan.config.block_length, rng));
        break;
      case Scheme::Boot:
        rec.roots.push_back(
            boot_root_draw(*plan.data, *plan.estimator, *plan.root, plan.full_reference, rng));
        break;
      case Scheme::Mbb:
        rec.roots.push_back(mbb_root_draw(*plan.data, *plan.estimator, *plan.root,
                                          plan.full_reference, plan.config.block_length, rng));
        break;
      case Scheme::Blb: {
        BlbSubsetResult sub = blb_subset_draw(*plan.data, *plan.estimator, *plan.root,
                                              plan.measure, plan.config.b,
                                              plan.config.resamples, rng);
        rec.roots = std::move(sub.roots);
        rec.per_subset_measure = sub.measure;
        break;
      }
      case Scheme::BlbTs: {
        BlbSubsetResult sub = blb_ts_subset_draw(*plan.data, *plan.estimator, *plan.root,
                                                 plan.measure, plan.config.b,
                                                 plan.config.resamples,
                                                 plan.config.block_length, rng);
        rec.roots = std::move(sub.roots);
        rec.per_subset_measure = sub.measure;
        break;
      }
    }
  } catch (const EstimationError& e) {
    rec.failed = true;
    rec.error = e.what();
    rec.roots.clear();
    rec.per_subset_measure.reset();
  }
  return rec;
}

namespace {

RootTrace run_budgeted_serial(const RunPlan& plan, Clock& clock) {
  RootTrace trace;
  trace.scheme = plan.config.scheme;
  const double budget = plan.config.budget_seconds;
  const std::uint64_t cap = plan.config.max_subsets;
  double last = clock.now();
  std::uint64_t next = 1;
  while (last < budget && (cap == 0 || next <= cap)) {
    IterationRecord rec = run_iteration(plan, next);
    last = clock.now();
    rec.completed_at = last;
    trace.records.push_back(std::move(rec));
    ++next;
  }
  return trace;
}

#ifdef _OPENMP
RootTrace run_budgeted_parallel(const RunPlan& plan, Clock& clock, int workers) {
  RootTrace trace;
  trace.scheme = plan.config.scheme;
  const double budget = plan.config.budget_seconds;
  const std::uint64_t cap = plan.config.max_subsets;
  std::atomic<std::uint64_t> counter{1};
  std::mutex sink;
#pragma omp parallel num_threads(workers)
  {
    const int worker_id = omp_get_thread_num();
    for (;;) {
      if (clock.now() >= budget) break;
      const std::uint64_t index = counter.fetch_add(1);
      if (cap != 0 && index > cap) break;
      IterationRecord rec = run_iteration(plan, index);
      rec.worker = worker_id;
      rec.completed_at = clock.now();
      {
        std::lock_guard<std::mutex> lock(sink);
        trace.records.push_back(std::move(rec));
      }
    }
  }
  std::sort(trace.records.begin(), trace.records.end(),
            [](const IterationRecord& a, const IterationRecord& b) {
              return a.iteration_index < b.iteration_index;
            });
  return trace;
}
#endif

}  // namespace

RootTrace run_budgeted(const RunPlan& plan, Clock& clock, int workers) {
#ifdef _OPENMP
  if (workers > 1) return run_budgeted_parallel(plan, clock, workers);
#endif
  return run_budgeted_serial(plan, clock);
}

}  // namespace sdb

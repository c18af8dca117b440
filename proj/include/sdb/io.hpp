#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sdb/datagen.hpp"
#include "sdb/dataset.hpp"
#include "sdb/estimators.hpp"
#include "sdb/measures.hpp"
#include "sdb/schemes.hpp"
#include "sdb/trace.hpp"

namespace sdb {

// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double value);

// Strict full-string parse; nullopt when the text is not a lone double.
std::optional<double> parse_double(std::string_view text);

// Dataset CSV: header "y" for univariate data, "y,x1,...,xd" for regression
// data. Row order is preserved (it matters for the time-series schemes).
Dataset read_dataset_csv(const std::string& path);
void write_dataset_csv(const std::string& path, const Dataset& data);

// Daily series on a 365-day calendar.
struct SeasonalSeries {
  std::vector<int> year;
  std::vector<int> day_of_year;  // 1..365 after ingestion
  std::vector<double> value;
  std::uint64_t size() const { return value.size(); }
};

// Seasonal CSV: header "year,day_of_year,value". Leap days (day 366) are
// dropped; any day outside 1..366 is a parse error.
SeasonalSeries read_seasonal_csv(const std::string& path);
void write_seasonal_csv(const std::string& path, const SeasonalSeries& series);

// Subtracts from each observation the mean over all years of its calendar
// day; temporal order is preserved. Every day 1..365 must be observed at
// least once.
Dataset deseasonalize(const SeasonalSeries& series);

// Univariate model output laid onto a 365-day calendar with an additive
// sine pattern of the given amplitude. Row i gets year start_year + i/365
// and day i%365 + 1.
SeasonalSeries generate_seasonal_series(const ModelSpec& spec, double amplitude, int start_year,
                                        RngStream& rng);

// One experiment as configured from the command line or a manifest. Field
// names match the CLI long options (dashes become underscores here).
struct RunConfig {
  std::string model;  // linreg|logreg|ar1|ar1homo; empty when input is used
  std::string input;  // dataset CSV path; exactly one of model/input
  std::uint64_t n = 0;
  std::uint64_t d = 0;
  double rho = 0.0;
  double noise_sd = 10.0;
  double innovation_sd = 1.0;

  std::string estimator = "mean";
  std::string root = "sqrtn";
  std::string measure = "quantile:0.95";

  std::string scheme = "sdb";
  std::uint64_t b = 0;  // 0 with gamma > 0 resolves to round(n^gamma)
  double gamma = 0.0;
  std::uint64_t L = 0;    // block length, time-series schemes
  std::uint64_t R = 100;  // resamples per subset, BLB variants
  std::uint64_t S = 0;    // subset cap; 0 leaves the budget in charge
  double budget = 1.0;    // seconds

  double grid_step = 1.0;  // evolution grid spacing, seconds
  double horizon = 0.0;    // 0 resolves to budget

  double truth = std::numeric_limits<double>::quiet_NaN();  // analytic truth
  std::uint64_t oracle_reps = 0;  // mc_oracle truth when > 0 (model runs only)
  std::uint64_t oracle_seed = 0;  // 0 derives one from seed

  std::uint64_t seed = 1;
  int workers = 1;
  std::string out;  // artifact path prefix; empty writes no files
};

// Config with every name resolved and the data materialized. A finite truth
// field wins over oracle_reps, so manifests that record an oracle-resolved
// truth replay without re-running the oracle.
struct ResolvedRun {
  Dataset data;
  std::optional<ModelSpec> model;
  const Estimator* estimator = nullptr;
  const RootSpec* root = nullptr;
  MeasureSpec measure;
  SchemeConfig scheme;
  std::optional<double> truth;
  std::string truth_source;  // "analytic" | "mc_oracle ..." | "none"
  double grid_step = 1.0;
  double horizon = 0.0;
  int workers = 1;
};

ResolvedRun resolve_run(const RunConfig& config);

struct RunSummary {
  std::uint64_t iterations = 0;
  std::uint64_t failed = 0;
  double estimate = std::numeric_limits<double>::quiet_NaN();
  std::optional<double> truth;
  std::optional<double> error;  // |estimate/truth - 1| when truth is known
  double elapsed = 0.0;         // completion time of the last iteration
};

struct RunResult {
  RootTrace trace;
  ErrorEvolution evolution;
  RunSummary summary;
};

// Full pipeline: resolve, execute under the clock (a fresh SteadyClock when
// null), evaluate, and, when config.out is nonempty, write <out>.trace.csv,
// <out>.evolution.csv and <out>.manifest.ini. Throws
// EstimationExhaustedError when no iteration succeeds.
RunResult run_experiment(const RunConfig& config, Clock* clock = nullptr);

// Raw trace CSV: iteration_index,completed_at,status,root_1..root_R,
// per_subset_measure,error. Cells that do not apply stay empty.
void write_trace_csv(const std::string& path, const RootTrace& trace);

// Evolution CSV: t_seconds,estimate,error_rate. Absent values stay empty.
void write_evolution_csv(const std::string& path, const ErrorEvolution& evolution);
ErrorEvolution read_evolution_csv(const std::string& path);

// Manifest: the key=value config schema the CLI accepts via --config, plus
// comment lines recording the resolved truth's provenance.
void write_manifest(const std::string& path, const RunConfig& config, const RunSummary& summary,
                    const std::string& truth_source);
RunConfig read_manifest_config(const std::string& path);

struct LabeledEvolution {
  std::string label;
  ErrorEvolution evolution;
};

// Wide error table; evolutions sharing a label are averaged pointwise.
// Every input must share one grid.
struct ComparisonTable {
  std::vector<double> t;
  std::vector<std::string> labels;
  std::vector<std::vector<double>> error;  // error[k][i]: labels[k] at t[i]
};

ComparisonTable compare_evolutions(const std::vector<LabeledEvolution>& inputs);

// Comparison CSV: t_seconds,err_<label1>,err_<label2>,...
void write_comparison_csv(const std::string& path, const ComparisonTable& table);

}  // namespace sdb

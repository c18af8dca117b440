#include <cstdint>
#include <iomanip>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sdb/datagen.hpp"
#include "sdb/io.hpp"
#include "sdb/schemes.hpp"

namespace {

struct TimedRun {
  sdb::RootTrace trace;
  double seconds = 0.0;
};

TimedRun timed_run(const sdb::RunPlan& plan, int workers) {
  sdb::SteadyClock outer;
  sdb::SteadyClock clock;
  TimedRun result;
  result.trace = sdb::run_budgeted(plan, clock, workers);
  result.seconds = outer.now();
  return result;
}

bool same_records(const sdb::RootTrace& a, const sdb::RootTrace& b) {
  if (a.records.size() != b.records.size()) return false;
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    const auto& ra = a.records[i];
    const auto& rb = b.records[i];
    if (ra.iteration_index != rb.iteration_index || ra.failed != rb.failed ||
        ra.roots != rb.roots || ra.per_subset_measure != rb.per_subset_measure) {
      return false;
    }
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial vs OpenMP budgeted-executor benchmark (fixed SDB-TS workload)"};
  std::uint64_t n = 20000;
  std::uint64_t b = 2000;
  std::uint64_t L = 20;
  std::uint64_t S = 300;
  std::uint64_t seed = 1;
  int workers = 4;
  app.add_option("--n", n, "series length");
  app.add_option("--b", b, "subset size");
  app.add_option("--L", L, "block length");
  app.add_option("--S", S, "iterations per run");
  app.add_option("--workers", workers, "worker count for the parallel run");
  app.add_option("--seed", seed, "master seed");
  CLI11_PARSE(app, argc, argv);

  sdb::ModelSpec spec;
  spec.kind = sdb::ModelSpec::Kind::Ar1;
  spec.n = n;
  spec.rho = 0.5;
  sdb::RngStream data_rng = sdb::substream(seed, 0);
  const sdb::Dataset data = sdb::generate(spec, data_rng);

  sdb::SchemeConfig config;
  config.scheme = sdb::Scheme::SdbTs;
  config.b = b;
  config.block_length = L;
  config.max_subsets = S;
  config.budget_seconds = 1e9;
  config.seed = seed;
  const sdb::RunPlan plan =
      sdb::make_plan(data, sdb::estimator_by_name("median"), sdb::root_by_name("sqrtn"),
                     sdb::MeasureSpec::parse("quantile:0.95"), config);

  const TimedRun serial = timed_run(plan, 1);
  const TimedRun parallel = timed_run(plan, workers);

  const double serial_rate = static_cast<double>(serial.trace.records.size()) / serial.seconds;
  const double parallel_rate =
      static_cast<double>(parallel.trace.records.size()) / parallel.seconds;
  std::cout << std::fixed << std::setprecision(3);
  std::cout << "executor   workers  iters  seconds  iters/sec\n";
  std::cout << "serial     " << std::setw(7) << 1 << "  " << std::setw(5)
            << serial.trace.records.size() << "  " << std::setw(7) << serial.seconds << "  "
            << std::setw(9) << serial_rate << "\n";
  std::cout << "openmp     " << std::setw(7) << workers << "  " << std::setw(5)
            << parallel.trace.records.size() << "  " << std::setw(7) << parallel.seconds << "  "
            << std::setw(9) << parallel_rate << "\n";
  std::cout << "speedup " << parallel_rate / serial_rate << "x\n";

  if (!same_records(serial.trace, parallel.trace)) {
    std::cout << "MISMATCH: parallel records differ from the serial reference\n";
    return 1;
  }
  std::cout << "records identical across executors\n";
  return 0;
}

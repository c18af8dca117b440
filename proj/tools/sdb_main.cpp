#include <cmath>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sdb/datagen.hpp"
#include "sdb/error.hpp"
#include "sdb/io.hpp"

namespace {

struct GenArgs {
  std::string model = "ar1";
  std::uint64_t n = 0;
  std::uint64_t d = 0;
  double rho = 0.0;
  double noise_sd = 10.0;
  double innovation_sd = 1.0;
  bool calendar = false;
  double seasonal_amplitude = 0.0;
  int start_year = 1772;
  std::uint64_t seed = 1;
  std::string out;
};

struct OracleArgs {
  std::string model;
  std::uint64_t n = 0;
  std::uint64_t d = 0;
  double rho = 0.0;
  double noise_sd = 10.0;
  double innovation_sd = 1.0;
  std::string estimator = "mean";
  std::string root = "sqrtn";
  std::string measure = "quantile:0.95";
  std::uint64_t reps = 1000;
  std::uint64_t seed = 1;
  int workers = 1;
  std::string out;
};

sdb::ModelSpec model_from(const std::string& model, std::uint64_t n, std::uint64_t d, double rho,
                          double noise_sd, double innovation_sd) {
  sdb::ModelSpec spec;
  spec.kind = sdb::ModelSpec::kind_by_name(model);
  spec.n = n;
  spec.d = d;
  spec.rho = rho;
  spec.noise_sd = noise_sd;
  spec.innovation_sd = innovation_sd;
  return spec;
}

void add_model_options(CLI::App* cmd, std::string& model, std::uint64_t& n, std::uint64_t& d,
                       double& rho, double& noise_sd, double& innovation_sd) {
  cmd->add_option("--model", model, "generating model: linreg|logreg|ar1|ar1homo");
  cmd->add_option("--n", n, "number of observations");
  cmd->add_option("--d", d, "number of regressors");
  cmd->add_option("--rho", rho, "AR(1) coefficient");
  cmd->add_option("--noise-sd", noise_sd, "regression noise standard deviation");
  cmd->add_option("--innovation-sd", innovation_sd, "AR(1) innovation standard deviation");
}

int do_run(const sdb::RunConfig& cfg) {
  const sdb::RunResult result = sdb::run_experiment(cfg);
  std::cout << "scheme=" << cfg.scheme << " iterations=" << result.summary.iterations
            << " failed=" << result.summary.failed << " elapsed="
            << sdb::format_double(result.summary.elapsed) << "s\n";
  std::cout << "estimate=" << sdb::format_double(result.summary.estimate);
  if (result.summary.truth) {
    std::cout << " truth=" << sdb::format_double(*result.summary.truth)
              << " error-rate=" << sdb::format_double(*result.summary.error);
  }
  std::cout << '\n';
  if (!cfg.out.empty()) {
    std::cout << "wrote " << cfg.out << ".trace.csv, " << cfg.out << ".evolution.csv, "
              << cfg.out << ".manifest.ini\n";
  }
  return 0;
}

int do_oracle(const OracleArgs& args) {
  if (args.model.empty()) throw sdb::ConfigError("oracle needs --model");
  const sdb::ModelSpec spec = model_from(args.model, args.n, args.d, args.rho, args.noise_sd,
                                         args.innovation_sd);
  const sdb::OracleResult result = sdb::mc_oracle(
      spec, sdb::estimator_by_name(args.estimator), sdb::root_by_name(args.root),
      sdb::MeasureSpec::parse(args.measure), args.reps, args.seed, args.workers);
  std::cout << "measure-truth=" << sdb::format_double(result.measure_truth)
            << " reps=" << result.reps
            << " standard-error=" << sdb::format_double(result.standard_error) << '\n';
  if (!args.out.empty()) {
    std::ofstream out(args.out);
    if (!out) throw sdb::IoError("cannot open " + args.out + " for writing");
    out << "# oracle result for " << args.estimator << "/" << args.root << "/" << args.measure
        << " under " << args.model << "\n";
    out << "measure-truth=" << sdb::format_double(result.measure_truth) << "\n";
    out << "reps=" << result.reps << "\n";
    out << "standard-error=" << sdb::format_double(result.standard_error) << "\n";
    out.flush();
    if (!out) throw sdb::IoError("write failed: " + args.out);
  }
  return 0;
}

int do_gen(const GenArgs& args) {
  const sdb::ModelSpec spec = model_from(args.model, args.n, args.d, args.rho, args.noise_sd,
                                         args.innovation_sd);
  if (args.out.empty()) throw sdb::ConfigError("gen needs --out");
  sdb::RngStream rng = sdb::substream(args.seed, 0);
  if (args.calendar) {
    const sdb::SeasonalSeries series =
        sdb::generate_seasonal_series(spec, args.seasonal_amplitude, args.start_year, rng);
    sdb::write_seasonal_csv(args.out, series);
    std::cout << "wrote " << args.out << " (" << series.size() << " rows, seasonal schema)\n";
  } else {
    const sdb::Dataset data = sdb::generate(spec, rng);
    sdb::write_dataset_csv(args.out, data);
    std::cout << "wrote " << args.out << " (" << data.n() << " rows, d=" << data.d << ")\n";
  }
  return 0;
}

int do_deseasonalize(const std::string& input, const std::string& out) {
  if (input.empty()) throw sdb::ConfigError("deseasonalize needs --input");
  if (out.empty()) throw sdb::ConfigError("deseasonalize needs --out");
  const sdb::SeasonalSeries series = sdb::read_seasonal_csv(input);
  const sdb::Dataset residuals = sdb::deseasonalize(series);
  sdb::write_dataset_csv(out, residuals);
  std::cout << "wrote " << out << " (" << residuals.n() << " rows)\n";
  return 0;
}

int do_compare(const std::vector<std::string>& files, const std::vector<std::string>& labels,
               const std::string& out) {
  if (files.empty()) throw sdb::ConfigError("compare needs at least one evolution CSV");
  if (!labels.empty() && labels.size() != files.size()) {
    throw sdb::ConfigError("--label must be given once per file (got " +
                           std::to_string(labels.size()) + " labels for " +
                           std::to_string(files.size()) + " files)");
  }
  std::vector<sdb::LabeledEvolution> inputs;
  inputs.reserve(files.size());
  for (std::size_t i = 0; i < files.size(); ++i) {
    std::string label;
    if (!labels.empty()) {
      label = labels[i];
    } else {
      label = files[i];
      const std::size_t slash = label.find_last_of('/');
      if (slash != std::string::npos) label = label.substr(slash + 1);
      const std::size_t dot = label.find('.');
      if (dot != std::string::npos) label = label.substr(0, dot);
    }
    inputs.push_back({label, sdb::read_evolution_csv(files[i])});
  }
  const sdb::ComparisonTable table = sdb::compare_evolutions(inputs);
  if (!out.empty()) {
    sdb::write_comparison_csv(out, table);
    std::cout << "wrote " << out << " (" << table.t.size() << " rows, " << table.labels.size()
              << " methods)\n";
  } else {
    std::cout << "t_seconds";
    for (const auto& label : table.labels) std::cout << ",err_" << label;
    std::cout << '\n';
    for (std::size_t i = 0; i < table.t.size(); ++i) {
      std::cout << sdb::format_double(table.t[i]);
      for (std::size_t k = 0; k < table.labels.size(); ++k) {
        std::cout << ',';
        if (!std::isnan(table.error[k][i])) std::cout << sdb::format_double(table.error[k][i]);
      }
      std::cout << '\n';
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Budgeted resampling toolkit: subsampled double bootstrap and competitors"};
  app.require_subcommand(1);

  // run
  sdb::RunConfig cli;
  std::string config_path;
  CLI::App* run = app.add_subcommand("run", "execute one budgeted resampling experiment");
  CLI::Option* o_model = run->add_option("--model", cli.model, "generating model");
  CLI::Option* o_input = run->add_option("--input", cli.input, "dataset CSV (header y,x1..xd)");
  CLI::Option* o_n = run->add_option("--n", cli.n, "observations (model runs)");
  CLI::Option* o_d = run->add_option("--d", cli.d, "regressors (model runs)");
  CLI::Option* o_rho = run->add_option("--rho", cli.rho, "AR(1) coefficient");
  CLI::Option* o_noise = run->add_option("--noise-sd", cli.noise_sd, "regression noise sd");
  CLI::Option* o_innov =
      run->add_option("--innovation-sd", cli.innovation_sd, "AR(1) innovation sd");
  CLI::Option* o_est =
      run->add_option("--estimator", cli.estimator, "mean|median|ols|logistic");
  CLI::Option* o_root = run->add_option("--root", cli.root, "sqrtn|fstat|wald");
  CLI::Option* o_measure =
      run->add_option("--measure", cli.measure, "quantile:A | width:LO,HI | mse");
  CLI::Option* o_scheme =
      run->add_option("--scheme", cli.scheme, "boot|blb|sdb|mbb|blb_ts|sdb_ts");
  CLI::Option* o_b = run->add_option("--b", cli.b, "subset size");
  CLI::Option* o_gamma = run->add_option("--gamma", cli.gamma, "subset exponent: b = n^gamma");
  CLI::Option* o_L = run->add_option("--L", cli.L, "block length (time-series schemes)");
  CLI::Option* o_R = run->add_option("--R", cli.R, "resamples per subset (BLB)");
  CLI::Option* o_S = run->add_option("--S", cli.S, "subset cap; 0 = budget only");
  CLI::Option* o_budget = run->add_option("--budget", cli.budget, "time budget, seconds");
  CLI::Option* o_grid =
      run->add_option("--grid-step", cli.grid_step, "evolution grid spacing, seconds");
  CLI::Option* o_horizon = run->add_option("--horizon", cli.horizon, "evolution horizon, seconds");
  CLI::Option* o_truth = run->add_option("--truth", cli.truth, "analytic measure truth");
  CLI::Option* o_oreps =
      run->add_option("--oracle-reps", cli.oracle_reps, "resolve truth by Monte Carlo");
  CLI::Option* o_oseed = run->add_option("--oracle-seed", cli.oracle_seed, "oracle seed");
  CLI::Option* o_seed = run->add_option("--seed", cli.seed, "master seed");
  CLI::Option* o_workers = run->add_option("--workers", cli.workers, "parallel workers");
  CLI::Option* o_out = run->add_option("--out", cli.out, "artifact path prefix");
  run->add_option("--config", config_path,
                  "key=value config file (a manifest works); flags override it");

  run->callback([&]() {
    sdb::RunConfig cfg;
    if (!config_path.empty()) cfg = sdb::read_manifest_config(config_path);
    if (o_model->count()) cfg.model = cli.model;
    if (o_input->count()) cfg.input = cli.input;
    if (o_n->count()) cfg.n = cli.n;
    if (o_d->count()) cfg.d = cli.d;
    if (o_rho->count()) cfg.rho = cli.rho;
    if (o_noise->count()) cfg.noise_sd = cli.noise_sd;
    if (o_innov->count()) cfg.innovation_sd = cli.innovation_sd;
    if (o_est->count()) cfg.estimator = cli.estimator;
    if (o_root->count()) cfg.root = cli.root;
    if (o_measure->count()) cfg.measure = cli.measure;
    if (o_scheme->count()) cfg.scheme = cli.scheme;
    if (o_b->count()) cfg.b = cli.b;
    if (o_gamma->count()) cfg.gamma = cli.gamma;
    if (o_L->count()) cfg.L = cli.L;
    if (o_R->count()) cfg.R = cli.R;
    if (o_S->count()) cfg.S = cli.S;
    if (o_budget->count()) cfg.budget = cli.budget;
    if (o_grid->count()) cfg.grid_step = cli.grid_step;
    if (o_horizon->count()) cfg.horizon = cli.horizon;
    if (o_truth->count()) cfg.truth = cli.truth;
    if (o_oreps->count()) cfg.oracle_reps = cli.oracle_reps;
    if (o_oseed->count()) cfg.oracle_seed = cli.oracle_seed;
    if (o_seed->count()) cfg.seed = cli.seed;
    if (o_workers->count()) cfg.workers = cli.workers;
    if (o_out->count()) cfg.out = cli.out;
    do_run(cfg);
  });

  // oracle
  OracleArgs oracle;
  CLI::App* ocmd = app.add_subcommand("oracle", "Monte Carlo truth for a measure");
  add_model_options(ocmd, oracle.model, oracle.n, oracle.d, oracle.rho, oracle.noise_sd,
                    oracle.innovation_sd);
  ocmd->add_option("--estimator", oracle.estimator, "mean|median|ols|logistic");
  ocmd->add_option("--root", oracle.root, "sqrtn|fstat|wald");
  ocmd->add_option("--measure", oracle.measure, "quantile:A | width:LO,HI | mse");
  ocmd->add_option("--reps", oracle.reps, "Monte Carlo replications");
  ocmd->add_option("--seed", oracle.seed, "master seed");
  ocmd->add_option("--workers", oracle.workers, "parallel workers");
  ocmd->add_option("--out", oracle.out, "result file (key=value)");
  ocmd->callback([&]() { do_oracle(oracle); });

  // gen
  GenArgs gen;
  CLI::App* gcmd = app.add_subcommand("gen", "generate a dataset CSV");
  add_model_options(gcmd, gen.model, gen.n, gen.d, gen.rho, gen.noise_sd, gen.innovation_sd);
  gcmd->add_flag("--calendar", gen.calendar, "write the seasonal schema (year,day_of_year,value)");
  gcmd->add_option("--seasonal-amplitude", gen.seasonal_amplitude,
                   "sine amplitude added on the calendar layout");
  gcmd->add_option("--start-year", gen.start_year, "first calendar year");
  gcmd->add_option("--seed", gen.seed, "master seed");
  gcmd->add_option("--out", gen.out, "output CSV path");
  gcmd->callback([&]() { do_gen(gen); });

  // deseasonalize
  std::string des_input;
  std::string des_out;
  std::uint64_t des_seed = 1;
  CLI::App* dcmd = app.add_subcommand("deseasonalize", "subtract calendar-day means");
  dcmd->add_option("--input", des_input, "seasonal CSV (year,day_of_year,value)");
  dcmd->add_option("--seed", des_seed, "accepted for interface uniformity; unused");
  dcmd->add_option("--out", des_out, "output dataset CSV path");
  dcmd->callback([&]() { do_deseasonalize(des_input, des_out); });

  // compare
  std::vector<std::string> cmp_files;
  std::vector<std::string> cmp_labels;
  std::string cmp_out;
  std::uint64_t cmp_seed = 1;
  CLI::App* ccmd = app.add_subcommand("compare", "merge evolution CSVs into one error table");
  ccmd->add_option("files", cmp_files, "evolution CSV paths");
  ccmd->add_option("--label", cmp_labels,
                   "one label per file; files sharing a label are averaged");
  ccmd->add_option("--seed", cmp_seed, "accepted for interface uniformity; unused");
  ccmd->add_option("--out", cmp_out, "output CSV path (stdout when omitted)");
  ccmd->callback([&]() { do_compare(cmp_files, cmp_labels, cmp_out); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const sdb::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const sdb::IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return 3;
  } catch (const sdb::EstimationError& e) {
    std::cerr << "estimation error: " << e.what() << '\n';
    return 4;
  } catch (const sdb::EmptyEnsembleError& e) {
    std::cerr << "estimation error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

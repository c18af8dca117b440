#include "sdb/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <system_error>

#include "sdb/error.hpp"

namespace sdb {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

double parse_cell(std::string_view cell, const std::string& path, std::size_t lineno) {
  const auto value = parse_double(trim(cell));
  if (!value) {
    throw ParseError(path, lineno, "non-numeric cell '" + std::string(cell) + "'");
  }
  return *value;
}

long long parse_int_cell(std::string_view cell, const std::string& path, std::size_t lineno) {
  cell = trim(cell);
  long long v = 0;
  const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (res.ec != std::errc() || res.ptr != cell.data() + cell.size() || cell.empty()) {
    throw ParseError(path, lineno, "non-integer cell '" + std::string(cell) + "'");
  }
  return v;
}

std::ifstream open_for_reading(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return in;
}

std::ofstream open_for_writing(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  return out;
}

void finish_writing(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

// Quote a cell only when it would break the comma grammar.
std::string csv_escape(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (const char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::optional<double> parse_double(std::string_view text) {
  if (text.empty()) return std::nullopt;
  double v = 0.0;
  const char* last = text.data() + text.size();
  const auto res = std::from_chars(text.data(), last, v);
  if (res.ec != std::errc() || res.ptr != last) return std::nullopt;
  return v;
}

Dataset read_dataset_csv(const std::string& path) {
  std::ifstream in = open_for_reading(path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path, 1, "missing header");
  const auto header = split_csv(trim(line));
  if (trim(header[0]) == "year") {
    throw ParseError(path, 1, "seasonal schema (year,day_of_year,value); deseasonalize it first");
  }
  if (trim(header[0]) != "y") {
    throw ParseError(path, 1, "expected header y,x1,...,xd");
  }
  const std::uint64_t d = header.size() - 1;
  for (std::uint64_t j = 0; j < d; ++j) {
    const std::string expected = "x" + std::to_string(j + 1);
    if (trim(header[j + 1]) != expected) {
      throw ParseError(path, 1, "expected column '" + expected + "', found '" +
                                    std::string(trim(header[j + 1])) + "'");
    }
  }

  Dataset data;
  data.d = d;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view sv = trim(line);
    if (sv.empty()) continue;
    const auto cells = split_csv(sv);
    if (cells.size() != d + 1) {
      throw ParseError(path, lineno,
                       "expected " + std::to_string(d + 1) + " fields, got " +
                           std::to_string(cells.size()));
    }
    data.y.push_back(parse_cell(cells[0], path, lineno));
    for (std::uint64_t j = 0; j < d; ++j) {
      data.x.push_back(parse_cell(cells[j + 1], path, lineno));
    }
  }
  if (data.y.empty()) throw ParseError(path, lineno, "no data rows");
  return data;
}

void write_dataset_csv(const std::string& path, const Dataset& data) {
  std::ofstream out = open_for_writing(path);
  out << "y";
  for (std::uint64_t j = 1; j <= data.d; ++j) out << ",x" << j;
  out << '\n';
  for (std::uint64_t i = 0; i < data.n(); ++i) {
    out << format_double(data.y[i]);
    for (std::uint64_t j = 0; j < data.d; ++j) out << ',' << format_double(data.x[i * data.d + j]);
    out << '\n';
  }
  finish_writing(out, path);
}

SeasonalSeries read_seasonal_csv(const std::string& path) {
  std::ifstream in = open_for_reading(path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path, 1, "missing header");
  {
    const auto header = split_csv(trim(line));
    if (header.size() != 3 || trim(header[0]) != "year" || trim(header[1]) != "day_of_year" ||
        trim(header[2]) != "value") {
      throw ParseError(path, 1, "expected header year,day_of_year,value");
    }
  }

  SeasonalSeries series;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view sv = trim(line);
    if (sv.empty()) continue;
    const auto cells = split_csv(sv);
    if (cells.size() != 3) {
      throw ParseError(path, lineno, "expected 3 fields, got " + std::to_string(cells.size()));
    }
    const long long year = parse_int_cell(cells[0], path, lineno);
    const long long day = parse_int_cell(cells[1], path, lineno);
    if (day < 1 || day > 366) {
      throw ParseError(path, lineno, "day_of_year " + std::to_string(day) + " outside 1..366");
    }
    if (day == 366) continue;
    series.year.push_back(static_cast<int>(year));
    series.day_of_year.push_back(static_cast<int>(day));
    series.value.push_back(parse_cell(cells[2], path, lineno));
  }
  if (series.value.empty()) throw ParseError(path, lineno, "no data rows");
  return series;
}

void write_seasonal_csv(const std::string& path, const SeasonalSeries& series) {
  std::ofstream out = open_for_writing(path);
  out << "year,day_of_year,value\n";
  for (std::uint64_t i = 0; i < series.size(); ++i) {
    out << series.year[i] << ',' << series.day_of_year[i] << ','
        << format_double(series.value[i]) << '\n';
  }
  finish_writing(out, path);
}

Dataset deseasonalize(const SeasonalSeries& series) {
  if (series.size() == 0) throw IoError("cannot deseasonalize an empty series");
  std::array<double, 366> sum{};
  std::array<std::uint64_t, 366> count{};
  int first_day = 365;
  int last_day = 1;
  for (std::uint64_t i = 0; i < series.size(); ++i) {
    const int day = series.day_of_year[i];
    sum[day] += series.value[i];
    count[day] += 1;
    first_day = std::min(first_day, day);
    last_day = std::max(last_day, day);
  }
  std::array<double, 366> mean{};
  for (int day = first_day; day <= last_day; ++day) {
    if (count[day] == 0) {
      throw IoError("no observations for calendar day " + std::to_string(day));
    }
    mean[day] = sum[day] / static_cast<double>(count[day]);
  }
  Dataset out;
  out.d = 0;
  out.y.resize(series.size());
  for (std::uint64_t i = 0; i < series.size(); ++i) {
    out.y[i] = series.value[i] - mean[series.day_of_year[i]];
  }
  return out;
}

SeasonalSeries generate_seasonal_series(const ModelSpec& spec, double amplitude, int start_year,
                                        RngStream& rng) {
  if (spec.kind != ModelSpec::Kind::Ar1) {
    throw ConfigError("seasonal layout needs a univariate model (ar1)");
  }
  const Dataset base = generate(spec, rng);
  SeasonalSeries series;
  const std::uint64_t n = base.n();
  series.year.resize(n);
  series.day_of_year.resize(n);
  series.value.resize(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const int day = static_cast<int>(i % 365) + 1;
    series.year[i] = start_year + static_cast<int>(i / 365);
    series.day_of_year[i] = day;
    series.value[i] =
        amplitude * std::sin(2.0 * std::numbers::pi * day / 365.0) + base.y[i];
  }
  return series;
}

namespace {

std::uint64_t resolve_b(const RunConfig& cfg, std::uint64_t n) {
  if (cfg.b != 0) return cfg.b;
  if (cfg.gamma > 0.0) {
    const double raw = std::pow(static_cast<double>(n), cfg.gamma);
    auto b = static_cast<std::uint64_t>(std::llround(raw));
    if (b < 1) b = 1;
    if (b > n) b = n;
    return b;
  }
  return 0;
}

}  // namespace

ResolvedRun resolve_run(const RunConfig& cfg) {
  if (cfg.model.empty() == cfg.input.empty()) {
    throw ConfigError("exactly one of --model and --input is required");
  }
  ResolvedRun rr;
  rr.estimator = &estimator_by_name(cfg.estimator);
  rr.root = &root_by_name(cfg.root);
  rr.measure = MeasureSpec::parse(cfg.measure);

  if (cfg.root == "fstat" && cfg.estimator != "ols") {
    throw ConfigError("root fstat pairs with estimator ols");
  }
  if (cfg.root == "wald" && cfg.estimator != "logistic") {
    throw ConfigError("root wald pairs with estimator logistic");
  }
  if (cfg.root == "sqrtn" && cfg.estimator != "mean" && cfg.estimator != "median") {
    throw ConfigError("root sqrtn pairs with a univariate estimator (mean or median)");
  }

  if (!cfg.model.empty()) {
    ModelSpec spec;
    spec.kind = ModelSpec::kind_by_name(cfg.model);
    spec.n = cfg.n;
    spec.d = cfg.d;
    spec.rho = cfg.rho;
    spec.noise_sd = cfg.noise_sd;
    spec.innovation_sd = cfg.innovation_sd;
    RngStream data_rng = substream(cfg.seed, 0);
    rr.data = generate(spec, data_rng);
    rr.model = spec;
  } else {
    rr.data = read_dataset_csv(cfg.input);
  }

  const bool univariate = cfg.estimator == "mean" || cfg.estimator == "median";
  if (univariate && rr.data.d != 0) {
    throw ConfigError("estimator " + cfg.estimator + " needs univariate data (d = 0)");
  }
  if (!univariate && rr.data.d == 0) {
    throw ConfigError("estimator " + cfg.estimator + " needs regressor columns");
  }

  rr.scheme.scheme = scheme_by_name(cfg.scheme);
  rr.scheme.b = resolve_b(cfg, rr.data.n());
  const bool full_sample =
      rr.scheme.scheme == Scheme::Boot || rr.scheme.scheme == Scheme::Mbb;
  if (rr.scheme.b == 0 && !full_sample) {
    throw ConfigError("scheme " + cfg.scheme + " needs --b or --gamma");
  }
  rr.scheme.block_length = cfg.L;
  rr.scheme.resamples = cfg.R;
  rr.scheme.max_subsets = cfg.S;
  rr.scheme.budget_seconds = cfg.budget;
  rr.scheme.seed = cfg.seed;

  if (cfg.grid_step <= 0.0) throw ConfigError("grid-step must be positive");
  rr.grid_step = cfg.grid_step;
  rr.horizon = cfg.horizon > 0.0 ? cfg.horizon : cfg.budget;
  rr.workers = cfg.workers < 1 ? 1 : cfg.workers;

  if (std::isfinite(cfg.truth)) {
    rr.truth = cfg.truth;
    rr.truth_source = "analytic";
  } else if (cfg.oracle_reps > 0) {
    if (!rr.model) throw ConfigError("oracle truth needs a generating model, not --input");
    const std::uint64_t oseed =
        cfg.oracle_seed != 0 ? cfg.oracle_seed : derive_seed(cfg.seed, 0x6f7261636c65ULL);
    const OracleResult oracle = mc_oracle(*rr.model, *rr.estimator, *rr.root, rr.measure,
                                          cfg.oracle_reps, oseed, rr.workers);
    rr.truth = oracle.measure_truth;
    rr.truth_source = "mc_oracle reps=" + std::to_string(cfg.oracle_reps) + " seed=" +
                      std::to_string(oseed) + " se=" + format_double(oracle.standard_error);
  } else {
    rr.truth_source = "none";
  }
  return rr;
}

RunResult run_experiment(const RunConfig& cfg, Clock* clock) {
  const ResolvedRun rr = resolve_run(cfg);
  const RunPlan plan = make_plan(rr.data, *rr.estimator, *rr.root, rr.measure, rr.scheme);

  RunResult result;
  {
    SteadyClock fallback;
    Clock& clk = clock != nullptr ? *clock : static_cast<Clock&>(fallback);
    result.trace = run_budgeted(plan, clk, rr.workers);
  }

  std::vector<double> pooled;
  std::vector<double> per_subset;
  std::string first_error;
  double elapsed = 0.0;
  for (const auto& rec : result.trace.records) {
    elapsed = std::max(elapsed, rec.completed_at);
    if (rec.failed) {
      if (first_error.empty()) first_error = rec.error;
      continue;
    }
    if (scheme_is_blb(rr.scheme.scheme)) {
      per_subset.push_back(rec.per_subset_measure.value());
    } else {
      pooled.insert(pooled.end(), rec.roots.begin(), rec.roots.end());
    }
  }

  RunSummary& summary = result.summary;
  summary.iterations = result.trace.records.size();
  summary.failed = result.trace.failed_count();
  summary.elapsed = elapsed;
  if (summary.iterations == 0) {
    throw EstimationExhaustedError("the budget expired before any iteration completed");
  }
  if (summary.failed == summary.iterations) {
    throw EstimationExhaustedError("no iteration succeeded (first failure: " + first_error + ")");
  }
  summary.estimate = scheme_is_blb(rr.scheme.scheme)
                         ? blb_aggregate(per_subset)
                         : plug_in(ecdf_build(std::move(pooled)), rr.measure);
  summary.truth = rr.truth;
  if (rr.truth) summary.error = error_rate(summary.estimate, *rr.truth);

  result.evolution = evaluate_trace(result.trace, rr.measure, rr.truth, rr.grid_step, rr.horizon);

  if (!cfg.out.empty()) {
    write_trace_csv(cfg.out + ".trace.csv", result.trace);
    write_evolution_csv(cfg.out + ".evolution.csv", result.evolution);
    RunConfig recorded = cfg;
    recorded.b = rr.scheme.b;
    if (rr.truth) recorded.truth = *rr.truth;
    write_manifest(cfg.out + ".manifest.ini", recorded, summary, rr.truth_source);
  }
  return result;
}

void write_trace_csv(const std::string& path, const RootTrace& trace) {
  std::ofstream out = open_for_writing(path);
  std::size_t max_roots = 1;
  for (const auto& rec : trace.records) max_roots = std::max(max_roots, rec.roots.size());
  out << "iteration_index,completed_at,status";
  for (std::size_t r = 1; r <= max_roots; ++r) out << ",root_" << r;
  out << ",per_subset_measure,error\n";
  for (const auto& rec : trace.records) {
    out << rec.iteration_index << ',' << format_double(rec.completed_at) << ','
        << (rec.failed ? "failed" : "ok");
    for (std::size_t r = 0; r < max_roots; ++r) {
      out << ',';
      if (r < rec.roots.size()) out << format_double(rec.roots[r]);
    }
    out << ',';
    if (rec.per_subset_measure) out << format_double(*rec.per_subset_measure);
    out << ',';
    if (rec.failed) out << csv_escape(rec.error);
    out << '\n';
  }
  finish_writing(out, path);
}

void write_evolution_csv(const std::string& path, const ErrorEvolution& evolution) {
  std::ofstream out = open_for_writing(path);
  out << "t_seconds,estimate,error_rate\n";
  for (const auto& p : evolution.points) {
    out << format_double(p.t) << ',';
    if (p.has_estimate) out << format_double(p.estimate);
    out << ',';
    if (!std::isnan(p.error)) out << format_double(p.error);
    out << '\n';
  }
  finish_writing(out, path);
}

ErrorEvolution read_evolution_csv(const std::string& path) {
  std::ifstream in = open_for_reading(path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path, 1, "missing header");
  if (trim(line) != "t_seconds,estimate,error_rate") {
    throw ParseError(path, 1, "expected header t_seconds,estimate,error_rate");
  }
  ErrorEvolution evolution;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view sv = trim(line);
    if (sv.empty()) continue;
    const auto cells = split_csv(sv);
    if (cells.size() != 3) {
      throw ParseError(path, lineno, "expected 3 fields, got " + std::to_string(cells.size()));
    }
    EvolutionPoint p;
    p.t = parse_cell(cells[0], path, lineno);
    if (!trim(cells[1]).empty()) {
      p.estimate = parse_cell(cells[1], path, lineno);
      p.has_estimate = true;
    }
    p.error = trim(cells[2]).empty() ? std::numeric_limits<double>::quiet_NaN()
                                     : parse_cell(cells[2], path, lineno);
    evolution.points.push_back(p);
  }
  return evolution;
}

namespace {

void kv(std::ofstream& out, const char* key, const std::string& value) {
  out << key << '=' << value << '\n';
}
void kv(std::ofstream& out, const char* key, std::uint64_t value) {
  out << key << '=' << value << '\n';
}
void kv(std::ofstream& out, const char* key, double value) {
  out << key << '=' << format_double(value) << '\n';
}

std::string_view strip_quotes(std::string_view value) {
  if (value.size() >= 2 && ((value.front() == '"' && value.back() == '"') ||
                            (value.front() == '\'' && value.back() == '\''))) {
    return value.substr(1, value.size() - 2);
  }
  return value;
}

std::uint64_t parse_u64_value(std::string_view value, const std::string& path,
                              std::size_t lineno) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size() || value.empty()) {
    throw ParseError(path, lineno, "expected a nonnegative integer, got '" +
                                       std::string(value) + "'");
  }
  return v;
}

double parse_double_value(std::string_view value, const std::string& path, std::size_t lineno) {
  const auto v = parse_double(value);
  if (!v) throw ParseError(path, lineno, "expected a number, got '" + std::string(value) + "'");
  return *v;
}

}  // namespace

void write_manifest(const std::string& path, const RunConfig& cfg, const RunSummary& summary,
                    const std::string& truth_source) {
  std::ofstream out = open_for_writing(path);
  out << "# experiment manifest; replay with: sdb run --config <this file>\n";
  out << "# truth source: " << truth_source << "\n";
  out << "# iterations: " << summary.iterations << " (" << summary.failed << " failed)\n";
  out << "# estimate: " << format_double(summary.estimate) << "\n";
  if (summary.error) out << "# error rate: " << format_double(*summary.error) << "\n";
  if (!cfg.model.empty()) {
    kv(out, "model", cfg.model);
    kv(out, "n", cfg.n);
    kv(out, "d", cfg.d);
    kv(out, "rho", cfg.rho);
    kv(out, "noise-sd", cfg.noise_sd);
    kv(out, "innovation-sd", cfg.innovation_sd);
  } else {
    kv(out, "input", cfg.input);
  }
  kv(out, "estimator", cfg.estimator);
  kv(out, "root", cfg.root);
  kv(out, "measure", cfg.measure);
  kv(out, "scheme", cfg.scheme);
  kv(out, "b", cfg.b);
  if (cfg.gamma > 0.0) kv(out, "gamma", cfg.gamma);
  kv(out, "L", cfg.L);
  kv(out, "R", cfg.R);
  kv(out, "S", cfg.S);
  kv(out, "budget", cfg.budget);
  kv(out, "grid-step", cfg.grid_step);
  kv(out, "horizon", cfg.horizon);
  if (std::isfinite(cfg.truth)) kv(out, "truth", cfg.truth);
  if (cfg.oracle_reps > 0) kv(out, "oracle-reps", cfg.oracle_reps);
  if (cfg.oracle_seed > 0) kv(out, "oracle-seed", cfg.oracle_seed);
  kv(out, "seed", cfg.seed);
  kv(out, "workers", static_cast<std::uint64_t>(cfg.workers));
  if (!cfg.out.empty()) kv(out, "out", cfg.out);
  finish_writing(out, path);
}

RunConfig read_manifest_config(const std::string& path) {
  std::ifstream in = open_for_reading(path);
  RunConfig cfg;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view sv = trim(line);
    if (sv.empty() || sv.front() == '#' || sv.front() == ';') continue;
    const std::size_t eq = sv.find('=');
    if (eq == std::string_view::npos) throw ParseError(path, lineno, "expected key=value");
    const std::string_view key = trim(sv.substr(0, eq));
    const std::string_view value = strip_quotes(trim(sv.substr(eq + 1)));
    if (key == "model") {
      cfg.model = std::string(value);
    } else if (key == "input") {
      cfg.input = std::string(value);
    } else if (key == "n") {
      cfg.n = parse_u64_value(value, path, lineno);
    } else if (key == "d") {
      cfg.d = parse_u64_value(value, path, lineno);
    } else if (key == "rho") {
      cfg.rho = parse_double_value(value, path, lineno);
    } else if (key == "noise-sd") {
      cfg.noise_sd = parse_double_value(value, path, lineno);
    } else if (key == "innovation-sd") {
      cfg.innovation_sd = parse_double_value(value, path, lineno);
    } else if (key == "estimator") {
      cfg.estimator = std::string(value);
    } else if (key == "root") {
      cfg.root = std::string(value);
    } else if (key == "measure") {
      cfg.measure = std::string(value);
    } else if (key == "scheme") {
      cfg.scheme = std::string(value);
    } else if (key == "b") {
      cfg.b = parse_u64_value(value, path, lineno);
    } else if (key == "gamma") {
      cfg.gamma = parse_double_value(value, path, lineno);
    } else if (key == "L") {
      cfg.L = parse_u64_value(value, path, lineno);
    } else if (key == "R") {
      cfg.R = parse_u64_value(value, path, lineno);
    } else if (key == "S") {
      cfg.S = parse_u64_value(value, path, lineno);
    } else if (key == "budget") {
      cfg.budget = parse_double_value(value, path, lineno);
    } else if (key == "grid-step") {
      cfg.grid_step = parse_double_value(value, path, lineno);
    } else if (key == "horizon") {
      cfg.horizon = parse_double_value(value, path, lineno);
    } else if (key == "truth") {
      cfg.truth = parse_double_value(value, path, lineno);
    } else if (key == "oracle-reps") {
      cfg.oracle_reps = parse_u64_value(value, path, lineno);
    } else if (key == "oracle-seed") {
      cfg.oracle_seed = parse_u64_value(value, path, lineno);
    } else if (key == "seed") {
      cfg.seed = parse_u64_value(value, path, lineno);
    } else if (key == "workers") {
      cfg.workers = static_cast<int>(parse_u64_value(value, path, lineno));
    } else if (key == "out") {
      cfg.out = std::string(value);
    } else {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": unknown config key '" +
                        std::string(key) + "'");
    }
  }
  return cfg;
}

ComparisonTable compare_evolutions(const std::vector<LabeledEvolution>& inputs) {
  if (inputs.empty()) throw ConfigError("compare needs at least one evolution");
  ComparisonTable table;
  const auto& first = inputs.front().evolution.points;
  table.t.reserve(first.size());
  for (const auto& p : first) table.t.push_back(p.t);

  for (const auto& in : inputs) {
    const auto& pts = in.evolution.points;
    if (pts.size() != table.t.size()) {
      throw ConfigError("evolution grids are misaligned: expected " +
                        std::to_string(table.t.size()) + " points, got " +
                        std::to_string(pts.size()) + " for '" + in.label + "'");
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (pts[i].t != table.t[i]) {
        throw ConfigError("evolution grids are misaligned at t=" + format_double(table.t[i]) +
                          " vs t=" + format_double(pts[i].t) + " for '" + in.label + "'");
      }
    }
    if (in.label.find(',') != std::string::npos) {
      throw ConfigError("label may not contain a comma: '" + in.label + "'");
    }
  }

  std::vector<std::vector<double>> sums;
  std::vector<std::uint64_t> counts;
  for (const auto& in : inputs) {
    std::size_t k = 0;
    for (; k < table.labels.size(); ++k) {
      if (table.labels[k] == in.label) break;
    }
    if (k == table.labels.size()) {
      table.labels.push_back(in.label);
      sums.emplace_back(table.t.size(), 0.0);
      counts.push_back(0);
    }
    for (std::size_t i = 0; i < table.t.size(); ++i) sums[k][i] += in.evolution.points[i].error;
    counts[k] += 1;
  }
  table.error.resize(table.labels.size());
  for (std::size_t k = 0; k < table.labels.size(); ++k) {
    table.error[k].resize(table.t.size());
    for (std::size_t i = 0; i < table.t.size(); ++i) {
      table.error[k][i] = sums[k][i] / static_cast<double>(counts[k]);
    }
  }
  return table;
}

void write_comparison_csv(const std::string& path, const ComparisonTable& table) {
  std::ofstream out = open_for_writing(path);
  out << "t_seconds";
  for (const auto& label : table.labels) out << ",err_" << label;
  out << '\n';
  for (std::size_t i = 0; i < table.t.size(); ++i) {
    out << format_double(table.t[i]);
    for (std::size_t k = 0; k < table.labels.size(); ++k) {
      out << ',';
      if (!std::isnan(table.error[k][i])) out << format_double(table.error[k][i]);
    }
    out << '\n';
  }
  finish_writing(out, path);
}

}  // namespace sdb

#include "sdb/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sdb/error.hpp"

namespace sdb {

namespace {

// Rank ceil(alpha * count) with a nudge so exact products (0.95 * 100) are not
// pushed up a rank by floating-point representation error.
std::uint64_t quantile_rank(double alpha, std::uint64_t count) {
  const double x = alpha * static_cast<double>(count);
  auto rank = static_cast<std::uint64_t>(std::ceil(x - 1e-9));
  if (rank < 1) rank = 1;
  if (rank > count) rank = count;
  return rank;
}

double quantile_sorted(const std::vector<double>& sorted, double alpha) {
  return sorted[quantile_rank(alpha, sorted.size()) - 1];
}

double plug_in_sorted(const std::vector<double>& sorted, const MeasureSpec& m) {
  switch (m.kind) {
    case MeasureSpec::Kind::Quantile:
      return quantile_sorted(sorted, m.alpha);
    case MeasureSpec::Kind::Width:
      return quantile_sorted(sorted, m.hi) - quantile_sorted(sorted, m.lo);
    case MeasureSpec::Kind::ScaledMse: {
      double s = 0.0;
      for (const double r : sorted) s += r * r;
      return s / static_cast<double>(sorted.size());
    }
  }
  throw ConfigError("unknown measure kind");
}

void check_alpha(double alpha, const char* what) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ConfigError(std::string(what) + " must lie strictly inside (0, 1)");
  }
}

}  // namespace

EmpiricalDistribution ecdf_build(std::vector<double> roots) {
  if (roots.empty()) throw EmptyEnsembleError("ecdf over an empty root ensemble");
  std::sort(roots.begin(), roots.end());
  return EmpiricalDistribution{std::move(roots)};
}

double quantile(const EmpiricalDistribution& dist, double alpha) {
  check_alpha(alpha, "quantile level");
  if (dist.sorted.empty()) throw EmptyEnsembleError("quantile of an empty ensemble");
  return quantile_sorted(dist.sorted, alpha);
}

MeasureSpec MeasureSpec::parse(const std::string& text) {
  MeasureSpec m;
  if (text == "mse") {
    m.kind = Kind::ScaledMse;
    return m;
  }
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  if (head == "quantile" && colon != std::string::npos) {
    m.kind = Kind::Quantile;
    try {
      m.alpha = std::stod(text.substr(colon + 1));
    } catch (const std::exception&) {
      throw ConfigError("bad measure '" + text + "': expected quantile:ALPHA");
    }
    check_alpha(m.alpha, "quantile level");
    return m;
  }
  if (head == "width" && colon != std::string::npos) {
    m.kind = Kind::Width;
    const std::string rest = text.substr(colon + 1);
    const auto comma = rest.find(',');
    if (comma == std::string::npos) {
      throw ConfigError("bad measure '" + text + "': expected width:LO,HI");
    }
    try {
      m.lo = std::stod(rest.substr(0, comma));
      m.hi = std::stod(rest.substr(comma + 1));
    } catch (const std::exception&) {
      throw ConfigError("bad measure '" + text + "': expected width:LO,HI");
    }
    check_alpha(m.lo, "width lower level");
    check_alpha(m.hi, "width upper level");
    if (!(m.lo < m.hi)) throw ConfigError("width levels must satisfy LO < HI");
    return m;
  }
  throw ConfigError("unknown measure '" + text + "' (expected quantile:A, width:LO,HI or mse)");
}

std::string MeasureSpec::str() const {
  switch (kind) {
    case Kind::Quantile:
      return "quantile:" + std::to_string(alpha);
    case Kind::Width:
      return "width:" + std::to_string(lo) + "," + std::to_string(hi);
    case Kind::ScaledMse:
      return "mse";
  }
  return "?";
}

double plug_in(const EmpiricalDistribution& dist, const MeasureSpec& measure) {
  if (dist.sorted.empty()) throw EmptyEnsembleError("plug-in on an empty ensemble");
  return plug_in_sorted(dist.sorted, measure);
}

double blb_aggregate(const std::vector<double>& per_subset) {
  if (per_subset.empty()) throw EmptyEnsembleError("BLB aggregate over zero subsets");
  double s = 0.0;
  for (const double v : per_subset) s += v;
  return s / static_cast<double>(per_subset.size());
}

double error_rate(double estimate, double truth) {
  if (truth == 0.0) throw ConfigError("error rate undefined for truth == 0");
  return std::abs(estimate / truth - 1.0);
}

ErrorEvolution evaluate_trace(const RootTrace& trace, const MeasureSpec& measure,
                              std::optional<double> truth, double grid_step, double horizon) {
  if (!(grid_step > 0.0)) throw ConfigError("grid step must be positive");
  if (!(horizon >= 0.0)) throw ConfigError("horizon must be nonnegative");

  std::vector<const IterationRecord*> done;
  done.reserve(trace.records.size());
  for (const auto& rec : trace.records) {
    if (!rec.failed) done.push_back(&rec);
  }
  std::stable_sort(done.begin(), done.end(), [](const IterationRecord* a, const IterationRecord* b) {
    return a->completed_at < b->completed_at;
  });

  const auto grid_points = static_cast<std::uint64_t>(
      std::floor(horizon / grid_step + 1e-9));

  ErrorEvolution ev;
  ev.points.reserve(grid_points);

  const bool blb = scheme_is_blb(trace.scheme);
  std::vector<double> pooled;       // single-root schemes: sorted pooled roots
  double measure_sum = 0.0;         // BLB: running sum of per-subset measures
  std::uint64_t measure_count = 0;
  std::size_t next = 0;

  for (std::uint64_t k = 1; k <= grid_points; ++k) {
    const double t = grid_step * static_cast<double>(k);
    const std::size_t old_size = pooled.size();
    while (next < done.size() && done[next]->completed_at <= t) {
      const IterationRecord* rec = done[next];
      if (blb) {
        if (rec->per_subset_measure.has_value()) {
          measure_sum += *rec->per_subset_measure;
          ++measure_count;
        }
      } else {
        pooled.insert(pooled.end(), rec->roots.begin(), rec->roots.end());
      }
      ++next;
    }
    if (!blb && pooled.size() > old_size) {
      std::sort(pooled.begin() + static_cast<std::ptrdiff_t>(old_size), pooled.end());
      std::inplace_merge(pooled.begin(), pooled.begin() + static_cast<std::ptrdiff_t>(old_size),
                         pooled.end());
    }

    EvolutionPoint p;
    p.t = t;
    const bool have = blb ? (measure_count > 0) : !pooled.empty();
    if (have) {
      p.estimate = blb ? measure_sum / static_cast<double>(measure_count)
                       : plug_in_sorted(pooled, measure);
      p.has_estimate = true;
      p.error = truth ? error_rate(p.estimate, *truth)
                      : std::numeric_limits<double>::quiet_NaN();
    } else {
      p.estimate = std::numeric_limits<double>::quiet_NaN();
      p.has_estimate = false;
      p.error = truth ? 1.0 : std::numeric_limits<double>::quiet_NaN();
    }
    ev.points.push_back(p);
  }
  return ev;
}

}  // namespace sdb

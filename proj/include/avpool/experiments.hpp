#ifndef AVPOOL_EXPERIMENTS_HPP
#define AVPOOL_EXPERIMENTS_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "avpool/engine.hpp"
#include "avpool/layout.hpp"

namespace avpool {

enum class SweepDimension { Layout, Demand, Patience };

[[nodiscard]] inline const char* to_string(SweepDimension d) {
  switch (d) {
    case SweepDimension::Layout: return "layout";
    case SweepDimension::Demand: return "demand_probability";
    case SweepDimension::Patience: return "patience_radius";
  }
  return "?";
}

[[nodiscard]] inline std::optional<SweepDimension> parse_sweep_dimension(const std::string& s) {
  if (s == "layout") return SweepDimension::Layout;
  if (s == "demand" || s == "demand_probability") return SweepDimension::Demand;
  if (s == "patience" || s == "patience_radius") return SweepDimension::Patience;
  return std::nullopt;
}

struct SweepSpec {
  ScenarioConfig base;
  SweepDimension dimension = SweepDimension::Layout;
  /// Facility counts for a layout sweep, probabilities or radii otherwise.
  std::vector<double> values;
  /// Canonical facility counts crossed with the swept values (ignored for a
  /// layout sweep or when `layout_override` is set).
  std::vector<std::int32_t> layouts{kCanonicalLayoutCounts.begin(), kCanonicalLayoutCounts.end()};
  std::optional<FacilityLayout> layout_override;
  std::int64_t num_days = 100;
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
  std::string output_path;
  /// 0 = AVPOOL_THREADS or hardware concurrency.
  unsigned threads = 0;
};

struct SweepRow {
  SweepDimension dimension = SweepDimension::Layout;
  double value = 0;
  std::int32_t layout_k = 0;
  std::uint64_t seed = 0;
  CostLedger totals;
  std::int64_t num_days = 0;

  [[nodiscard]] Rational mean(Money CostLedger::*field) const { return Rational(totals.*field, num_days); }
  [[nodiscard]] Rational mean_total() const { return mean(&CostLedger::total); }
  [[nodiscard]] Rational mean_lost() const { return mean(&CostLedger::lost_sale_cost); }
  [[nodiscard]] Rational mean_travel() const { return mean(&CostLedger::travel_cost); }
  [[nodiscard]] Rational mean_facility() const { return mean(&CostLedger::facility_cost); }
  [[nodiscard]] Rational lost_share() const {
    return totals.total == 0 ? Rational(0) : Rational(totals.lost_sale_cost, totals.total);
  }
};

inline void validate(const SweepSpec& spec) {
  validate(spec.base);
  if (spec.values.empty()) throw InputError("sweep: no values to sweep");
  if (spec.num_days < 1) throw InputError("sweep: num_days must be >= 1");
  if (spec.seeds.empty()) throw InputError("sweep: at least one seed required");
  if (spec.dimension != SweepDimension::Layout && !spec.layout_override && spec.layouts.empty())
    throw InputError("sweep: no layouts");
  for (double v : spec.values) {
    switch (spec.dimension) {
      case SweepDimension::Layout:
      case SweepDimension::Patience:
        if (v < 0 || v != std::floor(v)) throw InputError("sweep: value must be a non-negative integer");
        break;
      case SweepDimension::Demand:
        if (!(v >= 0 && v <= 1)) throw InputError("sweep: probability outside [0, 1]");
        break;
    }
  }
}

/// Fixed-point decimal of an exact rational, rounded half away from zero.
[[nodiscard]] inline std::string format_fixed(const Rational& r, int places = 6) {
  std::int64_t scale = 1;
  for (int i = 0; i < places; ++i) scale *= 10;
  const bool negative = r < 0;
  const Rational mag = negative ? -r : r;
  // Work in 128-bit to stay exact for large numerators.
  const __int128 num = static_cast<__int128>(mag.numerator()) * scale;
  const __int128 den = mag.denominator();
  __int128 q = num / den;
  if ((num % den) * 2 >= den) ++q;
  const auto whole = static_cast<std::int64_t>(q / scale);
  const auto frac = static_cast<std::int64_t>(q % scale);
  std::ostringstream os;
  if (negative && q != 0) os << '-';
  os << whole;
  if (places > 0) {
    std::string f = std::to_string(frac);
    os << '.' << std::string(static_cast<std::size_t>(places) - f.size(), '0') << f;
  }
  return os.str();
}

[[nodiscard]] inline std::string format_value(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

inline constexpr const char* kSweepCsvHeader =
    "sweep_dim,sweep_value,layout_k,seed,mean_total,mean_lost,mean_travel,mean_facility,lost_share";

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << kSweepCsvHeader << '\n';
  for (const auto& r : rows)
    os << to_string(r.dimension) << ',' << format_value(r.value) << ',' << r.layout_k << ',' << r.seed << ','
       << format_fixed(r.mean_total()) << ',' << format_fixed(r.mean_lost()) << ',' << format_fixed(r.mean_travel())
       << ',' << format_fixed(r.mean_facility()) << ',' << format_fixed(r.lost_share()) << '\n';
}

/// Thread count from AVPOOL_THREADS, else hardware concurrency.
[[nodiscard]] inline unsigned default_thread_count() {
  if (const char* env = std::getenv("AVPOOL_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n >= 1) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs every (seed, swept value, layout) cell. Rows are ordered seed-major
/// in the order seeds are listed, so adding seeds only appends rows. Each
/// row depends on its own key alone, so thread count never changes output.
[[nodiscard]] inline std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  validate(spec);
  struct Job {
    SweepRow row;
    ScenarioConfig config;
    FacilityLayout layout;
  };
  std::vector<Job> jobs;
  for (auto seed : spec.seeds) {
    for (double value : spec.values) {
      ScenarioConfig config = spec.base;
      std::vector<std::int32_t> ks = spec.layouts;
      switch (spec.dimension) {
        case SweepDimension::Layout: ks = {static_cast<std::int32_t>(value)}; break;
        case SweepDimension::Demand: config.demand_probability = value; break;
        case SweepDimension::Patience:
          config.patience_radius = static_cast<Blocks>(value);
          config.patience_radius_max = -1;
          break;
      }
      if (spec.layout_override && spec.dimension != SweepDimension::Layout) {
        validate(*spec.layout_override, config);
        jobs.push_back(Job{SweepRow{spec.dimension, value, static_cast<std::int32_t>(spec.layout_override->size()),
                                    seed, {}, spec.num_days},
                           config, *spec.layout_override});
        continue;
      }
      for (auto k : ks)
        jobs.push_back(Job{SweepRow{spec.dimension, value, k, seed, {}, spec.num_days}, config,
                           canonical_layout(k, config)});
    }
  }

  const unsigned threads = std::min<std::size_t>(spec.threads ? spec.threads : default_thread_count(), jobs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size() && !failed; i = next++) {
      try {
        auto& job = jobs[i];
        job.row.totals = run_scenario(job.config, job.layout, spec.num_days, job.row.seed).totals;
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<SweepRow> rows;
  rows.reserve(jobs.size());
  for (auto& job : jobs) rows.push_back(job.row);
  if (!spec.output_path.empty()) {
    std::ofstream out(spec.output_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + spec.output_path + " for writing");
    write_sweep_csv(out, rows);
  }
  return rows;
}

/// Divides by the series maximum; an all-zero (or non-positive max) series
/// maps to zeros.
[[nodiscard]] inline std::vector<double> normalize(const std::vector<double>& series) {
  std::vector<double> out(series.size(), 0.0);
  if (series.empty()) return out;
  const double top = *std::max_element(series.begin(), series.end());
  if (!(top > 0)) return out;
  for (std::size_t i = 0; i < series.size(); ++i) out[i] = series[i] / top;
  return out;
}

/// Ranks with ties sharing their average rank (1-based).
[[nodiscard]] inline std::vector<double> average_ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t m = i; m <= j; ++m) ranks[idx[m]] = avg;
    i = j + 1;
  }
  return ranks;
}

/// Spearman rank correlation (Pearson correlation of average ranks).
[[nodiscard]] inline double spearman_correlation(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2) throw InputError("spearman: need two equal-length series of size >= 2");
  const auto ra = average_ranks(a), rb = average_ranks(b);
  const double n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    ma += ra[i];
    mb += rb[i];
  }
  ma /= n;
  mb /= n;
  double cov = 0, va = 0, vb = 0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    cov += (ra[i] - ma) * (rb[i] - mb);
    va += (ra[i] - ma) * (ra[i] - ma);
    vb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (va == 0 || vb == 0) return 0.0;
  return cov / std::sqrt(va * vb);
}

}  // namespace avpool

#endif  // AVPOOL_EXPERIMENTS_HPP

#include "fta/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "fta/constructions.hpp"
#include "fta/density.hpp"

namespace fta {

RankedAlphabet setting_alphabet(Setting setting) {
  std::vector<Symbol> symbols{{"alpha", 0}, {"sigma", 2}};
  if (setting == Setting::B) symbols.push_back({"delta", 2});
  return RankedAlphabet(std::move(symbols));
}

char setting_name(Setting setting) { return setting == Setting::A ? 'A' : 'B'; }

Setting parse_setting(std::string_view text) {
  if (text.size() == 1) {
    const char c = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
    if (c == 'A') return Setting::A;
    if (c == 'B') return Setting::B;
  }
  throw ConfigError(fmt::format("unknown setting '{}', expected A or B", text));
}

std::size_t default_threads() {
  if (const char* env = std::getenv("FTA_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

// Runs body(i) for i in [0, count) on `threads` workers. Rethrows the exception of the
// lowest failing index so failures do not depend on scheduling.
template <typename Body>
void parallel_for(std::size_t count, std::size_t threads, Body&& body) {
  threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(count, 1));
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::size_t error_index = count;
  std::exception_ptr error;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (i < error_index) {
          error_index = i;
          error = std::current_exception();
        }
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
}

struct TrialResult {
  std::size_t attempts = 0;
  std::size_t det = 0;
  std::size_t canonical = 0;
};

TrialResult run_trial(Setting setting, std::size_t n, double d2, Seed seed, std::size_t trial,
                      const RunOptions& options) {
  GenConfig config(setting_alphabet(setting), n, d2, options.d0);
  config.final_prob = options.final_prob;
  config.max_attempts = options.max_attempts;
  const TrimDraw draw = generate_trim(config, seed, trial);
  const std::size_t budget =
      options.subset_budget != 0 ? options.subset_budget : (n < 63 ? (std::size_t{1} << n) : 0);
  const Dfta dfta = determinize(draw.fta, budget);
  return TrialResult{draw.attempts, det_size(dfta), minimize(dfta).size()};
}

PointRecord aggregate(Setting setting, std::size_t n, std::size_t x, double d2, Seed seed,
                      std::span<const TrialResult> results) {
  PointRecord rec;
  rec.setting = setting;
  rec.n = n;
  rec.x = x;
  rec.d2 = d2;
  rec.trials = results.size();
  rec.seed = seed;
  double det_sum = 0.0, can_sum = 0.0;
  for (const auto& r : results) {
    rec.trim_attempts += r.attempts;
    rec.det_sizes.push_back(r.det);
    rec.canonical_sizes.push_back(r.canonical);
    det_sum += static_cast<double>(r.det);
    can_sum += static_cast<double>(r.canonical);
  }
  rec.mean_det_size = det_sum / static_cast<double>(rec.trials);
  rec.mean_canonical_size = can_sum / static_cast<double>(rec.trials);
  return rec;
}

void check_point_args(std::size_t n, std::size_t trials) {
  if (trials == 0) throw ConfigError("trials must be positive");
  if (n < 2) throw ConfigError(fmt::format("experiments need n >= 2, got {}", n));
}

}  // namespace

PointRecord run_point(Setting setting, std::size_t n, double d2, std::size_t trials, Seed seed,
                      const RunOptions& options) {
  check_point_args(n, trials);
  std::vector<TrialResult> results(trials);
  parallel_for(trials, options.threads ? options.threads : default_threads(),
               [&](std::size_t t) { results[t] = run_trial(setting, n, d2, seed, t, options); });
  return aggregate(setting, n, 0, d2, seed, results);
}

PeakFit fit_peak(std::span<const WeightedDensity> points, const FitOptions& options) {
  double total = 0.0, weighted_log = 0.0;
  std::size_t positive = 0;
  for (const auto& p : points) {
    if (!(p.weight > 0.0)) continue;
    if (!(p.density > 0.0)) throw FitError("densities must be positive");
    ++positive;
    total += p.weight;
    weighted_log += p.weight * std::log(p.density);
  }
  if (positive < 3) throw FitError(fmt::format("peak fit needs at least 3 positive-weight points, got {}", positive));
  PeakFit fit;
  fit.points = positive;
  fit.mu = weighted_log / total;
  double var = 0.0;
  for (const auto& p : points) {
    if (!(p.weight > 0.0)) continue;
    const double dev = std::log(p.density) - fit.mu;
    var += p.weight * dev * dev;
  }
  fit.sigma = std::sqrt(var / total);
  fit.se = options.scale == IntervalScale::kStdDev ? fit.sigma
                                                   : fit.sigma / std::sqrt(static_cast<double>(positive));
  fit.observed_peak = std::exp(fit.mu);
  fit.lo = std::exp(fit.mu - options.z * fit.se);
  fit.hi = std::exp(fit.mu + options.z * fit.se);
  return fit;
}

std::vector<WeightedDensity> weights_of(std::span<const PointRecord> points, WeightSeries series) {
  std::vector<WeightedDensity> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    out.push_back({p.d2, series == WeightSeries::kDeterminized ? p.mean_det_size : p.mean_canonical_size});
  }
  return out;
}

Sweep run_sweep(Setting setting, std::size_t n, std::size_t steps, std::size_t trials, Seed seed,
                const RunOptions& options, const FitOptions& fit) {
  check_point_args(n, trials);
  if (n > 13 && !options.allow_large_n) {
    throw ConfigError(fmt::format("n = {} exceeds the default sweep range [2, 13]", n));
  }
  const std::vector<DensityPoint> grid = density_grid(n, steps);
  std::vector<TrialResult> results(grid.size() * trials);
  // Heavy points sit mid-grid; start there so the tail of the schedule is cheap.
  std::vector<std::size_t> order(grid.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto mid = static_cast<std::ptrdiff_t>(steps / 2);
    return std::abs(static_cast<std::ptrdiff_t>(a) - mid) < std::abs(static_cast<std::ptrdiff_t>(b) - mid);
  });
  parallel_for(results.size(), options.threads ? options.threads : default_threads(), [&](std::size_t i) {
    const std::size_t point = order[i / trials];
    const std::size_t trial = i % trials;
    results[point * trials + trial] = run_trial(setting, n, grid[point].d2, seed, trial, options);
  });

  Sweep sweep;
  sweep.setting = setting;
  sweep.n = n;
  sweep.steps = steps;
  sweep.trials = trials;
  sweep.seed = seed;
  for (std::size_t p = 0; p < grid.size(); ++p) {
    sweep.points.push_back(aggregate(setting, n, grid[p].x, grid[p].d2, seed,
                                     std::span(results).subspan(p * trials, trials)));
  }
  sweep.det_fit = fit_peak(weights_of(sweep.points, WeightSeries::kDeterminized), fit);
  sweep.canonical_fit = fit_peak(weights_of(sweep.points, WeightSeries::kCanonical), fit);
  return sweep;
}

std::vector<DensityRow> table_densities(Setting setting, std::span<const std::size_t> n_values, std::size_t steps,
                                        std::size_t trials, Seed seed, const RunOptions& options,
                                        const FitOptions& fit, WeightSeries series) {
  std::vector<DensityRow> rows;
  for (std::size_t n : n_values) {
    const Sweep sweep = run_sweep(setting, n, steps, trials, seed, options, fit);
    DensityRow row{n, peak_density(n), sweep.fit(series), false};
    row.contained = row.fit.contains(row.predicted);
    rows.push_back(row);
  }
  return rows;
}

namespace {

constexpr double kTrimDensities[] = {0.01, 0.05, 0.10, 0.25, 0.50};
constexpr std::size_t kTrimSizes[] = {2, 4, 6, 7, 8, 9, 10, 11, 12, 13};
// Percentages by [density row][size column]; -1 marks a blank cell.
constexpr int kTrimPercent[5][10] = {
    {-1, -1, -1, 7, 11, 18, 27, 38, 50, 64},
    {-1, -1, 68, 82, 92, 98, 99, 100, 100, 100},
    {-1, 54, 90, 96, 99, 99, 100, 100, 100, 100},
    {-1, 83, 97, 98, 99, 100, 100, 100, 100, 100},
    {47, 88, 96, 98, 100, 100, 100, 100, 100, 100},
};

}  // namespace

std::optional<double> reference_trim_ratio(double d2, std::size_t n) {
  for (std::size_t r = 0; r < std::size(kTrimDensities); ++r) {
    if (std::fabs(kTrimDensities[r] - d2) > 1e-12) continue;
    for (std::size_t c = 0; c < std::size(kTrimSizes); ++c) {
      if (kTrimSizes[c] == n && kTrimPercent[r][c] >= 0) return kTrimPercent[r][c] / 100.0;
    }
  }
  return std::nullopt;
}

std::vector<double> reference_trim_densities() { return {std::begin(kTrimDensities), std::end(kTrimDensities)}; }
std::vector<std::size_t> reference_trim_sizes() { return {std::begin(kTrimSizes), std::end(kTrimSizes)}; }

std::vector<TrimCell> table_trim(Setting setting, std::span<const double> densities,
                                 std::span<const std::size_t> n_values, std::size_t trials, Seed seed,
                                 bool include_blank, const RunOptions& options) {
  std::vector<TrimCell> cells;
  for (double d2 : densities) {
    for (std::size_t n : n_values) {
      TrimCell cell;
      cell.d2 = d2;
      cell.n = n;
      cell.reference = setting == Setting::A ? reference_trim_ratio(d2, n) : std::nullopt;
      if (!cell.reference && !include_blank) continue;
      cells.push_back(cell);
    }
  }
  parallel_for(cells.size(), options.threads ? options.threads : default_threads(), [&](std::size_t i) {
    GenConfig config(setting_alphabet(setting), cells[i].n, cells[i].d2, options.d0);
    config.final_prob = options.final_prob;
    cells[i].ratio = trim_ratio(config, trials, seed);
  });
  return cells;
}

SettingsComparison compare_settings(std::size_t n, std::size_t steps, std::size_t trials, Seed seed,
                                    const RunOptions& options, const FitOptions& fit) {
  SettingsComparison out;
  out.a = run_sweep(Setting::A, n, steps, trials, seed, options, fit);
  out.b = run_sweep(Setting::B, n, steps, trials, seed, options, fit);
  const std::size_t mid = steps / 2;
  out.a_peak_size = out.a.points[mid].mean_det_size;
  out.b_peak_size = out.b.points[mid].mean_det_size;
  out.peaks_overlap = out.a.det_fit.overlaps(out.b.det_fit);
  out.b_larger = out.b_peak_size > out.a_peak_size;
  out.minimization_keeps_peak = out.a.det_fit.overlaps(out.a.canonical_fit);
  return out;
}

}  // namespace fta

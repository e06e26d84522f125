#pragma once

// Density sweeps over random trim FTAs: generate, determinize, minimize, record sizes,
// and locate the size peak with a log-normal fit.

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "fta/core.hpp"
#include "fta/randgen.hpp"

namespace fta {

/// A: {alpha/0, sigma/2}. B: {alpha/0, sigma/2, delta/2}.
enum class Setting { A, B };

RankedAlphabet setting_alphabet(Setting setting);
char setting_name(Setting setting);
/// Accepts "A"/"B" (case-insensitive); throws ConfigError otherwise.
Setting parse_setting(std::string_view text);

/// Worker count from the FTA_THREADS environment variable, else the hardware concurrency.
std::size_t default_threads();

struct RunOptions {
  double d0 = 0.5;
  double final_prob = 0.5;
  /// Trim FTAs are rarer than 1e-5 per draw at the sparse end of a grid, so sweeps allow far
  /// more attempts than a single generation does.
  std::size_t max_attempts = 200'000'000;
  /// Subset-state cap per determinization; 0 means 2^n.
  std::size_t subset_budget = 0;
  /// 0 means default_threads().
  std::size_t threads = 0;
  /// Sweeps reject n > 13 unless set.
  bool allow_large_n = false;
};

struct PointRecord {
  Setting setting = Setting::A;
  std::size_t n = 0;
  std::size_t x = 0;
  double d2 = 0.0;
  std::size_t trials = 0;
  std::size_t trim_attempts = 0;
  double mean_det_size = 0.0;
  double mean_canonical_size = 0.0;
  std::vector<std::size_t> det_sizes;
  std::vector<std::size_t> canonical_sizes;
  Seed seed;
};

/// `trials` trim FTAs at (n, d2), each determinized and minimized. Deterministic given the
/// seed regardless of thread count.
PointRecord run_point(Setting setting, std::size_t n, double d2, std::size_t trials, Seed seed,
                      const RunOptions& options = {});

struct WeightedDensity {
  double density = 0.0;
  double weight = 0.0;
};

/// How the half-width of the peak interval is scaled from the weighted log-density spread σ.
enum class IntervalScale {
  /// se = σ: the spread of the fitted log-normal itself.
  kStdDev,
  /// se = σ / √k with k the number of positive-weight grid points.
  kStdErrorPerPoint,
};

struct FitOptions {
  IntervalScale scale = IntervalScale::kStdErrorPerPoint;
  double z = 1.96;
};

struct PeakFit {
  /// Weighted mean of ln(density).
  double mu = 0.0;
  /// Weighted standard deviation of ln(density).
  double sigma = 0.0;
  double se = 0.0;
  /// e^mu.
  double observed_peak = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  std::size_t points = 0;

  bool contains(double density) const { return lo <= density && density <= hi; }
  bool overlaps(const PeakFit& other) const { return lo <= other.hi && other.lo <= hi; }
};

/// Size-weighted log-normal fit. Throws FitError with fewer than three positive-weight points.
PeakFit fit_peak(std::span<const WeightedDensity> points, const FitOptions& options = {});

enum class WeightSeries { kDeterminized, kCanonical };

struct Sweep {
  Setting setting = Setting::A;
  std::size_t n = 0;
  std::size_t steps = 0;
  std::size_t trials = 0;
  Seed seed;
  std::vector<PointRecord> points;
  /// Fit on mean determinized sizes.
  PeakFit det_fit;
  /// Fit on mean canonical sizes.
  PeakFit canonical_fit;

  const PeakFit& fit(WeightSeries series = WeightSeries::kDeterminized) const {
    return series == WeightSeries::kDeterminized ? det_fit : canonical_fit;
  }
};

std::vector<WeightedDensity> weights_of(std::span<const PointRecord> points, WeightSeries series);

/// One point per density_grid(n, steps) entry, then both peak fits.
/// Throws ConfigError for trials = 0, n < 2, or n > 13 without allow_large_n.
Sweep run_sweep(Setting setting, std::size_t n, std::size_t steps, std::size_t trials, Seed seed,
                const RunOptions& options = {}, const FitOptions& fit = {});

struct DensityRow {
  std::size_t n = 0;
  double predicted = 0.0;
  PeakFit fit;
  bool contained = false;
};

std::vector<DensityRow> table_densities(Setting setting, std::span<const std::size_t> n_values, std::size_t steps,
                                        std::size_t trials, Seed seed, const RunOptions& options = {},
                                        const FitOptions& fit = {}, WeightSeries series = WeightSeries::kDeterminized);

struct TrimCell {
  double d2 = 0.0;
  std::size_t n = 0;
  TrimRatio ratio;
  /// Published percentage for this cell, if any.
  std::optional<double> reference;
};

/// Published trim ratios for setting A (fractions), or nullopt for blank cells.
std::optional<double> reference_trim_ratio(double d2, std::size_t n);
std::vector<double> reference_trim_densities();
std::vector<std::size_t> reference_trim_sizes();

/// trim_ratio per (d2, n) cell, rows in `densities` order. Cells without a published value are
/// skipped unless `include_blank`.
std::vector<TrimCell> table_trim(Setting setting, std::span<const double> densities,
                                 std::span<const std::size_t> n_values, std::size_t trials, Seed seed,
                                 bool include_blank = false, const RunOptions& options = {});

struct SettingsComparison {
  Sweep a;
  Sweep b;
  /// Mean determinized size at the grid midpoint (the predicted peak).
  double a_peak_size = 0.0;
  double b_peak_size = 0.0;
  bool peaks_overlap = false;
  bool b_larger = false;
  /// Determinized and canonical fits of setting A overlap.
  bool minimization_keeps_peak = false;
};

SettingsComparison compare_settings(std::size_t n, std::size_t steps, std::size_t trials, Seed seed,
                                    const RunOptions& options = {}, const FitOptions& fit = {});

}  // namespace fta

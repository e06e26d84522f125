#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "fta/density.hpp"
#include "fta/experiment.hpp"

using namespace fta;

namespace {

RunOptions threads(std::size_t t) {
  RunOptions o;
  o.threads = t;
  return o;
}

}  // namespace

TEST_CASE("settings") {
  CHECK(setting_alphabet(Setting::A).size() == 2);
  CHECK(setting_alphabet(Setting::B).size() == 3);
  CHECK(setting_alphabet(Setting::B).symbols_of_rank(2).size() == 2);
  CHECK(parse_setting("b") == Setting::B);
  CHECK(setting_name(parse_setting("A")) == 'A');
  CHECK_THROWS_AS(parse_setting("C"), ConfigError);
  CHECK_THROWS_AS(parse_setting("AB"), ConfigError);
}

TEST_CASE("complete two-state point accepts everything") {
  RunOptions o;
  o.d0 = 1.0;
  o.final_prob = 1.0;
  const PointRecord p = run_point(Setting::A, 2, 1.0, 1, Seed{1}, o);
  CHECK(p.trim_attempts == 1);
  CHECK(p.det_sizes[0] == 1);
  CHECK(p.canonical_sizes[0] == 1);
}

TEST_CASE("point records") {
  const PointRecord p = run_point(Setting::A, 5, peak_density(5), 30, Seed{2}, threads(1));
  REQUIRE(p.det_sizes.size() == 30);
  for (std::size_t i = 0; i < 30; ++i) {
    CHECK(p.canonical_sizes[i] <= p.det_sizes[i]);
    CHECK(p.canonical_sizes[i] >= 1);
  }
  CHECK(p.mean_det_size == doctest::Approx(std::accumulate(p.det_sizes.begin(), p.det_sizes.end(), 0.0) / 30));
  CHECK(p.mean_canonical_size ==
        doctest::Approx(std::accumulate(p.canonical_sizes.begin(), p.canonical_sizes.end(), 0.0) / 30));
  CHECK(p.mean_canonical_size <= p.mean_det_size);
  CHECK(p.trim_attempts >= 30);

  const PointRecord q = run_point(Setting::A, 5, peak_density(5), 30, Seed{2}, threads(4));
  CHECK(q.det_sizes == p.det_sizes);
  CHECK(q.canonical_sizes == p.canonical_sizes);
  CHECK(q.trim_attempts == p.trim_attempts);

  CHECK_THROWS_AS(run_point(Setting::A, 5, 0.1, 0, Seed{1}), ConfigError);
  CHECK_THROWS_AS(run_point(Setting::A, 1, 0.1, 3, Seed{1}), ConfigError);
}

TEST_CASE("sizes peak near the predicted density") {
  const auto peak = run_point(Setting::A, 8, 0.04, 20, Seed{3});
  const auto dense = run_point(Setting::A, 8, 0.5, 20, Seed{3});
  const auto sparse = run_point(Setting::A, 8, 0.002, 20, Seed{3});
  CHECK(peak.mean_canonical_size > 4 * dense.mean_canonical_size);
  CHECK(peak.mean_canonical_size > 4 * sparse.mean_canonical_size);
}

TEST_CASE("fit_peak") {
  const std::vector<WeightedDensity> single = {{0.05, 3}, {0.05, 1}, {0.05, 7}, {0.2, 0}};
  const PeakFit s = fit_peak(single);
  CHECK(s.observed_peak == doctest::Approx(0.05));
  CHECK(s.sigma == doctest::Approx(0.0));
  CHECK(s.points == 3);

  const std::vector<WeightedDensity> sym = {{0.01, 2}, {0.02, 5}, {0.04, 9}, {0.08, 5}, {0.16, 2}};
  const PeakFit f = fit_peak(sym);
  CHECK(f.observed_peak == doctest::Approx(0.04));
  CHECK(f.lo < f.observed_peak);
  CHECK(f.observed_peak < f.hi);
  CHECK(std::log(f.hi) - std::log(f.observed_peak) == doctest::Approx(std::log(f.observed_peak) - std::log(f.lo)));

  // Hand values: ln-spacing h = ln 2, weights 2,5,9,5,2 over offsets -2..2.
  const double h = std::log(2.0);
  const double var = (2 * 4 + 5 * 1 + 0 + 5 * 1 + 2 * 4) * h * h / 23;
  CHECK(f.sigma == doctest::Approx(std::sqrt(var)));
  CHECK(f.se == doctest::Approx(std::sqrt(var) / std::sqrt(5.0)));
  const PeakFit wide = fit_peak(sym, {IntervalScale::kStdDev, 1.96});
  CHECK(wide.se == doctest::Approx(std::sqrt(var)));
  CHECK(wide.lo == doctest::Approx(0.04 * std::exp(-1.96 * std::sqrt(var))));
  CHECK(wide.contains(0.04));
  CHECK(wide.overlaps(f));

  const std::vector<WeightedDensity> two = {{0.1, 1}, {0.2, 1}, {0.3, 0}};
  CHECK_THROWS_AS(fit_peak(two), FitError);
  const std::vector<WeightedDensity> bad = {{0.0, 1}, {0.2, 1}, {0.3, 1}};
  CHECK_THROWS_AS(fit_peak(bad), FitError);
}

TEST_CASE("sweeps") {
  CHECK_THROWS_AS(run_sweep(Setting::A, 5, 10, 0, Seed{1}), ConfigError);
  CHECK_THROWS_AS(run_sweep(Setting::A, 14, 10, 1, Seed{1}), ConfigError);
  CHECK_THROWS_AS(run_sweep(Setting::A, 1, 10, 1, Seed{1}), ConfigError);

  const Sweep a = run_sweep(Setting::A, 5, 10, 6, Seed{4}, threads(1));
  REQUIRE(a.points.size() == 11);
  CHECK(a.points[5].d2 == doctest::Approx(peak_density(5)));
  for (std::size_t i = 0; i < a.points.size(); ++i) CHECK(a.points[i].x == i);
  CHECK(a.det_fit.lo < a.det_fit.observed_peak);
  CHECK(a.det_fit.observed_peak < a.det_fit.hi);
  CHECK(&a.fit(WeightSeries::kCanonical) == &a.canonical_fit);

  const Sweep b = run_sweep(Setting::A, 5, 10, 6, Seed{4}, threads(3));
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    CHECK(a.points[i].det_sizes == b.points[i].det_sizes);
    CHECK(a.points[i].canonical_sizes == b.points[i].canonical_sizes);
  }
  CHECK(a.det_fit.mu == b.det_fit.mu);
}

TEST_CASE("table densities rows") {
  const std::size_t ns[] = {3, 10};
  const auto rows = table_densities(Setting::A, ns, 10, 3, Seed{5});
  REQUIRE(rows.size() == 2);
  CHECK(round_half_up(rows[0].predicted, 4) == doctest::Approx(0.2965));
  CHECK(round_half_up(rows[1].predicted, 4) == doctest::Approx(0.0276));
  for (const auto& r : rows) {
    CHECK(r.fit.lo < r.fit.observed_peak);
    CHECK(r.fit.observed_peak < r.fit.hi);
    CHECK(r.contained == r.fit.contains(r.predicted));
  }
}

TEST_CASE("trim table layout") {
  CHECK(reference_trim_ratio(0.10, 4) == doctest::Approx(0.54));
  CHECK(reference_trim_ratio(0.25, 9) == doctest::Approx(1.0));
  CHECK(reference_trim_ratio(0.01, 7) == doctest::Approx(0.07));
  CHECK(reference_trim_ratio(0.50, 2) == doctest::Approx(0.47));
  CHECK_FALSE(reference_trim_ratio(0.01, 2));
  CHECK_FALSE(reference_trim_ratio(0.3, 4));

  const auto d = reference_trim_densities();
  const auto n = reference_trim_sizes();
  const auto published = table_trim(Setting::A, d, n, 10, Seed{1});
  CHECK(published.size() == 43);
  for (const auto& c : published) CHECK(c.reference);
  const auto all = table_trim(Setting::A, d, n, 10, Seed{1}, true);
  CHECK(all.size() == 50);
  CHECK(all.front().d2 == 0.01);
  CHECK(all.front().n == 2);
  const auto b = table_trim(Setting::B, d, n, 10, Seed{1}, true);
  for (const auto& c : b) CHECK_FALSE(c.reference);
}

TEST_CASE("default thread count honours the environment") {
  CHECK(default_threads() >= 1);
}

#include "fta/density.hpp"

#include <cmath>

#include <fmt/format.h>

#include "fta/errors.hpp"

namespace fta {

double peak_density(std::size_t n) {
  if (n <= 1) throw DomainError(fmt::format("peak density needs n > 1, got {}", n));
  const double nn = static_cast<double>(n) * static_cast<double>(n);
  // 4(1 − 0.5^{1/n²}) without cancellation.
  return -4.0 * std::expm1(std::log(0.5) / nn);
}

double pi2(double d2, std::size_t n) {
  if (!(d2 >= 0.0 && d2 <= 1.0)) throw DomainError(fmt::format("d2 must be in [0, 1], got {}", d2));
  if (n < 1) throw DomainError("pi2 needs n >= 1");
  const double nn = static_cast<double>(n) * static_cast<double>(n);
  return -std::expm1(nn * std::log1p(-d2 / 4.0));
}

std::vector<DensityPoint> density_grid(std::size_t n, std::size_t steps) {
  if (steps == 0) throw ConfigError("density grid needs at least one step");
  const double log_peak = std::log(peak_density(n));
  const double half = static_cast<double>(steps) / 2.0;
  std::vector<DensityPoint> grid;
  grid.reserve(steps + 1);
  for (std::size_t x = 0; x <= steps; ++x) {
    grid.push_back(DensityPoint{n, x, std::exp(static_cast<double>(x) * log_peak / half), 0.5});
  }
  return grid;
}

double round_half_up(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::copysign(std::floor(std::fabs(value) * scale + 0.5), value) / scale;
}

}  // namespace fta

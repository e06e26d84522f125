#pragma once

// Predicted hardest-instance density for random binary FTAs and the logarithmic density grid.

#include <cstddef>
#include <vector>

namespace fta {

/// D_n = 4(1 − 0.5^{1/n²}): the binary density at which each state lies in σ̄(Q₁, Q₂) with
/// probability ½ for uniform Q₁, Q₂. Throws DomainError for n <= 1.
double peak_density(std::size_t n);

/// Probability 1 − (1 − d2/4)^{n²} that a fixed state is in σ̄(Q₁, Q₂) for uniform random
/// argument subsets. Throws DomainError unless d2 ∈ [0, 1] and n >= 1.
double pi2(double d2, std::size_t n);

/// Probability that a fixed state is in ᾱ; equals the nullary density.
inline double pi0(double d0) { return d0; }

struct DensityPoint {
  std::size_t n = 0;
  std::size_t x = 0;
  double d2 = 0.0;
  double d0 = 0.5;
};

/// steps + 1 points with d2 = exp(x · ln D_n / (steps / 2)): 1.0 at x = 0, D_n at the
/// midpoint, D_n² at x = steps. Throws DomainError for n <= 1 and ConfigError for steps = 0.
std::vector<DensityPoint> density_grid(std::size_t n, std::size_t steps = 40);

/// Rounds half away from zero at `decimals` places (Table-style display).
double round_half_up(double value, int decimals);

}  // namespace fta

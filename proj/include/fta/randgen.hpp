#pragma once

// Random FTAs with independent Bernoulli transitions and final states, and the
// regenerate-until-trim loop.

#include <cstddef>
#include <cstdint>
#include <initializer_list>

#include "fta/core.hpp"

namespace fta {

/// Master seed of an experiment. Every random draw is a pure function of the seed and a key path.
struct Seed {
  std::uint64_t value = 0;

  friend bool operator==(Seed, Seed) = default;
};

/// Counter-based SplitMix64 stream: draw i of key k is mix(k + (i + 1)·γ). Bit-identical
/// across platforms, and streams with different keys are independent.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t key) : key_(key) {}

  /// Stream for the key path (seed, path...).
  static RandomStream derive(Seed seed, std::initializer_list<std::uint64_t> path);

  std::uint64_t next();
  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();
  /// Consumes exactly one draw, whatever p is.
  bool bernoulli(double p) { return uniform() < p; }
  std::uint64_t draws() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

struct GenConfig {
  GenConfig(RankedAlphabet alphabet, std::size_t n, double d2, double d0 = 0.5)
      : alphabet(std::move(alphabet)), n(n), d2(d2), d0(d0) {}

  RankedAlphabet alphabet;
  std::size_t n;
  double d2;
  double d0;
  double final_prob = 0.5;
  std::size_t max_attempts = 10000;

  /// Throws ConfigError for non-binary alphabets, n outside [1, 64], probabilities
  /// outside [0, 1], or max_attempts = 0.
  void validate() const;
  /// Platform-independent digest of every field that affects generation.
  std::uint64_t key() const;
};

/// One raw draw. States are labelled 1..n. Candidates are visited in a fixed order: finals
/// by q, then nullary by (symbol, q), then binary by (symbol, q1, q2, q), symbols in alphabet
/// order. Finals and nullary candidates take one draw each; binary candidates take one draw
/// each when d2 >= 0.25 and otherwise one draw per included transition (geometric gaps).
Fta generate(const GenConfig& config, RandomStream& stream);

struct TrimDraw {
  Fta fta;
  std::size_t attempts;
};

/// First trim FTA from independent attempts keyed by (seed, config, trial, attempt).
/// Throws ExhaustionError after config.max_attempts failures.
TrimDraw generate_trim(const GenConfig& config, Seed seed, std::size_t trial);

struct TrimRatio {
  std::size_t trim = 0;
  std::size_t trials = 0;
  double ratio = 0.0;
  /// Normal-approximation 95% half-width of the binomial proportion.
  double half_width = 0.0;
};

/// Fraction of `trials` raw draws that are trim. Throws ConfigError when trials = 0.
TrimRatio trim_ratio(const GenConfig& config, std::size_t trials, Seed seed);

}  // namespace fta

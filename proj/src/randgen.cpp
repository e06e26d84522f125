#include "fta/randgen.hpp"

#include <bit>
#include <cmath>

#include <fmt/format.h>


namespace fta {

namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

// Stream domains keep trim-loop attempts and trim-ratio draws apart.
constexpr std::uint64_t kTrimLoopDomain = 1;
constexpr std::uint64_t kRatioDomain = 2;

std::uint64_t splitmix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a(std::uint64_t h, std::string_view bytes) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

}  // namespace

RandomStream RandomStream::derive(Seed seed, std::initializer_list<std::uint64_t> path) {
  std::uint64_t key = splitmix(seed.value + kGamma);
  for (std::uint64_t p : path) key = splitmix(key ^ splitmix(p + kGamma));
  return RandomStream(key);
}

std::uint64_t RandomStream::next() {
  ++counter_;
  return splitmix(key_ + counter_ * kGamma);
}

double RandomStream::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

void GenConfig::validate() const {
  if (!alphabet.is_binary()) throw ConfigError("random generation needs a binary ranked alphabet (ranks 0 and 2)");
  if (n < 1 || n > StateSet::kCapacity) throw ConfigError(fmt::format("n must be in [1, 64], got {}", n));
  auto check = [](const char* name, double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError(fmt::format("{} must be in [0, 1], got {}", name, p));
  };
  check("d2", d2);
  check("d0", d0);
  check("final_prob", final_prob);
  if (max_attempts == 0) throw ConfigError("max_attempts must be positive");
}

std::uint64_t GenConfig::key() const {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (const auto& s : alphabet.symbols()) {
    h = fnv1a(h, s.name);
    h = fnv1a(h, fmt::format("/{};", s.rank));
  }
  h = splitmix(h ^ n);
  h = splitmix(h ^ std::bit_cast<std::uint64_t>(d2));
  h = splitmix(h ^ std::bit_cast<std::uint64_t>(d0));
  h = splitmix(h ^ std::bit_cast<std::uint64_t>(final_prob));
  return h;
}

namespace {

// Below this density the binary candidates are visited by geometric skipping (one draw per
// included transition) instead of one Bernoulli draw per candidate.
constexpr double kSkipThreshold = 0.25;

struct RawRule {
  std::uint32_t symbol;
  std::uint8_t left;
  std::uint8_t right;
  std::uint8_t target;
};

// One draw before it becomes an Fta; cheap enough to reject millions of times.
struct RawDraw {
  StateSet finals;
  std::vector<std::pair<std::uint32_t, std::uint8_t>> nullary;
  std::vector<RawRule> binary;
};

void draw_raw(const GenConfig& config, RandomStream& stream, RawDraw& out) {
  const std::size_t n = config.n;
  const auto& alphabet = config.alphabet;
  out.finals = StateSet{};
  out.nullary.clear();
  out.binary.clear();

  for (std::size_t q = 0; q < n; ++q) {
    if (stream.bernoulli(config.final_prob)) out.finals.insert(q);
  }
  for (std::size_t sym : alphabet.symbols_of_rank(0)) {
    for (std::size_t q = 0; q < n; ++q) {
      if (stream.bernoulli(config.d0)) out.nullary.emplace_back(static_cast<std::uint32_t>(sym), static_cast<std::uint8_t>(q));
    }
  }
  const std::vector<std::size_t> binary = alphabet.symbols_of_rank(2);
  const std::size_t per_symbol = n * n * n;
  const std::size_t candidates = binary.size() * per_symbol;
  auto push = [&](std::size_t c) {
    const std::size_t sym = binary[c / per_symbol];
    const std::size_t rest = c % per_symbol;
    out.binary.push_back(RawRule{static_cast<std::uint32_t>(sym), static_cast<std::uint8_t>(rest / (n * n)),
                                 static_cast<std::uint8_t>((rest / n) % n), static_cast<std::uint8_t>(rest % n)});
  };
  if (config.d2 <= 0.0) return;
  if (config.d2 >= kSkipThreshold) {
    for (std::size_t c = 0; c < candidates; ++c) {
      if (stream.bernoulli(config.d2)) push(c);
    }
    return;
  }
  // Gap before the next included candidate is Geometric(d2).
  const double log_miss = std::log1p(-config.d2);
  std::size_t c = 0;
  while (true) {
    const double gap = std::floor(std::log1p(-stream.uniform()) / log_miss);
    if (!(gap < static_cast<double>(candidates - c))) return;
    c += static_cast<std::size_t>(gap);
    push(c);
    if (++c >= candidates) return;
  }
}

bool raw_is_trim(const RawDraw& d, std::size_t n) {
  const StateSet all = StateSet::full(n);
  StateSet reach;
  for (const auto& [sym, q] : d.nullary) reach.insert(q);
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& r : d.binary) {
      if (!reach.contains(r.target) && reach.contains(r.left) && reach.contains(r.right)) {
        reach.insert(r.target);
        changed = true;
      }
    }
  }
  if (reach != all) return false;
  // Every state is reachable here, so the sibling condition of co-reachability holds trivially.
  StateSet co = d.finals;
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& r : d.binary) {
      if (!co.contains(r.target)) continue;
      if (!co.contains(r.left) || !co.contains(r.right)) {
        co.insert(r.left);
        co.insert(r.right);
        changed = true;
      }
    }
  }
  return co == all;
}

Fta to_fta(const GenConfig& config, const RawDraw& d) {
  std::vector<StateId> labels(config.n);
  for (std::size_t q = 0; q < config.n; ++q) labels[q] = static_cast<StateId>(q + 1);
  std::vector<Rule> rules;
  rules.reserve(d.nullary.size() + d.binary.size());
  for (const auto& [sym, q] : d.nullary) rules.push_back(Rule{sym, {}, q});
  for (const auto& r : d.binary) rules.push_back(Rule{r.symbol, {r.left, r.right}, r.target});
  return Fta(config.alphabet, std::move(labels), d.finals, std::move(rules));
}

}  // namespace

Fta generate(const GenConfig& config, RandomStream& stream) {
  config.validate();
  RawDraw raw;
  draw_raw(config, stream, raw);
  return to_fta(config, raw);
}

TrimDraw generate_trim(const GenConfig& config, Seed seed, std::size_t trial) {
  config.validate();
  const std::uint64_t key = config.key();
  RawDraw raw;
  for (std::size_t attempt = 0; attempt < config.max_attempts; ++attempt) {
    RandomStream stream = RandomStream::derive(seed, {kTrimLoopDomain, key, trial, attempt});
    draw_raw(config, stream, raw);
    if (raw_is_trim(raw, config.n)) return TrimDraw{to_fta(config, raw), attempt + 1};
  }
  throw ExhaustionError(config.n, config.d2, config.max_attempts);
}

TrimRatio trim_ratio(const GenConfig& config, std::size_t trials, Seed seed) {
  config.validate();
  if (trials == 0) throw ConfigError("trim_ratio needs at least one trial");
  const std::uint64_t key = config.key();
  TrimRatio out;
  out.trials = trials;
  RawDraw raw;
  for (std::size_t i = 0; i < trials; ++i) {
    RandomStream stream = RandomStream::derive(seed, {kRatioDomain, key, i});
    draw_raw(config, stream, raw);
    if (raw_is_trim(raw, config.n)) ++out.trim;
  }
  out.ratio = static_cast<double>(out.trim) / static_cast<double>(trials);
  out.half_width = 1.96 * std::sqrt(out.ratio * (1.0 - out.ratio) / static_cast<double>(trials));
  return out;
}

}  // namespace fta

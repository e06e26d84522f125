#include "fta/constructions.hpp"

#include <algorithm>
#include <unordered_map>

#include <fmt/format.h>

namespace fta {

// ---------------------------------------------------------------------------
// Dfta

Dfta::Dfta(RankedAlphabet alphabet) : alphabet_(std::move(alphabet)) {
  if (!alphabet_.is_binary()) throw InputError("deterministic automata need a binary ranked alphabet");
  nullary_.assign(alphabet_.size(), kNoState);
  rows_.resize(alphabet_.size());
}

std::size_t Dfta::final_count() const { return static_cast<std::size_t>(std::count(finals_.begin(), finals_.end(), true)); }

bool Dfta::is_complete() const {
  const std::size_t n = state_count();
  for (std::size_t s = 0; s < alphabet_.size(); ++s) {
    if (alphabet_[s].rank == 0) {
      if (nullary_[s] == kNoState) return false;
      continue;
    }
    for (const auto& row : rows_[s]) {
      if (row.size() < n || std::find(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(n), kNoState) !=
                                row.begin() + static_cast<std::ptrdiff_t>(n)) {
        return false;
      }
    }
  }
  return true;
}

DState Dfta::add_state(StateSet subset, bool final) {
  const auto id = static_cast<DState>(subsets_.size());
  subsets_.push_back(subset);
  finals_.push_back(final);
  for (std::size_t s = 0; s < alphabet_.size(); ++s) {
    if (alphabet_[s].rank == 2) rows_[s].emplace_back();
  }
  return id;
}

void Dfta::check_symbol(std::size_t symbol, std::size_t rank) const {
  if (symbol >= alphabet_.size() || alphabet_[symbol].rank != rank) {
    throw InputError(fmt::format("symbol index {} is not of rank {}", symbol, rank));
  }
}

void Dfta::set_nullary(std::size_t symbol, DState target) {
  check_symbol(symbol, 0);
  nullary_[symbol] = target;
}

void Dfta::set_binary(std::size_t symbol, DState left, DState right, DState target) {
  check_symbol(symbol, 2);
  auto& row = rows_[symbol].at(left);
  if (row.size() <= right) row.resize(right + 1, kNoState);
  row[right] = target;
}

// ---------------------------------------------------------------------------
// Subset construction

namespace {

// Subset → state index. Direct addressing for small state counts, hashing beyond.
class SubsetIndex {
 public:
  explicit SubsetIndex(std::size_t n) {
    if (n <= kDirectLimit) direct_.assign(std::size_t{1} << n, kNoState);
  }

  DState find(StateSet s) const {
    if (!direct_.empty()) return direct_[s.bits()];
    auto it = hashed_.find(s);
    return it == hashed_.end() ? kNoState : it->second;
  }

  void insert(StateSet s, DState id) {
    if (!direct_.empty()) {
      direct_[s.bits()] = id;
    } else {
      hashed_.emplace(s, id);
    }
  }

 private:
  static constexpr std::size_t kDirectLimit = 20;
  std::vector<DState> direct_;
  std::unordered_map<StateSet, DState> hashed_;
};

}  // namespace

Dfta determinize(const Fta& fta, std::size_t max_states) {
  Dfta out(fta.alphabet());
  const auto& alphabet = fta.alphabet();
  const std::size_t n = fta.state_count();
  const std::vector<std::size_t> binary = alphabet.symbols_of_rank(2);
  const std::size_t nb = binary.size();

  SubsetIndex index(n);
  auto lookup = [&](StateSet s) {
    DState id = index.find(s);
    if (id != kNoState) return id;
    if (max_states != 0 && out.state_count() >= max_states) {
      throw BudgetError(fmt::format("subset construction exceeds {} states", max_states));
    }
    id = out.add_state(s, s.intersects(fta.finals()));
    index.insert(s, id);
    if (s.empty()) out.set_sink(id);
    return id;
  };

  for (std::size_t a : alphabet.symbols_of_rank(0)) out.set_nullary(a, lookup(fta.nullary_targets(a)));

  // reduced[(k * nb + b) * n + q1] = union of targets of b(q1, q2) over q2 in subset k, so that
  // σ̄(Q_i, Q_k) is the union of reduced entries of k over q1 in Q_i.
  std::vector<StateSet> reduced;
  auto image = [&](std::size_t b, StateSet left, DState right) {
    const StateSet* r = &reduced[(right * nb + b) * n];
    StateSet acc;
    left.for_each([&](std::size_t q1) { acc |= r[q1]; });
    return acc;
  };

  for (DState k = 0; k < out.state_count(); ++k) {
    const StateSet qk = out.subset(k);
    reduced.resize((static_cast<std::size_t>(k) + 1) * nb * n);
    for (std::size_t b = 0; b < nb; ++b) {
      StateSet* r = &reduced[(k * nb + b) * n];
      for (std::size_t q1 = 0; q1 < n; ++q1) {
        StateSet acc;
        qk.for_each([&](std::size_t q2) { acc |= fta.binary_targets(binary[b], q1, q2); });
        r[q1] = acc;
      }
    }
    // Row k gains entries 0..k, and every earlier row j gains entry k.
    for (std::size_t b = 0; b < nb; ++b) {
      const std::size_t sym = binary[b];
      for (DState j = 0; j <= k; ++j) {
        const StateSet qj = out.subset(j);
        const DState kj = lookup(image(b, qk, j));
        out.rows_[sym][k].push_back(kj);
        if (j != k) {
          const DState jk = lookup(image(b, qj, k));
          out.rows_[sym][j].push_back(jk);
        }
      }
    }
  }
  return out;
}

std::size_t det_size(const Dfta& dfta) { return dfta.state_count() - (dfta.sink() ? 1 : 0); }

// ---------------------------------------------------------------------------
// Reachability and trimness

namespace {

bool all_in(const std::vector<std::uint32_t>& args, StateSet set) {
  return std::all_of(args.begin(), args.end(), [&](std::uint32_t a) { return set.contains(a); });
}

}  // namespace

StateSet reachable(const Fta& fta) {
  StateSet seen;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& r : fta.rules()) {
      if (!seen.contains(r.target) && all_in(r.args, seen)) {
        seen.insert(r.target);
        changed = true;
      }
    }
  }
  return seen;
}

StateSet coreachable(const Fta& fta, std::optional<StateSet> from) {
  const StateSet reach = reachable(fta);
  StateSet co = from.value_or(fta.finals());
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& r : fta.rules()) {
      if (!co.contains(r.target)) continue;
      for (std::size_t i = 0; i < r.args.size(); ++i) {
        if (co.contains(r.args[i])) continue;
        bool siblings = true;
        for (std::size_t j = 0; j < r.args.size() && siblings; ++j) {
          if (j != i) siblings = reach.contains(r.args[j]);
        }
        if (siblings) {
          co.insert(r.args[i]);
          changed = true;
        }
      }
    }
  }
  return co;
}

bool is_trim(const Fta& fta) {
  const StateSet all = fta.all_states();
  return reachable(fta) == all && coreachable(fta) == all;
}

Fta trim(const Fta& fta) {
  const StateSet useful = reachable(fta) & coreachable(fta);
  std::vector<std::uint32_t> remap(fta.state_count(), 0);
  std::vector<StateId> labels;
  useful.for_each([&](std::size_t q) {
    remap[q] = static_cast<std::uint32_t>(labels.size());
    labels.push_back(fta.label(q));
  });
  StateSet finals;
  (fta.finals() & useful).for_each([&](std::size_t q) { finals.insert(remap[q]); });
  std::vector<Rule> rules;
  for (const auto& r : fta.rules()) {
    if (!useful.contains(r.target) || !all_in(r.args, useful)) continue;
    Rule t{r.symbol, {}, remap[r.target]};
    for (auto a : r.args) t.args.push_back(remap[a]);
    rules.push_back(std::move(t));
  }
  return Fta(fta.alphabet(), std::move(labels), finals, std::move(rules));
}

// ---------------------------------------------------------------------------
// Minimization

namespace {

// Copy of `d` with a fresh absorbing sink receiving every missing entry.
Dfta complete(const Dfta& d) {
  Dfta c(d.alphabet());
  for (DState s = 0; s < d.state_count(); ++s) c.add_state(d.subset(s), d.is_final(s));
  const DState sink = d.sink() ? *d.sink() : c.add_state(StateSet{}, false);
  c.set_sink(sink);
  const auto& alphabet = d.alphabet();
  const auto n = static_cast<DState>(c.state_count());
  for (std::size_t sym = 0; sym < alphabet.size(); ++sym) {
    if (alphabet[sym].rank == 0) {
      const DState t = d.nullary(sym);
      c.set_nullary(sym, t == kNoState ? sink : t);
      continue;
    }
    for (DState l = 0; l < n; ++l) {
      for (DState r = 0; r < n; ++r) {
        DState t = (l < d.state_count() && r < d.state_count()) ? d.binary(sym, l, r) : kNoState;
        c.set_binary(sym, l, r, t == kNoState ? sink : t);
      }
    }
  }
  return c;
}

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
  return h;
}

// Refines `cls` until stable: two states stay together iff, for every binary symbol and every
// sibling state in either argument position, their successors share a class.
std::size_t refine(const Dfta& d, std::vector<DState>& cls) {
  const std::size_t n = d.state_count();
  const std::vector<std::size_t> binary = d.alphabet().symbols_of_rank(2);

  auto signature_equal = [&](DState s, DState t) {
    for (std::size_t sym : binary) {
      for (DState u = 0; u < n; ++u) {
        if (cls[d.binary(sym, s, u)] != cls[d.binary(sym, t, u)]) return false;
        if (cls[d.binary(sym, u, s)] != cls[d.binary(sym, u, t)]) return false;
      }
    }
    return true;
  };

  std::size_t blocks = 0;
  {
    std::vector<DState> first(2, kNoState);
    for (DState s = 0; s < n; ++s) {
      const std::size_t key = d.is_final(s) ? 1 : 0;
      if (first[key] == kNoState) first[key] = static_cast<DState>(blocks++);
      cls[s] = first[key];
    }
  }

  std::vector<std::uint64_t> hash(n);
  std::vector<DState> next(n);
  while (true) {
    for (DState s = 0; s < n; ++s) {
      std::uint64_t h = cls[s];
      for (std::size_t sym : binary) {
        const auto row = d.row(sym, s);
        for (DState u = 0; u < n; ++u) h = mix(h, cls[row[u]]);
        for (DState u = 0; u < n; ++u) h = mix(h, cls[d.binary(sym, u, s)]);
      }
      hash[s] = h;
    }
    // (old class, hash) → candidate new blocks with their representative.
    std::unordered_map<std::uint64_t, std::vector<std::pair<DState, DState>>> buckets;
    std::size_t next_blocks = 0;
    for (DState s = 0; s < n; ++s) {
      auto& bucket = buckets[mix(hash[s], cls[s])];
      DState assigned = kNoState;
      for (const auto& [block, rep] : bucket) {
        if (cls[rep] == cls[s] && signature_equal(rep, s)) {
          assigned = block;
          break;
        }
      }
      if (assigned == kNoState) {
        assigned = static_cast<DState>(next_blocks++);
        bucket.emplace_back(assigned, s);
      }
      next[s] = assigned;
    }
    cls.swap(next);
    if (next_blocks == blocks) return blocks;
    blocks = next_blocks;
  }
}

}  // namespace

CanonicalFta minimize(const Dfta& input) {
  const Dfta d = input.is_complete() ? input : complete(input);
  const std::size_t n = d.state_count();
  const std::vector<std::size_t> binary = d.alphabet().symbols_of_rank(2);
  const std::vector<std::size_t> nullary = d.alphabet().symbols_of_rank(0);

  std::vector<DState> cls(n, 0);
  const std::size_t blocks = refine(d, cls);

  std::vector<DState> rep(blocks, kNoState);
  for (DState s = 0; s < n; ++s) {
    if (rep[cls[s]] == kNoState) rep[cls[s]] = s;
  }

  // Live blocks can reach a final block; the refinement leaves at most one dead block.
  std::vector<bool> live(blocks, false);
  for (std::size_t b = 0; b < blocks; ++b) live[b] = d.is_final(rep[b]);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t b = 0; b < blocks; ++b) {
      if (live[b]) continue;
      for (std::size_t sym : binary) {
        for (std::size_t u = 0; u < blocks && !live[b]; ++u) {
          live[b] = live[cls[d.binary(sym, rep[b], rep[u])]] || live[cls[d.binary(sym, rep[u], rep[b])]];
        }
      }
      changed |= live[b];
    }
  }
  DState dead = kNoState;
  for (std::size_t b = 0; b < blocks; ++b) {
    if (!live[b]) dead = static_cast<DState>(b);
  }
  const bool dead_is_padding = dead != kNoState && input.state_count() < n && !input.sink() &&
                               std::count(cls.begin(), cls.begin() + static_cast<std::ptrdiff_t>(input.state_count()),
                                          dead) == 0;

  CanonicalFta out{Dfta(d.alphabet()), {}};
  std::vector<DState> block_id(blocks, kNoState);
  for (std::size_t b = 0; b < blocks; ++b) {
    if (dead_is_padding && static_cast<DState>(b) == dead) continue;
    block_id[b] = out.automaton.add_state(d.subset(rep[b]), d.is_final(rep[b]));
    if (static_cast<DState>(b) == dead) out.automaton.set_sink(block_id[b]);
  }
  for (std::size_t sym : nullary) out.automaton.set_nullary(sym, block_id[cls[d.nullary(sym)]]);
  for (std::size_t sym : binary) {
    for (std::size_t l = 0; l < blocks; ++l) {
      if (block_id[l] == kNoState) continue;
      for (std::size_t r = 0; r < blocks; ++r) {
        if (block_id[r] == kNoState) continue;
        const DState t = block_id[cls[d.binary(sym, rep[l], rep[r])]];
        if (t != kNoState) out.automaton.set_binary(sym, block_id[l], block_id[r], t);
      }
    }
  }
  out.block_of.assign(input.state_count(), kNoState);
  for (DState s = 0; s < input.state_count(); ++s) out.block_of[s] = block_id[cls[s]];
  return out;
}

std::size_t canonical_size(const Fta& fta) { return minimize(determinize(fta)).size(); }

// ---------------------------------------------------------------------------
// Isomorphism

bool isomorphic(const Dfta& a, const Dfta& b) {
  if (!(a.alphabet() == b.alphabet())) return false;
  if (det_size(a) != det_size(b)) return false;
  auto dead_a = [&](DState s) { return s == kNoState || (a.sink() && s == *a.sink()); };
  auto dead_b = [&](DState s) { return s == kNoState || (b.sink() && s == *b.sink()); };

  std::vector<DState> fwd(a.state_count(), kNoState);
  std::vector<DState> bwd(b.state_count(), kNoState);
  std::vector<DState> order;
  auto pair = [&](DState x, DState y) {
    if (dead_a(x) || dead_b(y)) return dead_a(x) && dead_b(y);
    if (fwd[x] == kNoState && bwd[y] == kNoState) {
      if (a.is_final(x) != b.is_final(y)) return false;
      fwd[x] = y;
      bwd[y] = x;
      order.push_back(x);
      return true;
    }
    return fwd[x] == y && bwd[y] == x;
  };

  const auto& alphabet = a.alphabet();
  for (std::size_t sym : alphabet.symbols_of_rank(0)) {
    if (!pair(a.nullary(sym), b.nullary(sym))) return false;
  }
  const std::vector<std::size_t> binary = alphabet.symbols_of_rank(2);
  for (std::size_t k = 0; k < order.size(); ++k) {
    for (std::size_t j = 0; j <= k; ++j) {
      const DState xk = order[k], xj = order[j];
      for (std::size_t sym : binary) {
        if (!pair(a.binary(sym, xk, xj), b.binary(sym, fwd[xk], fwd[xj]))) return false;
        if (!pair(a.binary(sym, xj, xk), b.binary(sym, fwd[xj], fwd[xk]))) return false;
      }
    }
  }
  return order.size() == det_size(a);
}

bool isomorphic(const CanonicalFta& a, const CanonicalFta& b) { return isomorphic(a.automaton, b.automaton); }

// ---------------------------------------------------------------------------
// Deterministic evaluation

DState evaluate(const Dfta& dfta, const Tree& tree) {
  if (tree.is_state()) throw InputError("deterministic evaluation needs a tree without state leaves");
  const std::size_t sym = dfta.alphabet().index_of(tree.label());
  const std::size_t rank = dfta.alphabet()[sym].rank;
  if (tree.children().size() != rank) {
    throw InputError(fmt::format("symbol '{}' has rank {} but the tree gives {} children", tree.label(), rank,
                                 tree.children().size()));
  }
  if (rank == 0) return dfta.nullary(sym);
  const DState l = evaluate(dfta, tree.children()[0]);
  const DState r = evaluate(dfta, tree.children()[1]);
  if (l == kNoState || r == kNoState) return kNoState;
  return dfta.binary(sym, l, r);
}

bool accepts(const Dfta& dfta, const Tree& tree) {
  const DState s = evaluate(dfta, tree);
  return s != kNoState && dfta.is_final(s);
}

std::set<Tree> language_fingerprint(const Dfta& dfta, std::size_t max_height, std::size_t height_limit) {
  std::set<Tree> out;
  for (auto& t : enumerate_trees(dfta.alphabet(), max_height, height_limit)) {
    if (accepts(dfta, t)) out.insert(std::move(t));
  }
  return out;
}

bool is_accessible(const Dfta& dfta) {
  const std::size_t n = dfta.state_count();
  std::vector<bool> seen(n, false);
  std::vector<DState> order;
  auto visit = [&](DState s) {
    if (s != kNoState && !seen[s]) {
      seen[s] = true;
      order.push_back(s);
    }
  };
  for (std::size_t sym : dfta.alphabet().symbols_of_rank(0)) visit(dfta.nullary(sym));
  const std::vector<std::size_t> binary = dfta.alphabet().symbols_of_rank(2);
  for (std::size_t k = 0; k < order.size(); ++k) {
    for (std::size_t j = 0; j <= k; ++j) {
      for (std::size_t sym : binary) {
        visit(dfta.binary(sym, order[k], order[j]));
        visit(dfta.binary(sym, order[j], order[k]));
      }
    }
  }
  return order.size() == n;
}

}  // namespace fta

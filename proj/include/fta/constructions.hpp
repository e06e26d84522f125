#pragma once

// Determinization, trimming, minimization and isomorphism of finite tree automata.
//
// Deterministic automata are restricted to binary alphabets (ranks 0 and 2): their
// binary transition tables are stored densely, one row per left argument.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "fta/core.hpp"

namespace fta {

using DState = std::uint32_t;
inline constexpr DState kNoState = std::numeric_limits<DState>::max();

/// Deterministic bottom-up FTA over a binary alphabet. Each state carries the subset of
/// source-FTA states it stands for. Missing table entries read as kNoState.
class Dfta {
 public:
  /// Throws InputError unless the alphabet is binary.
  explicit Dfta(RankedAlphabet alphabet);

  const RankedAlphabet& alphabet() const { return alphabet_; }
  std::size_t state_count() const { return subsets_.size(); }
  StateSet subset(DState s) const { return subsets_[s]; }
  bool is_final(DState s) const { return finals_[s]; }
  std::size_t final_count() const;
  /// Explicit dead state (the empty subset after determinization), if one exists.
  std::optional<DState> sink() const { return sink_; }

  DState nullary(std::size_t symbol) const { return nullary_[symbol]; }
  DState binary(std::size_t symbol, DState left, DState right) const {
    const auto& row = rows_[symbol][left];
    return right < row.size() ? row[right] : kNoState;
  }
  /// Successors of `left` as left argument, indexed by right argument; may be shorter than state_count().
  std::span<const DState> row(std::size_t symbol, DState left) const { return rows_[symbol][left]; }

  /// True iff every nullary and binary entry over all state pairs is defined.
  bool is_complete() const;

  DState add_state(StateSet subset, bool final);
  void set_sink(DState s) { sink_ = s; }
  void set_nullary(std::size_t symbol, DState target);
  void set_binary(std::size_t symbol, DState left, DState right, DState target);

 private:
  friend Dfta determinize(const Fta&, std::size_t);

  void check_symbol(std::size_t symbol, std::size_t rank) const;

  RankedAlphabet alphabet_;
  std::vector<StateSet> subsets_;
  std::vector<bool> finals_;
  std::optional<DState> sink_;
  std::vector<DState> nullary_;
  // rows_[symbol][left][right]; empty outer vector for nullary symbols.
  std::vector<std::vector<std::vector<DState>>> rows_;
};

/// Minimal deterministic FTA. `block_of` maps each source Dfta state to its block
/// (kNoState for none); each block's subset is that of its first member.
struct CanonicalFta {
  Dfta automaton;
  std::vector<DState> block_of;

  /// Number of states excluding the dead block.
  std::size_t size() const { return automaton.state_count() - (automaton.sink() ? 1 : 0); }
};

/// Accessible subset construction. The empty subset becomes an explicit sink only when
/// some transition produces it. `max_states` = 0 means unbounded; otherwise exceeding it
/// throws BudgetError. Throws InputError for non-binary alphabets.
Dfta determinize(const Fta& fta, std::size_t max_states = 0);

/// Accessible states excluding the sink.
std::size_t det_size(const Dfta& dfta);

/// States q with q ∈ P(t) for some t ∈ T_Σ.
StateSet reachable(const Fta& fta);

/// Least fixpoint seeded by `from` (defaults to the finals): q is added when some transition
/// σ(…, q, …) → p has p co-reachable and every other argument reachable.
StateSet coreachable(const Fta& fta, std::optional<StateSet> from = std::nullopt);

bool is_trim(const Fta& fta);

/// Restriction to useful (reachable and co-reachable) states; preserves the language.
Fta trim(const Fta& fta);

/// Moore partition refinement over the completed automaton, then quotient.
CanonicalFta minimize(const Dfta& dfta);

/// Size of the canonical FTA of `fta`, excluding the sink.
std::size_t canonical_size(const Fta& fta);

/// Bijection test by synchronized traversal from the nullary entries.
bool isomorphic(const CanonicalFta& a, const CanonicalFta& b);
bool isomorphic(const Dfta& a, const Dfta& b);

/// State reached on `tree`, or kNoState when a missing entry is hit.
DState evaluate(const Dfta& dfta, const Tree& tree);
bool accepts(const Dfta& dfta, const Tree& tree);
std::set<Tree> language_fingerprint(const Dfta& dfta, std::size_t max_height,
                                    std::size_t height_limit = kDefaultHeightLimit);

/// True iff every state is reached from the nullary entries.
bool is_accessible(const Dfta& dfta);

}  // namespace fta

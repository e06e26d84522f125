#pragma once

// Ranked alphabets, trees, and bottom-up finite tree automata (FTAs).

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fta/errors.hpp"
#include "fta/state_set.hpp"

namespace fta {

/// External state label. Generated automata use 1..n; hand-written ones may use any labels.
using StateId = std::uint32_t;

struct Symbol {
  std::string name;
  std::size_t rank = 0;

  friend bool operator==(const Symbol&, const Symbol&) = default;
};

/// Symbols with ranks, kept sorted by name so that every derived order is canonical.
class RankedAlphabet {
 public:
  /// Throws InputError on duplicate or empty names, or when no symbol has rank 0.
  explicit RankedAlphabet(std::vector<Symbol> symbols);

  std::size_t size() const { return symbols_.size(); }
  const Symbol& operator[](std::size_t index) const { return symbols_[index]; }
  std::span<const Symbol> symbols() const { return symbols_; }

  std::optional<std::size_t> find(std::string_view name) const;
  /// Throws InputError for unknown names.
  std::size_t index_of(std::string_view name) const;

  std::size_t max_rank() const;
  /// True iff every rank is 0 or 2.
  bool is_binary() const;
  std::vector<std::size_t> symbols_of_rank(std::size_t rank) const;

  friend bool operator==(const RankedAlphabet&, const RankedAlphabet&) = default;

 private:
  std::vector<Symbol> symbols_;
};

/// Immutable tree over a ranked alphabet whose leaves may also be states (an element of T_Σ(Q)).
/// Copies share structure.
class Tree {
 public:
  static Tree node(std::string symbol, std::vector<Tree> children = {});
  static Tree state(StateId q);

  bool is_state() const;
  /// Only valid when is_state().
  StateId state_id() const;
  /// Empty for state leaves.
  const std::string& label() const;
  std::span<const Tree> children() const;

  /// Height of a leaf is 0.
  std::size_t height() const;
  std::size_t node_count() const;
  bool has_state_leaves() const;

  /// State leaves sort before symbol nodes; symbol nodes compare by name, then children.
  friend std::strong_ordering operator<=>(const Tree& a, const Tree& b);
  friend bool operator==(const Tree& a, const Tree& b) { return (a <=> b) == 0; }

 private:
  struct Node;
  explicit Tree(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

/// Term syntax: `sigma(alpha,alpha)`; state leaves print as `[3]`.
std::string to_string(const Tree& tree);

/// Transition with external labels, `symbol(args...) -> target`.
struct Transition {
  std::string symbol;
  std::vector<StateId> args;
  StateId target = 0;

  friend auto operator<=>(const Transition&, const Transition&) = default;
};

/// Transition with dense indices: symbol index into the alphabet, state indices into the state list.
struct Rule {
  std::uint32_t symbol = 0;
  std::vector<std::uint32_t> args;
  std::uint32_t target = 0;

  friend auto operator<=>(const Rule&, const Rule&) = default;
};

/// A finite tree automaton (Q, Σ, F, P). Immutable; at most 64 states.
class Fta {
 public:
  /// Validates every invariant and throws InputError on violation: unknown symbols or
  /// states, arity mismatches, duplicate transitions, duplicate state labels.
  Fta(RankedAlphabet alphabet, std::vector<StateId> states, const std::vector<StateId>& finals,
      const std::vector<Transition>& transitions);

  /// Index-level constructor; `labels[i]` names state i. Rules are validated and sorted.
  Fta(RankedAlphabet alphabet, std::vector<StateId> labels, StateSet finals, std::vector<Rule> rules);

  const RankedAlphabet& alphabet() const { return alphabet_; }
  std::size_t state_count() const { return labels_.size(); }
  StateSet all_states() const { return StateSet::full(labels_.size()); }
  std::span<const StateId> labels() const { return labels_; }
  StateId label(std::size_t index) const { return labels_[index]; }
  std::optional<std::size_t> find_state(StateId label) const;
  /// Throws InputError for unknown labels.
  std::size_t index_of(StateId label) const;

  StateSet finals() const { return finals_; }
  std::span<const Rule> rules() const { return rules_; }
  std::size_t transition_count() const { return rules_.size(); }
  std::vector<Transition> transitions() const;

  /// Union of targets over nullary transitions of `symbol`.
  StateSet nullary_targets(std::size_t symbol) const { return nullary_[symbol]; }
  /// Targets of `symbol(q1, q2)`; `symbol` must be binary.
  StateSet binary_targets(std::size_t symbol, std::size_t q1, std::size_t q2) const {
    return binary_[symbol][q1 * labels_.size() + q2];
  }

  /// Labels of the members of `set`, ascending by index.
  std::vector<StateId> labels_of(StateSet set) const;
  StateSet set_of(std::span<const StateId> labels) const;

  friend bool operator==(const Fta& a, const Fta& b);

 private:
  void index_rules();

  RankedAlphabet alphabet_;
  std::vector<StateId> labels_;
  StateSet finals_;
  std::vector<Rule> rules_;
  std::vector<StateSet> nullary_;
  std::vector<std::vector<StateSet>> binary_;
  std::vector<std::vector<std::size_t>> rules_by_symbol_;
};

/// σ̄(Q₁…Q_k): states q with some σ(q₁…q_k) → q, qᵢ ∈ Qᵢ. Throws InputError on arity mismatch.
StateSet sigma_bar(const Fta& fta, std::size_t symbol, std::span<const StateSet> args);
StateSet sigma_bar(const Fta& fta, std::string_view symbol, std::span<const StateSet> args);

/// Bottom-up evaluation P(t) for t ∈ T_Σ(Q).
StateSet evaluate(const Fta& fta, const Tree& tree);

/// Membership in L(M). Throws InputError when the tree has state leaves.
bool accepts(const Fta& fta, const Tree& tree);

/// True iff no two transitions share a left-hand side.
bool is_deterministic(const Fta& fta);

inline constexpr std::size_t kDefaultHeightLimit = 5;
inline constexpr std::size_t kDefaultTreeLimit = 2'000'000;

/// All trees of T_Σ with height <= max_height, sorted and duplicate-free.
/// Throws ConfigError when max_height exceeds `height_limit` or the count exceeds `tree_limit`.
std::vector<Tree> enumerate_trees(const RankedAlphabet& alphabet, std::size_t max_height,
                                  std::size_t height_limit = kDefaultHeightLimit,
                                  std::size_t tree_limit = kDefaultTreeLimit);

/// Accepted trees of height <= max_height.
std::set<Tree> language_fingerprint(const Fta& fta, std::size_t max_height,
                                    std::size_t height_limit = kDefaultHeightLimit);

}  // namespace fta

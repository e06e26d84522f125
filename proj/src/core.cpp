#include "fta/core.hpp"

#include <algorithm>
#include <map>

#include <fmt/format.h>

namespace fta {

ExhaustionError::ExhaustionError(std::size_t n, double d2, std::size_t attempts)
    : std::runtime_error(fmt::format("no trim FTA after {} attempts (n={}, d2={})", attempts, n, d2)),
      n_(n),
      d2_(d2),
      attempts_(attempts) {}

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error(fmt::format("{}:{}: {}", line, column, message)), line_(line), column_(column) {}

// ---------------------------------------------------------------------------
// RankedAlphabet

RankedAlphabet::RankedAlphabet(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {
  std::sort(symbols_.begin(), symbols_.end(),
            [](const Symbol& a, const Symbol& b) { return a.name < b.name; });
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (symbols_[i].name.empty()) throw InputError("symbol names must be nonempty");
    if (i > 0 && symbols_[i].name == symbols_[i - 1].name) {
      throw InputError(fmt::format("duplicate symbol '{}'", symbols_[i].name));
    }
  }
  if (std::none_of(symbols_.begin(), symbols_.end(), [](const Symbol& s) { return s.rank == 0; })) {
    throw InputError("ranked alphabet needs at least one nullary symbol");
  }
}

std::optional<std::size_t> RankedAlphabet::find(std::string_view name) const {
  auto it = std::lower_bound(symbols_.begin(), symbols_.end(), name,
                             [](const Symbol& s, std::string_view n) { return s.name < n; });
  if (it == symbols_.end() || it->name != name) return std::nullopt;
  return static_cast<std::size_t>(it - symbols_.begin());
}

std::size_t RankedAlphabet::index_of(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw InputError(fmt::format("unknown symbol '{}'", name));
}

std::size_t RankedAlphabet::max_rank() const {
  std::size_t r = 0;
  for (const auto& s : symbols_) r = std::max(r, s.rank);
  return r;
}

bool RankedAlphabet::is_binary() const {
  return std::all_of(symbols_.begin(), symbols_.end(),
                     [](const Symbol& s) { return s.rank == 0 || s.rank == 2; });
}

std::vector<std::size_t> RankedAlphabet::symbols_of_rank(std::size_t rank) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (symbols_[i].rank == rank) out.push_back(i);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Tree

struct Tree::Node {
  bool is_state = false;
  StateId state = 0;
  std::string label;
  std::vector<Tree> children;
  std::size_t height = 0;
};

Tree Tree::node(std::string symbol, std::vector<Tree> children) {
  auto n = std::make_shared<Node>();
  n->label = std::move(symbol);
  for (const auto& c : children) n->height = std::max(n->height, c.height() + 1);
  n->children = std::move(children);
  return Tree(std::move(n));
}

Tree Tree::state(StateId q) {
  auto n = std::make_shared<Node>();
  n->is_state = true;
  n->state = q;
  return Tree(std::move(n));
}

bool Tree::is_state() const { return node_->is_state; }
StateId Tree::state_id() const { return node_->state; }
const std::string& Tree::label() const { return node_->label; }
std::span<const Tree> Tree::children() const { return node_->children; }
std::size_t Tree::height() const { return node_->height; }

std::size_t Tree::node_count() const {
  std::size_t count = 1;
  for (const auto& c : children()) count += c.node_count();
  return count;
}

bool Tree::has_state_leaves() const {
  if (is_state()) return true;
  return std::any_of(children().begin(), children().end(),
                     [](const Tree& c) { return c.has_state_leaves(); });
}

std::strong_ordering operator<=>(const Tree& a, const Tree& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (a.is_state() != b.is_state()) {
    return a.is_state() ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  if (a.is_state()) return a.state_id() <=> b.state_id();
  if (auto c = a.label() <=> b.label(); c != 0) return c;
  return std::lexicographical_compare_three_way(a.children().begin(), a.children().end(),
                                                b.children().begin(), b.children().end());
}

std::string to_string(const Tree& tree) {
  if (tree.is_state()) return fmt::format("[{}]", tree.state_id());
  std::string out = tree.label();
  if (tree.children().empty()) return out;
  out += '(';
  bool first = true;
  for (const auto& c : tree.children()) {
    if (!first) out += ',';
    first = false;
    out += to_string(c);
  }
  out += ')';
  return out;
}

// ---------------------------------------------------------------------------
// Fta

namespace {

std::vector<StateId> checked_labels(std::vector<StateId> labels) {
  if (labels.size() > StateSet::kCapacity) {
    throw InputError(fmt::format("at most {} states are supported, got {}", StateSet::kCapacity, labels.size()));
  }
  std::sort(labels.begin(), labels.end());
  if (std::adjacent_find(labels.begin(), labels.end()) != labels.end()) {
    throw InputError("duplicate state label");
  }
  return labels;
}

}  // namespace

Fta::Fta(RankedAlphabet alphabet, std::vector<StateId> states, const std::vector<StateId>& finals,
         const std::vector<Transition>& transitions)
    : alphabet_(std::move(alphabet)), labels_(checked_labels(std::move(states))) {
  for (StateId f : finals) finals_.insert(index_of(f));
  rules_.reserve(transitions.size());
  for (const auto& t : transitions) {
    Rule r;
    r.symbol = static_cast<std::uint32_t>(alphabet_.index_of(t.symbol));
    for (StateId a : t.args) r.args.push_back(static_cast<std::uint32_t>(index_of(a)));
    r.target = static_cast<std::uint32_t>(index_of(t.target));
    rules_.push_back(std::move(r));
  }
  index_rules();
}

Fta::Fta(RankedAlphabet alphabet, std::vector<StateId> labels, StateSet finals, std::vector<Rule> rules)
    : alphabet_(std::move(alphabet)), labels_(std::move(labels)), finals_(finals), rules_(std::move(rules)) {
  if (labels_.size() > StateSet::kCapacity) throw InputError("too many states");
  std::vector<StateId> sorted = labels_;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != labels_) throw InputError("state labels must be strictly increasing");
  if (std::adjacent_find(labels_.begin(), labels_.end()) != labels_.end()) {
    throw InputError("duplicate state label");
  }
  if (!finals_.is_subset_of(all_states())) throw InputError("final state out of range");
  for (const auto& r : rules_) {
    if (r.symbol >= alphabet_.size()) throw InputError("rule symbol out of range");
    if (r.target >= labels_.size()) throw InputError("rule target out of range");
    for (auto a : r.args) {
      if (a >= labels_.size()) throw InputError("rule argument out of range");
    }
  }
  index_rules();
}

void Fta::index_rules() {
  const std::size_t n = labels_.size();
  for (const auto& r : rules_) {
    const auto& sym = alphabet_[r.symbol];
    if (r.args.size() != sym.rank) {
      throw InputError(fmt::format("symbol '{}' has rank {} but a transition gives {} arguments", sym.name,
                                   sym.rank, r.args.size()));
    }
  }
  std::sort(rules_.begin(), rules_.end());
  if (auto dup = std::adjacent_find(rules_.begin(), rules_.end()); dup != rules_.end()) {
    throw InputError(fmt::format("duplicate transition for symbol '{}'", alphabet_[dup->symbol].name));
  }

  nullary_.assign(alphabet_.size(), StateSet{});
  binary_.assign(alphabet_.size(), {});
  rules_by_symbol_.assign(alphabet_.size(), {});
  for (std::size_t s = 0; s < alphabet_.size(); ++s) {
    if (alphabet_[s].rank == 2) binary_[s].assign(n * n, StateSet{});
  }
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    const auto& r = rules_[i];
    rules_by_symbol_[r.symbol].push_back(i);
    switch (r.args.size()) {
      case 0:
        nullary_[r.symbol].insert(r.target);
        break;
      case 2:
        binary_[r.symbol][r.args[0] * n + r.args[1]].insert(r.target);
        break;
      default:
        break;
    }
  }
}

std::optional<std::size_t> Fta::find_state(StateId label) const {
  auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
  if (it == labels_.end() || *it != label) return std::nullopt;
  return static_cast<std::size_t>(it - labels_.begin());
}

std::size_t Fta::index_of(StateId label) const {
  if (auto i = find_state(label)) return *i;
  throw InputError(fmt::format("unknown state {}", label));
}

std::vector<Transition> Fta::transitions() const {
  std::vector<Transition> out;
  out.reserve(rules_.size());
  for (const auto& r : rules_) {
    Transition t;
    t.symbol = alphabet_[r.symbol].name;
    for (auto a : r.args) t.args.push_back(labels_[a]);
    t.target = labels_[r.target];
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<StateId> Fta::labels_of(StateSet set) const {
  std::vector<StateId> out;
  set.for_each([&](std::size_t i) { out.push_back(labels_[i]); });
  return out;
}

StateSet Fta::set_of(std::span<const StateId> labels) const {
  StateSet s;
  for (StateId l : labels) s.insert(index_of(l));
  return s;
}

bool operator==(const Fta& a, const Fta& b) {
  return a.alphabet_ == b.alphabet_ && a.labels_ == b.labels_ && a.finals_ == b.finals_ && a.rules_ == b.rules_;
}

// ---------------------------------------------------------------------------
// Semantics

StateSet sigma_bar(const Fta& fta, std::size_t symbol, std::span<const StateSet> args) {
  const auto& sym = fta.alphabet()[symbol];
  if (args.size() != sym.rank) {
    throw InputError(fmt::format("symbol '{}' has rank {} but got {} arguments", sym.name, sym.rank, args.size()));
  }
  if (sym.rank == 0) return fta.nullary_targets(symbol);
  StateSet out;
  if (sym.rank == 2) {
    args[0].for_each([&](std::size_t q1) {
      args[1].for_each([&](std::size_t q2) { out |= fta.binary_targets(symbol, q1, q2); });
    });
    return out;
  }
  for (const auto& r : fta.rules()) {
    if (r.symbol != symbol) continue;
    bool fires = true;
    for (std::size_t i = 0; i < r.args.size() && fires; ++i) fires = args[i].contains(r.args[i]);
    if (fires) out.insert(r.target);
  }
  return out;
}

StateSet sigma_bar(const Fta& fta, std::string_view symbol, std::span<const StateSet> args) {
  return sigma_bar(fta, fta.alphabet().index_of(symbol), args);
}

StateSet evaluate(const Fta& fta, const Tree& tree) {
  if (tree.is_state()) return StateSet::singleton(fta.index_of(tree.state_id()));
  const std::size_t symbol = fta.alphabet().index_of(tree.label());
  std::vector<StateSet> args;
  args.reserve(tree.children().size());
  for (const auto& c : tree.children()) args.push_back(evaluate(fta, c));
  return sigma_bar(fta, symbol, args);
}

bool accepts(const Fta& fta, const Tree& tree) {
  if (tree.has_state_leaves()) throw InputError("accepts() needs a tree without state leaves");
  return evaluate(fta, tree).intersects(fta.finals());
}

bool is_deterministic(const Fta& fta) {
  const auto rules = fta.rules();
  for (std::size_t i = 1; i < rules.size(); ++i) {
    if (rules[i].symbol == rules[i - 1].symbol && rules[i].args == rules[i - 1].args) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Enumeration

namespace {

// Appends symbol(children...) for every tuple over `pool` that has at least one child of
// height exactly `top` (so trees are produced once across levels).
void append_level(const std::string& symbol, std::size_t rank, const std::vector<Tree>& pool, std::size_t top,
                  std::size_t tree_limit, std::vector<Tree>& out) {
  std::vector<std::size_t> idx(rank, 0);
  std::vector<Tree> children;
  while (true) {
    bool reaches_top = false;
    for (std::size_t i = 0; i < rank; ++i) reaches_top |= pool[idx[i]].height() == top;
    if (reaches_top) {
      if (out.size() >= tree_limit) {
        throw ConfigError(fmt::format("tree enumeration exceeds {} trees", tree_limit));
      }
      children.clear();
      for (std::size_t i = 0; i < rank; ++i) children.push_back(pool[idx[i]]);
      out.push_back(Tree::node(symbol, children));
    }
    std::size_t pos = rank;
    while (pos > 0) {
      --pos;
      if (++idx[pos] < pool.size()) break;
      idx[pos] = 0;
      if (pos == 0) return;
    }
    if (rank == 0) return;
  }
}

}  // namespace

std::vector<Tree> enumerate_trees(const RankedAlphabet& alphabet, std::size_t max_height, std::size_t height_limit,
                                  std::size_t tree_limit) {
  if (max_height > height_limit) {
    throw ConfigError(fmt::format("tree height {} exceeds the enumeration limit {}", max_height, height_limit));
  }
  std::vector<Tree> trees;
  for (std::size_t s : alphabet.symbols_of_rank(0)) trees.push_back(Tree::node(alphabet[s].name));
  for (std::size_t h = 1; h <= max_height; ++h) {
    std::vector<Tree> next = trees;
    for (const auto& sym : alphabet.symbols()) {
      if (sym.rank == 0) continue;
      append_level(sym.name, sym.rank, trees, h - 1, tree_limit, next);
    }
    trees = std::move(next);
  }
  std::sort(trees.begin(), trees.end());
  return trees;
}

std::set<Tree> language_fingerprint(const Fta& fta, std::size_t max_height, std::size_t height_limit) {
  std::set<Tree> out;
  for (auto& t : enumerate_trees(fta.alphabet(), max_height, height_limit)) {
    if (accepts(fta, t)) out.insert(std::move(t));
  }
  return out;
}

}  // namespace fta

#pragma once

// Fixtures and brute-force oracles shared by the unit tests. Nothing here calls the library's
// own fixpoints or subset machinery.

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "fta/core.hpp"
#include "fta/randgen.hpp"

namespace fta::test {

inline RankedAlphabet alphabet_a() { return RankedAlphabet({{"alpha", 0}, {"sigma", 2}}); }

// Label-based construction that accepts brace lists for every argument.
inline Fta make_fta(RankedAlphabet alphabet, std::vector<StateId> states, std::vector<StateId> finals,
                    std::vector<Transition> transitions) {
  return Fta(std::move(alphabet), std::move(states), finals, transitions);
}

// The four-state running example, F = {3}.
inline Fta m_ex() {
  return Fta(alphabet_a(), {0, 1, 2, 3}, {3},
             {{"alpha", {}, 0},
              {"alpha", {}, 2},
              {"sigma", {0, 0}, 1},
              {"sigma", {1, 0}, 1},
              {"sigma", {1, 2}, 3},
              {"sigma", {1, 3}, 3}});
}

inline const char* kMexDocument =
    "states: 0 1 2 3\n"
    "finals: 3\n"
    "alphabet: alpha/0 sigma/2\n"
    "alpha -> 0\n"
    "alpha -> 2\n"
    "sigma(0,0) -> 1\n"
    "sigma(1,0) -> 1\n"
    "sigma(1,2) -> 3\n"
    "sigma(1,3) -> 3\n";

using LabelSet = std::set<StateId>;

// Bottom-up evaluation straight from the transition list.
inline LabelSet naive_eval(const Fta& fta, const Tree& t) {
  if (t.is_state()) return {t.state_id()};
  std::vector<LabelSet> kids;
  for (const Tree& c : t.children()) kids.push_back(naive_eval(fta, c));
  LabelSet out;
  for (const Transition& tr : fta.transitions()) {
    if (tr.symbol != t.label() || tr.args.size() != kids.size()) continue;
    bool ok = true;
    for (std::size_t i = 0; i < kids.size() && ok; ++i) ok = kids[i].count(tr.args[i]) > 0;
    if (ok) out.insert(tr.target);
  }
  return out;
}

inline LabelSet labels(const Fta& fta, StateSet s) {
  const auto v = fta.labels_of(s);
  return LabelSet(v.begin(), v.end());
}

// Usefulness by the definition, over plain label sets: reachable by a tree, and able to
// reach a final state through a context whose other holes hold reachable states.
inline bool naive_trim(const Fta& fta) {
  const auto trs = fta.transitions();
  LabelSet reach;
  for (bool grew = true; grew;) {
    grew = false;
    for (const auto& tr : trs) {
      if (reach.count(tr.target)) continue;
      if (std::all_of(tr.args.begin(), tr.args.end(), [&](StateId a) { return reach.count(a) > 0; })) {
        reach.insert(tr.target);
        grew = true;
      }
    }
  }
  LabelSet co;
  for (StateId f : fta.labels_of(fta.finals())) co.insert(f);
  for (bool grew = true; grew;) {
    grew = false;
    for (const auto& tr : trs) {
      if (!co.count(tr.target)) continue;
      for (std::size_t i = 0; i < tr.args.size(); ++i) {
        bool siblings = true;
        for (std::size_t j = 0; j < tr.args.size(); ++j) {
          if (j != i && !reach.count(tr.args[j])) siblings = false;
        }
        if (siblings && !co.count(tr.args[i])) {
          co.insert(tr.args[i]);
          grew = true;
        }
      }
    }
  }
  for (StateId q : fta.labels()) {
    if (!reach.count(q) || !co.count(q)) return false;
  }
  return true;
}

// A random FTA over states 1..n from a std::mt19937_64, independent of the library generator.
inline Fta random_fta(std::mt19937_64& rng, const RankedAlphabet& alphabet, std::size_t n, double d2,
                      double d0 = 0.5, double pf = 0.5) {
  std::bernoulli_distribution b2(d2), b0(d0), bf(pf);
  std::vector<StateId> states, finals;
  for (StateId q = 1; q <= n; ++q) {
    states.push_back(q);
    if (bf(rng)) finals.push_back(q);
  }
  std::vector<Transition> trs;
  for (const auto& s : alphabet.symbols()) {
    if (s.rank == 0) {
      for (StateId q : states)
        if (b0(rng)) trs.push_back({s.name, {}, q});
    } else {
      for (StateId l : states)
        for (StateId r : states)
          for (StateId q : states)
            if (b2(rng)) trs.push_back({s.name, {l, r}, q});
    }
  }
  return Fta(alphabet, states, finals, trs);
}

// Same automaton with labels mapped through `perm` (perm[i] is the new label of labels()[i]).
inline Fta relabel(const Fta& fta, const std::vector<StateId>& perm) {
  std::map<StateId, StateId> to;
  for (std::size_t i = 0; i < fta.state_count(); ++i) to[fta.label(i)] = perm[i];
  std::vector<StateId> states, finals;
  for (StateId q : fta.labels()) states.push_back(to[q]);
  for (StateId q : fta.labels_of(fta.finals())) finals.push_back(to[q]);
  std::vector<Transition> trs;
  for (auto tr : fta.transitions()) {
    for (auto& a : tr.args) a = to[a];
    tr.target = to[tr.target];
    trs.push_back(tr);
  }
  return Fta(fta.alphabet(), states, finals, trs);
}

}  // namespace fta::test

#include <doctest.h>

#include <random>

#include "fta/core.hpp"
#include "support.hpp"

using namespace fta;
using fta::test::m_ex;

namespace {

Tree a() { return Tree::node("alpha"); }
Tree s(Tree l, Tree r) { return Tree::node("sigma", {std::move(l), std::move(r)}); }

StateSet set_of(const Fta& m, std::vector<StateId> v) { return m.set_of(v); }

// Random tree of height <= h over {alpha, sigma}, sometimes with state leaves.
Tree random_tree(std::mt19937_64& rng, std::size_t h, const std::vector<StateId>& leaves) {
  std::uniform_int_distribution<int> pick(0, 9);
  const int c = pick(rng);
  if (h == 0 || c < 3) {
    if (!leaves.empty() && c == 0) return Tree::state(leaves[rng() % leaves.size()]);
    return a();
  }
  return s(random_tree(rng, h - 1, leaves), random_tree(rng, h - 1, leaves));
}

}  // namespace

TEST_CASE("ranked alphabet validation") {
  CHECK_THROWS_AS(RankedAlphabet({{"sigma", 2}}), InputError);
  CHECK_THROWS_AS(RankedAlphabet({{"alpha", 0}, {"alpha", 2}}), InputError);
  CHECK_THROWS_AS(RankedAlphabet({{"", 0}}), InputError);
  const RankedAlphabet sigma({{"sigma", 2}, {"alpha", 0}});
  CHECK(sigma[0].name == "alpha");
  CHECK(sigma.is_binary());
  CHECK(sigma.max_rank() == 2);
  CHECK_FALSE(RankedAlphabet({{"alpha", 0}, {"g", 1}}).is_binary());
  CHECK_THROWS_AS(sigma.index_of("beta"), InputError);
}

TEST_CASE("fta construction rejects malformed input") {
  const auto al = test::alphabet_a();
  CHECK_THROWS_AS(test::make_fta(al, {1, 2}, {3}, {}), InputError);
  CHECK_THROWS_AS(test::make_fta(al, {1}, {}, {{"sigma", {1}, 1}}), InputError);
  CHECK_THROWS_AS(test::make_fta(al, {1}, {}, {{"alpha", {}, 2}}), InputError);
  CHECK_THROWS_AS(test::make_fta(al, {1}, {}, {{"alpha", {}, 1}, {"alpha", {}, 1}}), InputError);
  CHECK_THROWS_AS(test::make_fta(al, {1, 1}, {}, {}), InputError);
  CHECK_THROWS_AS(test::make_fta(al, {1}, {}, {{"beta", {}, 1}}), InputError);
}

TEST_CASE("evaluate on the running example") {
  const Fta m = m_ex();
  CHECK(evaluate(m, a()) == set_of(m, {0, 2}));
  CHECK(evaluate(m, s(a(), a())) == set_of(m, {1}));
  CHECK(accepts(m, s(s(s(a(), a()), a()), a())));
  CHECK_FALSE(accepts(m, a()));
  CHECK(evaluate(m, Tree::state(3)) == set_of(m, {3}));
  CHECK_THROWS_AS(evaluate(m, Tree::state(9)), InputError);
  CHECK_THROWS_AS(evaluate(m, Tree::node("beta")), InputError);
  CHECK_THROWS_AS(accepts(m, s(Tree::state(1), a())), InputError);

  const Fta empty = test::make_fta(test::alphabet_a(), {1, 2}, {1, 2}, {});
  CHECK(evaluate(empty, a()).empty());
  const Fta no_finals = test::make_fta(test::alphabet_a(), {1}, {}, {{"alpha", {}, 1}, {"sigma", {1, 1}, 1}});
  CHECK_FALSE(accepts(no_finals, s(a(), a())));
}

TEST_CASE("sigma_bar examples") {
  const Fta m = m_ex();
  const StateSet q02 = set_of(m, {0, 2});
  const StateSet args1[] = {q02, q02};
  CHECK(sigma_bar(m, "sigma", args1) == set_of(m, {1}));
  const StateSet args2[] = {set_of(m, {1}), q02};
  CHECK(sigma_bar(m, "sigma", args2) == set_of(m, {1, 3}));
  const StateSet args3[] = {StateSet{}, q02};
  CHECK(sigma_bar(m, "sigma", args3).empty());
  const StateSet one[] = {q02};
  CHECK_THROWS_AS(sigma_bar(m, "sigma", one), InputError);
}

TEST_CASE("sigma_bar is monotone") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const Fta m = test::random_fta(rng, test::alphabet_a(), 5, 0.2);
    const std::uint64_t full = 0x1F;
    const StateSet q1(rng() & full), q2(rng() & full);
    const StateSet q1p = q1 | StateSet(rng() & full), q2p = q2 | StateSet(rng() & full);
    const StateSet lo[] = {q1, q2}, hi[] = {q1p, q2p};
    CHECK(sigma_bar(m, "sigma", lo).is_subset_of(sigma_bar(m, "sigma", hi)));
  }
}

TEST_CASE("evaluate agrees with the transition-list oracle and the definitional recursion") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    const Fta m = test::random_fta(rng, test::alphabet_a(), 4, 0.15);
    const std::vector<StateId> leaves(m.labels().begin(), m.labels().end());
    for (int k = 0; k < 10; ++k) {
      const Tree t = random_tree(rng, 4, leaves);
      const StateSet got = evaluate(m, t);
      CHECK(test::labels(m, got) == test::naive_eval(m, t));
      if (!t.is_state() && t.children().size() == 2) {
        const StateSet args[] = {evaluate(m, t.children()[0]), evaluate(m, t.children()[1])};
        CHECK(got == sigma_bar(m, "sigma", args));
      }
    }
  }
}

TEST_CASE("deterministic automata evaluate to at most one state") {
  std::mt19937_64 rng(8);
  int seen = 0;
  for (int i = 0; i < 400 && seen < 40; ++i) {
    const Fta m = test::random_fta(rng, test::alphabet_a(), 3, 0.1, 0.3);
    if (!is_deterministic(m)) continue;
    ++seen;
    for (const Tree& t : enumerate_trees(m.alphabet(), 3)) CHECK(evaluate(m, t).size() <= 1);
  }
  CHECK(seen >= 10);
}

TEST_CASE("is_deterministic") {
  CHECK_FALSE(is_deterministic(m_ex()));
  CHECK(is_deterministic(test::make_fta(test::alphabet_a(), {1, 2}, {}, {})));
  CHECK(is_deterministic(test::make_fta(test::alphabet_a(), {1, 2}, {2}, {{"alpha", {}, 1}, {"sigma", {1, 1}, 2}})));
}

// Count of trees of height <= h over one nullary and one binary symbol.
static std::size_t tree_count(std::size_t h) { return h == 0 ? 1 : tree_count(h - 1) * tree_count(h - 1) + 1; }

TEST_CASE("enumerate_trees") {
  const auto al = test::alphabet_a();
  const auto t0 = enumerate_trees(al, 0);
  REQUIRE(t0.size() == 1);
  CHECK(t0[0] == a());
  const auto t1 = enumerate_trees(al, 1);
  REQUIRE(t1.size() == 2);
  CHECK(t1[0] == a());
  CHECK(t1[1] == s(a(), a()));
  for (std::size_t h = 0; h <= 4; ++h) {
    const auto trees = enumerate_trees(al, h);
    CHECK(trees.size() == tree_count(h));
    CHECK(std::is_sorted(trees.begin(), trees.end()));
    CHECK(std::adjacent_find(trees.begin(), trees.end()) == trees.end());
    for (const auto& t : trees) CHECK(t.height() <= h);
  }
  CHECK(enumerate_trees(al, 2).size() == 5);
  CHECK(enumerate_trees(al, 4).size() == 677);
  CHECK_THROWS_AS(enumerate_trees(al, 6), ConfigError);
  CHECK_THROWS_AS(enumerate_trees(al, 4, 5, 100), ConfigError);
}

TEST_CASE("enumerate_trees is a prefix-closed chain") {
  const RankedAlphabet b({{"alpha", 0}, {"beta", 0}, {"sigma", 2}, {"delta", 2}});
  for (std::size_t h = 0; h < 3; ++h) {
    const auto lo = enumerate_trees(b, h), hi = enumerate_trees(b, h + 1);
    CHECK(std::includes(hi.begin(), hi.end(), lo.begin(), lo.end()));
  }
}

TEST_CASE("language fingerprint") {
  const Fta m = m_ex();
  CHECK(language_fingerprint(m, 1).empty());
  const auto f3 = language_fingerprint(m, 3);
  CHECK(f3.count(s(s(s(a(), a()), a()), a())) == 1);
  const Fta no_finals = test::make_fta(test::alphabet_a(), {1}, {}, {{"alpha", {}, 1}, {"sigma", {1, 1}, 1}});
  CHECK(language_fingerprint(no_finals, 4).empty());
}

TEST_CASE("tree printing and ordering") {
  CHECK(to_string(s(a(), Tree::state(3))) == "sigma(alpha,[3])");
  CHECK(Tree::state(1) < a());
  CHECK(a() < s(a(), a()));
  CHECK(s(a(), a()).height() == 1);
  CHECK(s(s(a(), a()), a()).node_count() == 5);
}

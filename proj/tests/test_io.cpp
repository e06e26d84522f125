#include <doctest.h>

#include <filesystem>
#include <locale>
#include <random>
#include <sstream>

#include "fta/constructions.hpp"
#include "fta/io.hpp"
#include "support.hpp"

using namespace fta;
using fta::test::kMexDocument;

namespace {

// Line and column of the ParseError thrown by parse_document(text).
std::pair<std::size_t, std::size_t> error_at(const std::string& text) {
  try {
    parse_document(text);
  } catch (const ParseError& e) {
    return {e.line(), e.column()};
  }
  return {0, 0};
}

const std::string kHeader = "states: 1 2\nfinals: 2\nalphabet: alpha/0 sigma/2\n";

// Decimal comma and thousands grouping, as in many European locales.
struct CommaPunct : std::numpunct<char> {
  char do_decimal_point() const override { return ','; }
  char do_thousands_sep() const override { return '.'; }
  std::string do_grouping() const override { return "\3"; }
};

std::size_t count_lines(const std::string& s) { return std::count(s.begin(), s.end(), '\n'); }

}  // namespace

TEST_CASE("parse the running example") {
  const Fta m = parse_fta(kMexDocument);
  CHECK(m == test::m_ex());
  CHECK(m.state_count() == 4);
  CHECK(test::labels(m, m.finals()) == test::LabelSet{3});
  const std::string text = format_fta(m);
  CHECK(text == kMexDocument);
  CHECK(count_lines(text) - 3 == 6);
}

TEST_CASE("comments, blank lines and spacing") {
  const std::string text =
      "# made by hand\n\n"
      "states:  1   2 # two\n"
      "finals: 2\n"
      "alphabet: sigma/2 alpha/0\n"
      "  alpha->1\n"
      "# between\n"
      "sigma( 1 , 1 )  ->  2\r\n";
  const FtaDocument doc = parse_document(text);
  REQUIRE(doc.comments.size() == 1);
  CHECK(doc.comments[0] == "made by hand");
  CHECK(doc.transitions.size() == 2);
  const Fta m = to_fta(doc);
  CHECK(format_fta(m) == kHeader + "alpha -> 1\nsigma(1,1) -> 2\n");
  CHECK(format_document(doc).rfind("# made by hand\n", 0) == 0);
}

TEST_CASE("empty transition section") {
  const Fta m = parse_fta(kHeader);
  CHECK(m.transition_count() == 0);
  CHECK(format_fta(m) == kHeader);
}

TEST_CASE("parse errors carry positions") {
  CHECK(error_at(kHeader + "sigma(1) -> 2\n") == std::pair<std::size_t, std::size_t>{4, 1});
  CHECK(error_at(kHeader + "alpha -> 3\n") == std::pair<std::size_t, std::size_t>{4, 10});
  CHECK(error_at(kHeader + "sigma(1,7) -> 2\n") == std::pair<std::size_t, std::size_t>{4, 9});
  CHECK(error_at(kHeader + "beta -> 1\n") == std::pair<std::size_t, std::size_t>{4, 1});
  CHECK(error_at(kHeader + "alpha -> 1\nsigma(1,1) -> 2\nalpha -> 1\n") == std::pair<std::size_t, std::size_t>{6, 1});
  CHECK(error_at(kHeader + "alpha -> 1 2\n") == std::pair<std::size_t, std::size_t>{4, 12});
  CHECK(error_at(kHeader + "alpha 1\n") == std::pair<std::size_t, std::size_t>{4, 7});
  CHECK(error_at("states: 1\nalphabet: alpha/0\n").first == 2);
  CHECK(error_at("states: 1\nfinals:\n").first == 3);
  CHECK(error_at("").first == 1);
  CHECK(error_at("states: 1 1\n") == std::pair<std::size_t, std::size_t>{1, 11});
  CHECK(error_at("states: 1\nfinals: 2\n") == std::pair<std::size_t, std::size_t>{2, 9});
  CHECK(error_at("states: 1\nfinals:\nalphabet: sigma/2\n").first == 3);
  // Columns count code points, not bytes.
  CHECK(error_at("states: 1\nfinals:\nalphabet: α/0 σ/2\nσ(1,4) -> 1\n") == std::pair<std::size_t, std::size_t>{4, 5});
}

TEST_CASE("unicode symbol names round trip") {
  const std::string text = "states: 1\nfinals: 1\nalphabet: α/0 σ/2\nα -> 1\nσ(1,1) -> 1\n";
  const Fta m = parse_fta(text);
  CHECK(format_fta(m) == text);
}

TEST_CASE("round trip on random automata") {
  std::mt19937_64 rng(1234);
  const RankedAlphabet b({{"alpha", 0}, {"sigma", 2}, {"delta", 2}});
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = 1 + rng() % 6;
    Fta m = test::random_fta(rng, i % 2 ? b : test::alphabet_a(), n, 0.15);
    if (i % 3 == 0) {
      std::vector<StateId> perm(n);
      for (std::size_t k = 0; k < n; ++k) perm[k] = static_cast<StateId>(rng() % 1000 * 10 + k);
      m = test::relabel(m, perm);
    }
    const std::string text = format_fta(m);
    const Fta back = parse_fta(text);
    CHECK(back == m);
    CHECK(format_fta(back) == text);
  }
}

TEST_CASE("deterministic documents") {
  const Dfta d = determinize(test::m_ex());
  const FtaDocument doc = to_document(d);
  CHECK(doc.states.size() == 4);
  CHECK(doc.is_deterministic());
  CHECK(doc.transitions.size() == 8);
  CHECK(doc.comments.size() == 4);
  CHECK(doc.comments[0] == "1 = {0,2}");

  const FtaDocument again = parse_document(format_document(doc));
  const Dfta back = to_dfta(again);
  CHECK(det_size(back) == 4);
  CHECK(minimize(back).size() == 4);
  CHECK(isomorphic(minimize(back), minimize(d)));
  CHECK(language_fingerprint(back, 4) == language_fingerprint(test::m_ex(), 4));

  CHECK_THROWS_AS(to_dfta(parse_document(kMexDocument)), InputError);
}

TEST_CASE("files") {
  const auto path = std::filesystem::temp_directory_path() / "fta_io_test.txt";
  write_file(path, kMexDocument);
  CHECK(read_file(path) == kMexDocument);
  std::filesystem::remove(path);
  CHECK_THROWS(read_file(path));
}

TEST_CASE("csv schemas") {
  Sweep s;
  s.seed = Seed{42};
  s.steps = 2;
  s.trials = 3;
  PointRecord p;
  p.n = 4;
  p.x = 1;
  p.d2 = 0.123456789;
  p.trials = 3;
  p.trim_attempts = 17;
  p.mean_det_size = 1234.5;
  p.mean_canonical_size = 2.0 / 3.0;
  s.points.push_back(p);
  CHECK(sweep_csv(s) ==
        "# seed=42 steps=2 trials=3\n"
        "setting,n,x,d2,trials,trim_attempts,mean_det_size,mean_canonical_size\n"
        "A,4,1,0.12345679,3,17,1234.5000,0.6667\n");

  DensityRow row{8, 0.0431, {}, true};
  row.fit.observed_peak = 0.04;
  row.fit.lo = 0.03;
  row.fit.hi = 0.05;
  row.fit.sigma = 0.9;
  const DensityRow rows[] = {row};
  CHECK(densities_csv(rows, Seed{1}, 40, 40) ==
        "# seed=1 steps=40 trials=40\nn,d2,d2_observed,lo,hi,sigma,contained\n8,0.0431,0.0400,0.0300,0.0500,0.9000,yes\n");

  TrimCell a{0.5, 2, {47, 100, 0.47, 0.0978}, 0.47};
  TrimCell b{0.3, 4, {1, 10, 0.1, 0.186}, std::nullopt};
  const TrimCell cells[] = {a, b};
  CHECK(trim_csv(cells, Seed{9}) ==
        "# seed=9\nd2,n,trials,trim,ratio,half_width,reference\n0.50,2,100,47,0.4700,0.0978,0.47\n"
        "0.30,4,10,1,0.1000,0.1860,\n");
}

TEST_CASE("csv output ignores the global locale") {
  std::locale::global(std::locale(std::locale::classic(), new CommaPunct));
  Sweep s;
  PointRecord p;
  p.trim_attempts = 1234567;
  p.mean_det_size = 1234567.25;
  s.points.push_back(p);
  const std::string csv = sweep_csv(s);
  CHECK(csv.find("1234567,1234567.2500,") != std::string::npos);
  std::locale::global(std::locale::classic());
}

#include "fta/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>

#include <fmt/format.h>

namespace fta {

namespace {

std::size_t codepoint_column(std::string_view line, std::size_t byte) {
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < line.size(); ++i) {
    if ((static_cast<unsigned char>(line[i]) & 0xC0) != 0x80) ++col;
  }
  // The byte at `byte` itself is a lead byte, so continuation bytes before it were not counted.
  return col;
}

bool is_name_char(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u >= 0x80 || std::isalnum(u) || c == '_';
}

class LineCursor {
 public:
  LineCursor(std::string_view line, std::size_t line_no) : line_(line), line_no_(line_no) {}

  [[noreturn]] void fail(const std::string& message) const { fail_at(pos_, message); }
  [[noreturn]] void fail_at(std::size_t byte, const std::string& message) const {
    throw ParseError(line_no_, codepoint_column(line_, byte), message);
  }

  void skip_space() {
    while (pos_ < line_.size() && (line_[pos_] == ' ' || line_[pos_] == '\t' || line_[pos_] == '\r')) ++pos_;
  }
  bool at_end() {
    skip_space();
    return pos_ >= line_.size();
  }
  std::size_t pos() const { return pos_; }

  bool accept(std::string_view token) {
    skip_space();
    if (line_.substr(pos_, token.size()) != token) return false;
    pos_ += token.size();
    return true;
  }
  void expect(std::string_view token) {
    if (!accept(token)) fail(fmt::format("expected '{}'", token));
  }

  std::string_view name() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < line_.size() && is_name_char(line_[pos_])) ++pos_;
    if (start == pos_) fail("expected a name");
    return line_.substr(start, pos_ - start);
  }

  std::size_t number() {
    skip_space();
    const std::size_t start = pos_;
    std::size_t value = 0;
    while (pos_ < line_.size() && std::isdigit(static_cast<unsigned char>(line_[pos_]))) {
      value = value * 10 + static_cast<std::size_t>(line_[pos_] - '0');
      if (value > 0xFFFFFFFFu) fail_at(start, "number out of range");
      ++pos_;
    }
    if (start == pos_) fail("expected a number");
    return value;
  }

 private:
  std::string_view line_;
  std::size_t line_no_;
  std::size_t pos_ = 0;
};

std::string_view strip_comment(std::string_view line) {
  const auto hash = line.find('#');
  return hash == std::string_view::npos ? line : line.substr(0, hash);
}

}  // namespace

bool FtaDocument::is_deterministic() const {
  for (std::size_t i = 1; i < transitions.size(); ++i) {
    if (transitions[i].symbol == transitions[i - 1].symbol && transitions[i].args == transitions[i - 1].args) {
      return false;
    }
  }
  return true;
}

FtaDocument parse_document(std::string_view text) {
  FtaDocument doc;
  std::vector<Symbol> symbols;
  std::optional<RankedAlphabet> alphabet;
  int header = 0;  // header lines consumed: states, finals, alphabet

  std::vector<std::pair<Transition, std::pair<std::size_t, std::size_t>>> rules;  // with (line, column)

  auto state = [&](LineCursor& cur) -> StateId {
    cur.skip_space();
    const std::size_t at = cur.pos();
    const auto label = static_cast<StateId>(cur.number());
    if (!std::binary_search(doc.states.begin(), doc.states.end(), label)) {
      cur.fail_at(at, fmt::format("undeclared state {}", label));
    }
    return label;
  };

  std::size_t line_no = 0;
  std::size_t begin = 0;
  while (begin < text.size()) {
    std::size_t end = text.find('\n', begin);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view raw = text.substr(begin, end - begin);
    begin = end + 1;
    ++line_no;
    LineCursor cur(strip_comment(raw), line_no);
    if (cur.at_end()) {
      if (header == 0 && raw.find('#') != std::string_view::npos) {
        std::string_view c = raw.substr(raw.find('#') + 1);
        if (!c.empty() && c.front() == ' ') c.remove_prefix(1);
        while (!c.empty() && (c.back() == '\r' || c.back() == ' ')) c.remove_suffix(1);
        doc.comments.emplace_back(c);
      }
      continue;
    }

    if (header == 0) {
      cur.expect("states:");
      while (!cur.at_end()) {
        const std::size_t at = cur.pos();
        const auto q = static_cast<StateId>(cur.number());
        if (std::find(doc.states.begin(), doc.states.end(), q) != doc.states.end()) {
          cur.fail_at(at, fmt::format("state {} declared twice", q));
        }
        doc.states.push_back(q);
      }
      std::sort(doc.states.begin(), doc.states.end());
      ++header;
    } else if (header == 1) {
      cur.expect("finals:");
      while (!cur.at_end()) {
        const std::size_t at = cur.pos();
        const StateId q = state(cur);
        if (std::find(doc.finals.begin(), doc.finals.end(), q) != doc.finals.end()) {
          cur.fail_at(at, fmt::format("final state {} listed twice", q));
        }
        doc.finals.push_back(q);
      }
      std::sort(doc.finals.begin(), doc.finals.end());
      ++header;
    } else if (header == 2) {
      cur.expect("alphabet:");
      while (!cur.at_end()) {
        const std::size_t at = cur.pos();
        Symbol s{std::string(cur.name()), 0};
        cur.expect("/");
        s.rank = cur.number();
        for (const auto& other : symbols) {
          if (other.name == s.name) cur.fail_at(at, fmt::format("symbol '{}' declared twice", s.name));
        }
        symbols.push_back(std::move(s));
      }
      try {
        alphabet.emplace(symbols);
      } catch (const InputError& e) {
        cur.fail_at(0, e.what());
      }
      ++header;
    } else {
      cur.skip_space();
      const std::size_t sym_at = cur.pos();
      const std::string_view name = cur.name();
      const auto sym = alphabet->find(name);
      if (!sym) cur.fail_at(sym_at, fmt::format("unknown symbol '{}'", name));
      Transition t;
      t.symbol = std::string(name);
      if (cur.accept("(")) {
        do {
          t.args.push_back(state(cur));
        } while (cur.accept(","));
        cur.expect(")");
      }
      const std::size_t rank = (*alphabet)[*sym].rank;
      if (t.args.size() != rank) {
        cur.fail_at(sym_at, fmt::format("symbol '{}' has rank {} but {} arguments are given", name, rank,
                                        t.args.size()));
      }
      cur.expect("->");
      t.target = state(cur);
      if (!cur.at_end()) cur.fail("unexpected trailing input");
      rules.push_back({std::move(t), {line_no, codepoint_column(raw, sym_at)}});
    }
  }
  if (header < 3) {
    static constexpr const char* kMissing[] = {"states:", "finals:", "alphabet:"};
    throw ParseError(line_no + 1, 1, fmt::format("missing '{}' header", kMissing[header]));
  }

  // Duplicates are reported at their later occurrence.
  std::stable_sort(rules.begin(), rules.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < rules.size(); ++i) {
    if (rules[i].first == rules[i - 1].first) {
      const auto& later = std::max(rules[i].second, rules[i - 1].second);
      throw ParseError(later.first, later.second, "duplicate transition");
    }
  }
  doc.alphabet = std::move(*alphabet);
  doc.transitions.reserve(rules.size());
  for (auto& r : rules) doc.transitions.push_back(std::move(r.first));
  return doc;
}

std::string format_document(const FtaDocument& doc) {
  std::string out;
  for (const auto& c : doc.comments) out += fmt::format("# {}\n", c);
  out += "states:";
  for (StateId q : doc.states) out += fmt::format(" {}", q);
  out += "\nfinals:";
  for (StateId q : doc.finals) out += fmt::format(" {}", q);
  out += "\nalphabet:";
  for (const auto& s : doc.alphabet.symbols()) out += fmt::format(" {}/{}", s.name, s.rank);
  out += '\n';
  for (const auto& t : doc.transitions) {
    out += t.symbol;
    if (!t.args.empty()) out += fmt::format("({})", fmt::join(t.args, ","));
    out += fmt::format(" -> {}\n", t.target);
  }
  return out;
}

FtaDocument to_document(const Fta& fta) {
  FtaDocument doc;
  doc.alphabet = fta.alphabet();
  doc.states.assign(fta.labels().begin(), fta.labels().end());
  doc.finals = fta.labels_of(fta.finals());
  doc.transitions = fta.transitions();
  std::sort(doc.transitions.begin(), doc.transitions.end());
  return doc;
}

Fta to_fta(const FtaDocument& doc) { return Fta(doc.alphabet, doc.states, doc.finals, doc.transitions); }

Fta parse_fta(std::string_view text) {
  const FtaDocument doc = parse_document(text);
  if (doc.states.size() > StateSet::kCapacity) {
    throw ParseError(1, 1, fmt::format("at most {} states are supported", StateSet::kCapacity));
  }
  return to_fta(doc);
}

std::string format_fta(const Fta& fta) { return format_document(to_document(fta)); }

FtaDocument to_document(const Dfta& dfta) {
  FtaDocument doc;
  doc.alphabet = dfta.alphabet();
  const auto sink = dfta.sink();
  std::vector<StateId> label(dfta.state_count(), 0);
  StateId next = 1;
  for (DState s = 0; s < dfta.state_count(); ++s) {
    if (sink && s == *sink) continue;
    label[s] = next++;
    doc.states.push_back(label[s]);
    if (dfta.is_final(s)) doc.finals.push_back(label[s]);
    std::vector<std::size_t> members;
    dfta.subset(s).for_each([&](std::size_t q) { members.push_back(q); });
    doc.comments.push_back(fmt::format("{} = {{{}}}", label[s], fmt::join(members, ",")));
  }
  auto live = [&](DState s) { return s != kNoState && !(sink && s == *sink); };
  const auto& alphabet = dfta.alphabet();
  for (std::size_t sym = 0; sym < alphabet.size(); ++sym) {
    if (alphabet[sym].rank == 0) {
      if (live(dfta.nullary(sym))) doc.transitions.push_back({alphabet[sym].name, {}, label[dfta.nullary(sym)]});
      continue;
    }
    for (DState l = 0; l < dfta.state_count(); ++l) {
      if (!live(l)) continue;
      for (DState r = 0; r < dfta.state_count(); ++r) {
        const DState t = dfta.binary(sym, l, r);
        if (live(r) && live(t)) doc.transitions.push_back({alphabet[sym].name, {label[l], label[r]}, label[t]});
      }
    }
  }
  std::sort(doc.transitions.begin(), doc.transitions.end());
  return doc;
}

Dfta to_dfta(const FtaDocument& doc) {
  if (!doc.is_deterministic()) throw InputError("document is not deterministic");
  Dfta out(doc.alphabet);
  const auto& alphabet = doc.alphabet;
  auto index = [&](StateId q) {
    return static_cast<std::size_t>(std::lower_bound(doc.states.begin(), doc.states.end(), q) - doc.states.begin());
  };
  // Accessible states in discovery order.
  std::vector<DState> id(doc.states.size(), kNoState);
  std::vector<std::size_t> order;
  auto visit = [&](StateId q) {
    const std::size_t i = index(q);
    if (id[i] == kNoState) {
      id[i] = out.add_state(StateSet{}, std::binary_search(doc.finals.begin(), doc.finals.end(), q));
      order.push_back(i);
    }
    return id[i];
  };
  std::vector<std::vector<const Transition*>> by_arg(doc.states.size());
  for (const auto& t : doc.transitions) {
    if (t.args.empty()) {
      out.set_nullary(alphabet.index_of(t.symbol), visit(t.target));
    } else {
      for (StateId a : t.args) by_arg[index(a)].push_back(&t);
    }
  }
  for (std::size_t k = 0; k < order.size(); ++k) {
    for (const Transition* t : by_arg[order[k]]) {
      const DState l = id[index(t->args[0])];
      const DState r = id[index(t->args[1])];
      if (l != kNoState && r != kNoState) out.set_binary(alphabet.index_of(t->symbol), l, r, visit(t->target));
    }
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("cannot open '{}' for reading", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw std::runtime_error(fmt::format("error reading '{}'", path.string()));
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(fmt::format("cannot open '{}' for writing", path.string()));
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw std::runtime_error(fmt::format("error writing '{}'", path.string()));
}

std::string sweep_csv(const Sweep& sweep) {
  std::string out = fmt::format("# seed={} steps={} trials={}\n", sweep.seed.value, sweep.steps, sweep.trials);
  out += "setting,n,x,d2,trials,trim_attempts,mean_det_size,mean_canonical_size\n";
  for (const auto& p : sweep.points) {
    out += fmt::format("{},{},{},{:.8f},{},{},{:.4f},{:.4f}\n", setting_name(p.setting), p.n, p.x, p.d2, p.trials,
                       p.trim_attempts, p.mean_det_size, p.mean_canonical_size);
  }
  return out;
}

std::string densities_csv(std::span<const DensityRow> rows, Seed seed, std::size_t steps, std::size_t trials) {
  std::string out = fmt::format("# seed={} steps={} trials={}\n", seed.value, steps, trials);
  out += "n,d2,d2_observed,lo,hi,sigma,contained\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{:.4f},{:.4f},{:.4f},{:.4f},{:.4f},{}\n", r.n, r.predicted, r.fit.observed_peak, r.fit.lo,
                       r.fit.hi, r.fit.sigma, r.contained ? "yes" : "no");
  }
  return out;
}

std::string trim_csv(std::span<const TrimCell> cells, Seed seed) {
  std::string out = fmt::format("# seed={}\n", seed.value);
  out += "d2,n,trials,trim,ratio,half_width,reference\n";
  for (const auto& c : cells) {
    out += fmt::format("{:.2f},{},{},{},{:.4f},{:.4f},{}\n", c.d2, c.n, c.ratio.trials, c.ratio.trim, c.ratio.ratio,
                       c.ratio.half_width, c.reference ? fmt::format("{:.2f}", *c.reference) : std::string());
  }
  return out;
}

}  // namespace fta

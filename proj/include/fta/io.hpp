#pragma once

// Text format for FTAs and CSV emission for experiment results.
//
// FTA document:
//
//   # comment
//   states: 0 1 2 3
//   finals: 3
//   alphabet: alpha/0 sigma/2
//   alpha -> 0
//   sigma(0,0) -> 1
//
// The three header lines come first, in this order. One transition per line; `#` starts a
// comment anywhere. Symbol names are runs of letters, digits, `_`, or non-ASCII UTF-8.

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fta/constructions.hpp"
#include "fta/core.hpp"
#include "fta/experiment.hpp"

namespace fta {

/// Parsed, validated document with external labels. Unlike Fta it has no state limit, so it
/// also carries large deterministic automata.
struct FtaDocument {
  RankedAlphabet alphabet{{{"alpha", 0}}};
  /// Sorted, unique.
  std::vector<StateId> states;
  /// Sorted, unique.
  std::vector<StateId> finals;
  /// Sorted, unique.
  std::vector<Transition> transitions;
  /// Free-form `#` lines written before the header.
  std::vector<std::string> comments;

  bool is_deterministic() const;
};

/// Throws ParseError (1-based line and code-point column) on syntax errors, arity
/// mismatches, undeclared states or symbols, and duplicate transitions.
FtaDocument parse_document(std::string_view text);
/// Canonical text: comments, header, then transitions sorted by (symbol, arguments, target).
std::string format_document(const FtaDocument& doc);

Fta parse_fta(std::string_view text);
std::string format_fta(const Fta& fta);

FtaDocument to_document(const Fta& fta);
/// Throws InputError for more than 64 states.
Fta to_fta(const FtaDocument& doc);

/// States are numbered 1.. in Dfta order with the sink and its incoming entries left out;
/// each state's subset is noted in a comment.
FtaDocument to_document(const Dfta& dfta);
/// Accessible part of a deterministic document, as a partial Dfta. Throws InputError when
/// the document is nondeterministic or the alphabet is not binary.
Dfta to_dfta(const FtaDocument& doc);

/// Throws std::runtime_error on I/O failure.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

/// `# seed=...` line, then setting,n,x,d2,trials,trim_attempts,mean_det_size,mean_canonical_size.
std::string sweep_csv(const Sweep& sweep);
std::string densities_csv(std::span<const DensityRow> rows, Seed seed, std::size_t steps, std::size_t trials);
std::string trim_csv(std::span<const TrimCell> cells, Seed seed);

}  // namespace fta

// Command-line front end: generation, determinization, minimization, sweeps and tables.

#include <cstdio>
#include <iostream>
#include <optional>
#include <random>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "fta/constructions.hpp"
#include "fta/density.hpp"
#include "fta/experiment.hpp"
#include "fta/io.hpp"
#include "fta/randgen.hpp"

namespace {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kIo = 3,
  kParse = 4,
  kExhausted = 5,
  kCheckFailed = 6,
  kInvalidValue = 7,
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_input(const std::string& path) {
  try {
    if (path == "-") {
      std::string text((std::istreambuf_iterator<char>(std::cin)), std::istreambuf_iterator<char>());
      return text;
    }
    return fta::read_file(path);
  } catch (const std::runtime_error& e) {
    throw IoError(e.what());
  }
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  try {
    fta::write_file(path, text);
  } catch (const std::runtime_error& e) {
    throw IoError(e.what());
  }
}

fta::Seed effective_seed(const std::optional<std::uint64_t>& seed) {
  if (seed) return fta::Seed{*seed};
  std::random_device rd;
  return fta::Seed{(static_cast<std::uint64_t>(rd()) << 32) ^ rd()};
}

struct GenerateArgs {
  std::size_t n = 4;
  std::optional<double> d2;
  double d0 = 0.5;
  double final_prob = 0.5;
  std::string setting = "A";
  std::optional<std::uint64_t> seed;
  std::size_t trial = 0;
  bool trim = true;
  std::size_t max_attempts = 10000;
  std::string out;
};

void add_generation_flags(CLI::App* cmd, GenerateArgs& a) {
  cmd->add_option("--n", a.n, "Number of states")->check(CLI::Range(1, 64));
  cmd->add_option("--d2", a.d2, "Binary transition density (default: peak density for n)");
  cmd->add_option("--d0", a.d0, "Nullary transition density");
  cmd->add_option("--final-prob", a.final_prob, "Probability that a state is final");
  cmd->add_option("--setting", a.setting, "Alphabet setting A or B");
  cmd->add_option("--seed", a.seed, "Master seed (random if omitted)");
  cmd->add_option("--trial", a.trial, "Trial index within the seed");
  cmd->add_flag("--trim,!--no-trim", a.trim, "Regenerate until trim (default on)");
  cmd->add_option("--max-attempts", a.max_attempts, "Attempt cap for the trim loop");
}

struct Generated {
  fta::Fta fta;
  fta::Seed seed;
  double d2;
  std::size_t attempts;
};

Generated run_generate(const GenerateArgs& a) {
  const fta::Seed seed = effective_seed(a.seed);
  const double d2 = a.d2 ? *a.d2 : fta::peak_density(a.n);
  fta::GenConfig config(fta::setting_alphabet(fta::parse_setting(a.setting)), a.n, d2, a.d0);
  config.final_prob = a.final_prob;
  config.max_attempts = a.max_attempts;
  if (a.trim) {
    auto draw = fta::generate_trim(config, seed, a.trial);
    return {std::move(draw.fta), seed, d2, draw.attempts};
  }
  auto stream = fta::RandomStream::derive(seed, {config.key(), a.trial});
  return {fta::generate(config, stream), seed, d2, 1};
}

fta::Dfta load_deterministic(const std::string& path) {
  const fta::FtaDocument doc = fta::parse_document(read_input(path));
  if (doc.is_deterministic()) return fta::to_dfta(doc);
  return fta::determinize(fta::to_fta(doc));
}

fta::FitOptions fit_options(const std::string& scale) {
  fta::FitOptions fit;
  if (scale == "stderr") {
    fit.scale = fta::IntervalScale::kStdErrorPerPoint;
  } else if (scale == "stddev") {
    fit.scale = fta::IntervalScale::kStdDev;
  } else {
    throw fta::ConfigError(fmt::format("unknown interval scale '{}', expected stderr or stddev", scale));
  }
  return fit;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random finite tree automata: generation, determinization, minimization, density sweeps"};
  app.require_subcommand(1);

  // generate
  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Generate a random FTA");
  add_generation_flags(generate, gen);
  generate->add_option("--out", gen.out, "Output file (default stdout)");

  // determinize / minimize
  std::string in_path, out_path;
  auto* determinize = app.add_subcommand("determinize", "Subset construction; prints the determinized size");
  determinize->add_option("--in", in_path, "Input FTA document ('-' for stdin)")->required();
  determinize->add_option("--out", out_path, "Write the deterministic FTA document here");
  auto* minimize = app.add_subcommand("minimize", "Minimize; prints the canonical size");
  minimize->add_option("--in", in_path, "Input FTA document ('-' for stdin)")->required();
  minimize->add_option("--out", out_path, "Write the canonical FTA document here");

  // pipeline
  GenerateArgs pipe;
  auto* pipeline = app.add_subcommand("pipeline", "Generate, determinize and minimize; prints both sizes");
  add_generation_flags(pipeline, pipe);

  // peak-density
  std::size_t peak_n = 2;
  int digits = 4;
  auto* peak = app.add_subcommand("peak-density", "Print the predicted peak density for n states");
  peak->add_option("--n", peak_n, "Number of states (> 1)")->required();
  peak->add_option("--digits", digits, "Decimal places")->check(CLI::Range(0, 17));

  // sweep
  std::size_t sweep_n = 8, steps = 40, trials = 40, threads = 0;
  std::string sweep_setting = "A", scale = "stderr", sweep_out;
  std::optional<std::uint64_t> sweep_seed;
  auto* sweep = app.add_subcommand("sweep", "Density sweep for one n; CSV of per-point mean sizes");
  sweep->add_option("--n", sweep_n, "Number of states")->check(CLI::Range(2, 64));
  sweep->add_option("--setting", sweep_setting, "Alphabet setting A or B");
  sweep->add_option("--steps", steps, "Grid steps (peak at steps/2)")->check(CLI::PositiveNumber);
  sweep->add_option("--trials", trials, "Trim FTAs per grid point")->check(CLI::PositiveNumber);
  sweep->add_option("--seed", sweep_seed, "Master seed (random if omitted)");
  sweep->add_option("--threads", threads, "Worker threads (default FTA_THREADS or all cores)");
  sweep->add_option("--scale", scale, "Peak interval scale: stderr or stddev");
  sweep->add_option("--out", sweep_out, "CSV output file (default stdout)");

  // table1
  std::size_t n_min = 2, n_max = 13;
  std::string table_out;
  auto* table1 = app.add_subcommand("table1", "Predicted vs observed peak densities as CSV");
  table1->add_option("--n-min", n_min, "Smallest n")->check(CLI::Range(2, 64));
  table1->add_option("--n-max", n_max, "Largest n")->check(CLI::Range(2, 64));
  table1->add_option("--steps", steps, "Grid steps")->check(CLI::PositiveNumber);
  table1->add_option("--trials", trials, "Trim FTAs per grid point")->check(CLI::PositiveNumber);
  table1->add_option("--seed", sweep_seed, "Master seed (random if omitted)");
  table1->add_option("--threads", threads, "Worker threads");
  table1->add_option("--scale", scale, "Peak interval scale: stderr or stddev");
  table1->add_option("--out", table_out, "CSV output file (default stdout)");

  // table2
  std::size_t ratio_trials = 1000;
  bool include_blank = false;
  auto* table2 = app.add_subcommand("table2", "Trim ratios over the density/size grid as CSV");
  table2->add_option("--trials", ratio_trials, "Raw draws per cell")->check(CLI::PositiveNumber);
  table2->add_option("--seed", sweep_seed, "Master seed (random if omitted)");
  table2->add_option("--threads", threads, "Worker threads");
  table2->add_flag("--all", include_blank, "Also fill cells without a published value");
  table2->add_option("--out", table_out, "CSV output file (default stdout)");

  // check
  std::size_t check_trials = 100, check_max_n = 4, check_height = 4;
  auto* check = app.add_subcommand("check", "Oracle self-test: fingerprints of M, det(M), min(det(M)) agree");
  check->add_option("--trials", check_trials, "Random trim FTAs to test")->check(CLI::PositiveNumber);
  check->add_option("--max-n", check_max_n, "Largest state count")->check(CLI::Range(1, 6));
  check->add_option("--height", check_height, "Tree height bound")->check(CLI::Range(0, 5));
  check->add_option("--seed", sweep_seed, "Master seed (random if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (generate->parsed()) {
      const Generated g = run_generate(gen);
      fta::FtaDocument doc = fta::to_document(g.fta);
      doc.comments.push_back(fmt::format("seed={} trial={} n={} d2={:.6f} d0={} attempts={}", g.seed.value,
                                         gen.trial, gen.n, g.d2, gen.d0, g.attempts));
      write_output(gen.out, fta::format_document(doc));
      if (!gen.out.empty() && gen.out != "-") fmt::print("seed={}\n", g.seed.value);
    } else if (determinize->parsed()) {
      const fta::FtaDocument doc = fta::parse_document(read_input(in_path));
      const fta::Dfta dfta = fta::determinize(fta::to_fta(doc));
      if (!out_path.empty()) write_output(out_path, fta::format_document(fta::to_document(dfta)));
      fmt::print("{}\n", fta::det_size(dfta));
    } else if (minimize->parsed()) {
      const fta::CanonicalFta canonical = fta::minimize(load_deterministic(in_path));
      if (!out_path.empty()) write_output(out_path, fta::format_document(fta::to_document(canonical.automaton)));
      fmt::print("{}\n", canonical.size());
    } else if (pipeline->parsed()) {
      const Generated g = run_generate(pipe);
      const fta::Dfta dfta = fta::determinize(g.fta);
      const fta::CanonicalFta canonical = fta::minimize(dfta);
      fmt::print("seed={} trial={} n={} d2={:.6f} attempts={} det_size={} canonical_size={}\n", g.seed.value,
                 pipe.trial, pipe.n, g.d2, g.attempts, fta::det_size(dfta), canonical.size());
    } else if (peak->parsed()) {
      fmt::print("{:.{}f}\n", fta::round_half_up(fta::peak_density(peak_n), digits), digits);
    } else if (sweep->parsed()) {
      const fta::Seed seed = effective_seed(sweep_seed);
      fta::RunOptions options;
      options.threads = threads;
      const fta::Sweep result =
          fta::run_sweep(fta::parse_setting(sweep_setting), sweep_n, steps, trials, seed, options, fit_options(scale));
      write_output(sweep_out, fta::sweep_csv(result));
      const bool to_stdout = sweep_out.empty() || sweep_out == "-";
      auto& summary = to_stdout ? std::cerr : std::cout;
      summary << fmt::format("seed={}\n", seed.value);
      for (auto series : {fta::WeightSeries::kDeterminized, fta::WeightSeries::kCanonical}) {
        const fta::PeakFit& f = result.fit(series);
        summary << fmt::format("{} fit: peak={:.4f} interval=[{:.4f},{:.4f}] sigma={:.4f} predicted={:.4f}\n",
                               series == fta::WeightSeries::kDeterminized ? "det" : "canonical", f.observed_peak,
                               f.lo, f.hi, f.sigma, fta::peak_density(sweep_n));
      }
    } else if (table1->parsed()) {
      if (n_min > n_max) throw fta::ConfigError("--n-min exceeds --n-max");
      const fta::Seed seed = effective_seed(sweep_seed);
      fta::RunOptions options;
      options.threads = threads;
      std::vector<std::size_t> ns;
      for (std::size_t n = n_min; n <= n_max; ++n) ns.push_back(n);
      const auto rows = fta::table_densities(fta::Setting::A, ns, steps, trials, seed, options, fit_options(scale));
      write_output(table_out, fta::densities_csv(rows, seed, steps, trials));
      if (!table_out.empty() && table_out != "-") fmt::print("seed={}\n", seed.value);
    } else if (table2->parsed()) {
      const fta::Seed seed = effective_seed(sweep_seed);
      fta::RunOptions options;
      options.threads = threads;
      const auto densities = fta::reference_trim_densities();
      const auto sizes = fta::reference_trim_sizes();
      const auto cells =
          fta::table_trim(fta::Setting::A, densities, sizes, ratio_trials, seed, include_blank, options);
      write_output(table_out, fta::trim_csv(cells, seed));
      if (!table_out.empty() && table_out != "-") fmt::print("seed={}\n", seed.value);
    } else if (check->parsed()) {
      const fta::Seed seed = effective_seed(sweep_seed);
      const fta::RankedAlphabet alphabet = fta::setting_alphabet(fta::Setting::A);
      std::size_t mismatches = 0;
      for (std::size_t i = 0; i < check_trials; ++i) {
        auto stream = fta::RandomStream::derive(seed, {0xC4ECull, i});
        const std::size_t n = 1 + stream.next() % check_max_n;
        const double d2 = stream.uniform();
        const fta::Fta m = fta::generate_trim(fta::GenConfig(alphabet, n, d2), seed, i).fta;
        const fta::Dfta d = fta::determinize(m);
        const auto reference = fta::language_fingerprint(m, check_height);
        if (reference != fta::language_fingerprint(d, check_height) ||
            reference != fta::language_fingerprint(fta::minimize(d).automaton, check_height)) {
          ++mismatches;
          std::cerr << fmt::format("mismatch at trial {} (n={}, d2={:.6f})\n", i, n, d2);
        }
      }
      fmt::print("seed={} trials={} mismatches={}\n", seed.value, check_trials, mismatches);
      return mismatches == 0 ? kOk : kCheckFailed;
    }
  } catch (const IoError& e) {
    std::cerr << "error: I/O: " << e.what() << '\n';
    return kIo;
  } catch (const fta::ParseError& e) {
    std::cerr << "error: parse: " << e.what() << '\n';
    return kParse;
  } catch (const fta::ExhaustionError& e) {
    std::cerr << "error: generation exhausted: " << e.what() << '\n';
    return kExhausted;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: invalid value: " << e.what() << '\n';
    return kInvalidValue;
  } catch (const std::domain_error& e) {
    std::cerr << "error: invalid value: " << e.what() << '\n';
    return kInvalidValue;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInternal;
  }
  return kOk;
}

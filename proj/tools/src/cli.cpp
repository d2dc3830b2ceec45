#include "spmatch/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "spmatch/alignment.hpp"
#include "spmatch/encoding.hpp"
#include "spmatch/equivalence.hpp"
#include "spmatch/error.hpp"
#include "spmatch/pattern.hpp"
#include "spmatch/pcs.hpp"
#include "spmatch/search.hpp"

namespace spmatch {

namespace {

struct SearchOptions {
  SearchParams params;
  CostModel model;
  std::string cost_mode = "uniform";
  std::optional<std::size_t> max_gap;
  bool drop_nonpositive = false;
  bool verbose = false;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--beam", params.beam_width, "Alignments kept per cycle")->check(CLI::PositiveNumber);
    cmd.add_option("--max-gap", max_gap, "Longest unmatched run between two hits of one row");
    cmd.add_option("--max-cycles", params.max_cycles, "Search cycles")->check(CLI::PositiveNumber);
    cmd.add_option("--max-appearances", params.max_appearances, "Appearances of one Old pattern")
        ->check(CLI::PositiveNumber);
    cmd.add_option("--cost-mode", cost_mode, "Symbol costs")->check(CLI::IsMember({"uniform", "sfe"}));
    cmd.add_option("--actual-bits", model.actual_new_bits, "Size of a raw New symbol")->check(CLI::PositiveNumber);
    cmd.add_option("--min-bits", model.uniform_min_bits, "Code symbol size in uniform mode")
        ->check(CLI::PositiveNumber);
    cmd.add_flag("--drop-nonpositive", drop_nonpositive, "Discard alignments that do not compress");
    cmd.add_flag("--verbose", verbose, "Report search progress on stderr");
  }

  void finish() {
    params.max_gap = max_gap;
    params.keep_nonpositive = !drop_nonpositive;
    model.mode = cost_mode == "sfe" ? CostMode::kSfe : CostMode::kUniform;
  }
};

// A request that cannot be carried out with the given arguments.
class CommandFailure : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

Pattern load_new(const std::string& path) {
  auto patterns = load_patterns(path);
  if (patterns.size() != 1)
    throw FormatError(path + ": expected exactly one New pattern, found " + std::to_string(patterns.size()));
  Pattern p = std::move(patterns.front());
  p.id = "new";
  return p;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

SymbolString parse_input(const std::string& text) {
  auto s = to_symbols(text);
  if (s.empty()) throw FormatError("--input is empty");
  return s;
}

SearchResult search(const Corpus& corpus, const Pattern& new_pattern, const SearchOptions& opts, std::ostream& err) {
  check_cost_model(corpus, opts.model);
  ProgressFn progress;
  if (opts.verbose) progress = [&err](const std::string& line) { err << line << '\n'; };
  return find_alignments(corpus, new_pattern, opts.model, opts.params, progress);
}

int cmd_align(const std::string& old_path, const std::string& new_path, const SearchOptions& opts,
              const std::string& output, std::size_t top, std::ostream& out, std::ostream& err) {
  const Corpus corpus = build_corpus(load_patterns(old_path));
  const Pattern new_pattern = load_new(new_path);
  const auto result = search(corpus, new_pattern, opts, err);
  if (result.ranked.empty()) {
    out << "no alignment found\n";
    return kExitNoResult;
  }
  const std::size_t shown = std::min(top, result.ranked.size());
  for (std::size_t i = 0; i < shown; ++i) {
    const auto& a = result.ranked[i].alignment;
    if (output == "projection") {
      out << to_text(project(a).symbols) << '\n';
      continue;
    }
    if (i > 0) out << '\n';
    out << "#" << i + 1 << ' ' << score_line(evaluate(a, corpus, opts.model)) << '\n';
    if (output == "dump") {
      out << dump(a);
    } else {
      out << render(a) << "projection: " << to_text(project(a).symbols) << '\n';
    }
  }
  return kExitOk;
}

void print_derivation(const Derivation& d, std::ostream& out) {
  out << render_derivation(d);
  out << "generated:\n";
  for (const auto& s : d.generated()) out << "  " << to_text(s) << '\n';
  out << "terminal:\n";
  for (const auto& s : d.terminal()) out << "  " << to_text(s) << '\n';
}

int cmd_pcs_run(const std::string& path, const std::optional<std::string>& input, std::size_t max_steps,
                std::size_t max_strings, std::ostream& out) {
  const PcsSystem sys = load_pcs(path);
  std::vector<SymbolString> starts;
  if (input) {
    starts.push_back(parse_input(*input));
  } else {
    starts = sys.axioms;
  }
  for (std::size_t i = 0; i < starts.size(); ++i) {
    if (i > 0) out << '\n';
    print_derivation(run(sys, starts[i], max_steps, max_strings), out);
  }
  return kExitOk;
}

void print_step(const DerivationStep& st, std::ostream& out) {
  out << to_text(st.input) << "  =>  " << to_text(st.output) << "  [rule " << st.production_index + 1
      << ": " << st.production.text << "]\n";
}

int cmd_pcs_recognize(const std::string& path, const std::string& input, std::size_t max_steps, std::ostream& out) {
  const PcsSystem sys = load_pcs(path);
  const auto r = recognize(sys, parse_input(input), max_steps);
  if (!r.accepted) {
    out << "REJECT\n";
    return kExitNoResult;
  }
  out << "ACCEPT\n";
  for (const auto& st : r.witness) {
    out << "  ";
    print_step(st, out);
  }
  return kExitOk;
}

// The data symbols that follow the first variable marker of the projection,
// or nothing when the marker is absent.
SymbolString next_input(const SymbolString& projection, const std::set<Symbol>& strip, const Symbol& variable) {
  SymbolString out;
  const auto start = std::find(projection.begin(), projection.end(), variable);
  if (start == projection.end()) return out;
  for (auto it = start; it != projection.end(); ++it)
    if (!strip.count(*it)) out.push_back(*it);
  return out;
}

int cmd_rotate_cycle(const std::string& old_path, const std::string& new_path, const std::vector<std::string>& strip,
                     const std::string& variable, std::size_t cycles, const SearchOptions& opts, std::ostream& out,
                     std::ostream& err) {
  if (strip.empty()) throw CommandFailure("--strip needs at least one symbol");
  const Corpus corpus = build_corpus(load_patterns(old_path));
  Pattern current = load_new(new_path);
  std::set<Symbol> service;
  for (const auto& s : strip) service.insert(Symbol(s));

  for (std::size_t cycle = 1;; ++cycle) {
    if (cycle > cycles) {
      out << "halt: cycle limit " << cycles << " reached\n";
      return kExitOk;
    }
    const auto result = search(corpus, current, opts, err);
    if (result.ranked.empty() || new_hit_count(result.ranked.front().alignment) < current.size()) {
      out << "halt: " << to_text(current.symbols) << " cannot be fully matched\n";
      return kExitOk;
    }
    // An alignment can also read New as the output of a step, which leaves
    // the data unchanged. Among those the ranking separates only by their
    // projection text, take the first that moves on.
    const auto& best = result.ranked.front();
    SymbolString next;
    for (const auto& candidate : result.ranked) {
      if (candidate.score_bits != best.score_bits || candidate.alignment.rows.size() != best.alignment.rows.size() ||
          candidate.per_symbol_codes != best.per_symbol_codes)
        break;
      if (new_hit_count(candidate.alignment) < current.size()) continue;
      auto data = next_input(project(candidate.alignment).symbols, service, Symbol(variable));
      if (!data.empty() && data != current.symbols) {
        next = std::move(data);
        break;
      }
    }
    if (next.empty()) {
      out << "halt: no production rewrites " << to_text(current.symbols) << '\n';
      return kExitOk;
    }
    out << "cycle " << cycle << ": " << to_text(next) << '\n';
    current = Pattern("new", next);
  }
}

int cmd_translate(const std::string& path, std::ostream& out) {
  for (const auto& p : pcs_to_patterns(load_pcs(path))) out << render_pattern(p) << '\n';
  return kExitOk;
}

// The first alignment of `align --output dump` output, or the whole text if
// it is a bare dump.
std::string first_dump(const std::string& text) {
  if (text.empty() || text.front() != '#') return text;
  std::istringstream in(text);
  std::string line, body;
  std::getline(in, line);
  while (std::getline(in, line) && !line.empty()) body += line + '\n';
  return body;
}

int cmd_check_equiv(const std::string& pcs_path, const std::string& input, std::optional<std::size_t> rule,
                    const std::string& alignment_path, std::ostream& out) {
  const PcsSystem sys = load_pcs(pcs_path);
  const auto steps = step(sys, parse_input(input));
  const DerivationStep* chosen = nullptr;
  for (const auto& st : steps)
    if (!rule || st.production_index + 1 == *rule) {
      chosen = &st;
      break;
    }
  if (!chosen) throw CommandFailure("no derivation step applies to the input" +
                                    (rule ? " with rule " + std::to_string(*rule) : std::string()));
  const Alignment a = parse_dump(first_dump(read_file(alignment_path)));
  const auto report = validate(a);
  if (!report.valid())
    throw CommandFailure(std::string("alignment is not valid: ") + to_string(report.violations.front().kind) + ": " +
                         report.violations.front().detail);
  out << "step: ";
  print_step(*chosen, out);
  const auto eq = check_step_equivalence(*chosen, a);
  out << render_report(eq);
  return eq.equivalent() ? kExitOk : kExitNoResult;
}

int cmd_psi(unsigned m, unsigned n, std::ostream& out) {
  out << search_space_size(m, n) << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Compression-scored pattern alignment and Post canonical systems", "spmatch"};
  app.require_subcommand(1);

  SearchOptions search_opts;
  std::string old_path, new_path, output = "render";
  std::size_t top = 1;
  auto* align = app.add_subcommand("align", "Find the best alignments of New against Old");
  align->add_option("--old", old_path, "Old pattern file")->required()->check(CLI::ExistingFile);
  align->add_option("--new", new_path, "New pattern file")->required()->check(CLI::ExistingFile);
  align->add_option("--output", output, "What to print for each alignment")
      ->check(CLI::IsMember({"render", "projection", "dump"}));
  align->add_option("--top", top, "How many alignments to print")->check(CLI::PositiveNumber);
  search_opts.add_to(*align);

  std::string pcs_path;
  std::optional<std::string> input;
  std::size_t max_steps = 10, max_strings = 1000;
  auto* pcs_run = app.add_subcommand("pcs-run", "Derive strings from a PCS file");
  pcs_run->add_option("file", pcs_path, "PCS file")->required()->check(CLI::ExistingFile);
  pcs_run->add_option("--input", input, "Start string (default: every axiom)");
  pcs_run->add_option("--max-steps", max_steps, "Derivation depth")->check(CLI::PositiveNumber);
  pcs_run->add_option("--max-strings", max_strings, "Distinct strings to produce")->check(CLI::PositiveNumber);

  std::string word;
  auto* pcs_recognize = app.add_subcommand("pcs-recognize", "Run a PCS backwards from a string to an axiom");
  pcs_recognize->add_option("file", pcs_path, "PCS file")->required()->check(CLI::ExistingFile);
  pcs_recognize->add_option("--input", word, "String to recognise")->required();
  pcs_recognize->add_option("--max-steps", max_steps, "Reverse steps")->check(CLI::PositiveNumber);

  std::vector<std::string> strip;
  std::string variable = "$";
  std::size_t cycles = 10;
  SearchOptions rotate_opts;
  auto* rotate = app.add_subcommand("rotate-cycle", "Repeat alignment, feeding each output back as New");
  rotate->add_option("--old", old_path, "Old pattern file")->required()->check(CLI::ExistingFile);
  rotate->add_option("--new", new_path, "New pattern file")->required()->check(CLI::ExistingFile);
  rotate->add_option("--strip", strip, "Service symbols removed between cycles")->required()->delimiter(',');
  rotate->add_option("--variable", variable, "Symbol opening the variable's contents");
  rotate->add_option("--cycles", cycles, "Maximum number of cycles")->check(CLI::PositiveNumber);
  rotate_opts.add_to(*rotate);

  auto* translate = app.add_subcommand("translate", "Print the Old patterns modelling a normal-form PCS");
  translate->add_option("file", pcs_path, "PCS file")->required()->check(CLI::ExistingFile);

  std::string alignment_path;
  std::optional<std::size_t> rule;
  auto* check = app.add_subcommand("check-equiv", "Check an alignment against one derivation step");
  check->add_option("--pcs", pcs_path, "PCS file")->required()->check(CLI::ExistingFile);
  check->add_option("--input", word, "Input string of the step")->required();
  check->add_option("--rule", rule, "1-based rule number (default: first that applies)")
      ->check(CLI::PositiveNumber);
  check->add_option("--alignment", alignment_path, "Alignment dump file (output of align --output dump; the first alignment is used)")->required()->check(CLI::ExistingFile);

  unsigned m = 0, n = 0;
  auto* psi = app.add_subcommand("psi", "Count the subsequence pairs of two sequences of lengths m and n");
  psi->add_option("m", m, "Length of the first sequence")->required()->check(CLI::Range(1u, 4096u));
  psi->add_option("n", n, "Length of the second sequence")->required()->check(CLI::Range(1u, 4096u));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }

  try {
    if (align->parsed()) {
      search_opts.finish();
      return cmd_align(old_path, new_path, search_opts, output, top, out, err);
    }
    if (pcs_run->parsed()) return cmd_pcs_run(pcs_path, input, max_steps, max_strings, out);
    if (pcs_recognize->parsed()) return cmd_pcs_recognize(pcs_path, word, max_steps, out);
    if (rotate->parsed()) {
      rotate_opts.finish();
      return cmd_rotate_cycle(old_path, new_path, strip, variable, cycles, rotate_opts, out, err);
    }
    if (translate->parsed()) return cmd_translate(pcs_path, out);
    if (check->parsed()) return cmd_check_equiv(pcs_path, word, rule, alignment_path, out);
    if (psi->parsed()) return cmd_psi(m, n, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace spmatch

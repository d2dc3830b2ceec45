// Runs every acceptance criterion and prints one PASS/FAIL line each.
// Exit status is nonzero if any criterion fails.

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "cli_cases.hpp"
#include "figure.hpp"
#include "generators.hpp"
#include "spmatch/cli.hpp"
#include "spmatch/equivalence.hpp"
#include "spmatch/search.hpp"

using namespace spmatch;
using spmatch::support::data_path;
using spmatch::support::fixture_path;
using spmatch::support::read_drawn_alignment;
using spmatch::support::read_text_file;

namespace {

// Collects failure notes for one criterion.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok) notes_.push_back(what);
  }
  bool passed() const { return notes_.empty(); }
  const std::vector<std::string>& notes() const { return notes_; }

 private:
  std::vector<std::string> notes_;
};

Corpus load(const std::string& name) { return build_corpus(load_patterns(fixture_path(name))); }

Pattern new_of(const std::string& text) { return Pattern("new", to_symbols(text)); }

SearchResult search(const Corpus& corpus, const SymbolString& input) {
  return find_alignments(corpus, Pattern("new", input), CostModel{}, SearchParams{});
}

std::string cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  run_cli(args, out, err);
  return out.str();
}

std::set<std::string> texts(const std::vector<SymbolString>& strings) {
  std::set<std::string> out;
  for (const auto& s : strings) out.insert(to_text(s));
  return out;
}

std::size_t new_column(const Alignment& a, std::size_t pos) {
  for (std::size_t c = 0; c < a.columns.size(); ++c)
    for (const auto& cell : a.columns[c].cells)
      if (a.rows[cell.row].is_new && cell.pos == pos) return c;
  return a.columns.size();
}

std::vector<StepCondition> failed_conditions(const EquivalenceReport& r) {
  std::vector<StepCondition> out;
  for (std::size_t i = 0; i < kStepConditionCount; ++i)
    if (!r.conditions[i]) out.push_back(static_cast<StepCondition>(i));
  return out;
}

void sentence_parse(Check& check) {
  const auto result = search(load("sentence_grammar.sp"), to_symbols("j o h n r u n s"));
  check.expect(!result.ranked.empty(), "no alignment");
  if (result.ranked.empty()) return;
  const Alignment& best = result.ranked.front().alignment;
  check.expect(to_text(project(best).symbols) == "S N 0 j o h n #N V 1 r u n s #V #S",
               "projection " + to_text(project(best).symbols));
  check.expect(to_text(extract_code(best)) == "S 0 1 #S", "code " + to_text(extract_code(best)));
}

void rotation(Check& check) {
  const Corpus corpus = load("rotation_old.sp");
  const Alignment drawn = read_drawn_alignment(read_text_file(data_path("rotation_step.txt")), corpus);
  const auto result = search(corpus, to_symbols("a b c b t"));
  check.expect(!result.ranked.empty(), "no alignment");
  if (!result.ranked.empty())
    check.expect(to_text(project(result.ranked.front().alignment).symbols) == to_text(project(drawn).symbols),
                 "projection " + to_text(project(result.ranked.front().alignment).symbols));
  const std::string cycles = cli({"rotate-cycle", "--old", fixture_path("rotation_old.sp"), "--new",
                                  fixture_path("rotation_new.sp"), "--strip", "P,#P,L,#L,$,#$"});
  check.expect(cycles ==
                   "cycle 1: b c b t a\n"
                   "cycle 2: c b t a b\n"
                   "cycle 3: b t a b c\n"
                   "cycle 4: t a b c b\n"
                   "halt: no production rewrites t a b c b\n",
               "rotate-cycle output:\n" + cycles);
}

void compression_arithmetic(Check& check) {
  const Corpus corpus = load("rotation_old.sp");
  const Alignment drawn = read_drawn_alignment(read_text_file(data_path("rotation_step.txt")), corpus);
  const double bits = compression_score(drawn, corpus, CostModel{CostMode::kUniform, 20.0, 4.0});
  check.expect(bits == 72.0, "score " + format_bits(bits));
}

void unary(Check& check) {
  const PcsSystem sys = load_pcs(fixture_path("unary.pcs"));
  const auto generated = texts(run(sys, to_symbols("1"), 4, 1000).generated());
  check.expect(generated == std::set<std::string>{"1", "1 1", "1 1 1", "1 1 1 1", "1 1 1 1 1"}, "generated set");
  check.expect(recognize(sys, to_symbols("1 1 1 1 1"), 10).accepted, "recognize rejected 1 1 1 1 1");

  const auto result = search(load("unary_old.sp"), to_symbols("1 1 1 1 1"));
  check.expect(!result.ranked.empty(), "no alignment");
  if (result.ranked.empty()) return;
  const Alignment& best = result.ranked.front().alignment;
  std::size_t uses = 0;
  for (const auto& row : best.rows)
    if (!row.is_new) uses += to_text(row->symbols) == "$ $ #$ 1 #$";
  check.expect(uses == 5 && best.rows.size() == 6, "pattern used " + std::to_string(uses) + " times");
  check.expect(new_hit_count(best) == 5, "hits " + std::to_string(new_hit_count(best)));
}

void palindrome(Check& check) {
  const PcsSystem sys = load_pcs(fixture_path("palindrome.pcs"));
  check.expect(recognize(sys, to_symbols("a c b a b a b c a"), 10).accepted, "rejected the palindrome");
  check.expect(!recognize(sys, to_symbols("a b"), 3).accepted, "accepted a b");

  const auto result = search(load("palindrome_old.sp"), to_symbols("a c b a b a b c a"));
  check.expect(!result.ranked.empty() && new_hit_count(result.ranked.front().alignment) == 9, "coverage below 9");

  std::size_t count = 0;
  for (const auto& axiom : sys.axioms)
    for (const auto& g : run(sys, axiom, 3, 100000).generated()) {
      check.expect(std::equal(g.begin(), g.end(), g.rbegin()), "not a palindrome: " + to_text(g));
      ++count;
    }
  check.expect(count > sys.axioms.size(), "nothing generated");
}

void psi(Check& check) {
  using boost::multiprecision::cpp_int;
  auto choose = [](unsigned n, unsigned k) {
    cpp_int r = 1;
    for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
  };
  for (unsigned m = 1; m <= 20; ++m)
    for (unsigned n = 1; n <= 20; ++n) {
      cpp_int sum = 0;
      for (unsigned i = 1; i <= m; ++i)
        for (unsigned j = 1; j <= n; ++j) sum += choose(m, i) * choose(n, j);
      const cpp_int closed = ((cpp_int(1) << m) - 1) * ((cpp_int(1) << n) - 1);
      check.expect(search_space_size(m, n) == sum && sum == closed,
                   "psi(" + std::to_string(m) + "," + std::to_string(n) + ")");
    }
  check.expect(search_space_size(2, 2) == 9, "psi(2,2)");
  check.expect(search_space_size(10, 10) == 1046529, "psi(10,10)");
}

// Every input over {a,b,c} of length 1..5 followed by t.
std::vector<SymbolString> rotation_inputs() {
  std::vector<SymbolString> out, level{SymbolString{}};
  for (std::size_t len = 1; len <= 5; ++len) {
    std::vector<SymbolString> next;
    for (const auto& s : level)
      for (const char* x : {"a", "b", "c"}) {
        next.push_back(s);
        next.back().push_back(Symbol(x));
      }
    level = std::move(next);
    out.insert(out.end(), level.begin(), level.end());
  }
  for (auto& s : out) s.push_back(Symbol("t"));
  return out;
}

// Swaps the columns of two New positions whose columns are separated only by hits.
bool swap_adjacent_new_columns(Alignment& a, std::size_t new_length) {
  for (std::size_t k = 0; k + 1 < new_length; ++k) {
    const std::size_t c1 = new_column(a, k), c2 = new_column(a, k + 1);
    if (c1 >= a.columns.size() || c2 >= a.columns.size()) continue;
    if (!a.columns[c1].is_hit() || !a.columns[c2].is_hit()) continue;
    bool only_hits = true;
    for (std::size_t c = c1 + 1; c < c2; ++c) only_hits &= a.columns[c].is_hit();
    if (!only_hits) continue;
    std::swap(a.columns[c1], a.columns[c2]);
    return true;
  }
  return false;
}

// Appends an unmatched extra appearance of `pattern` after the last column.
void inject_unmatched_row(Alignment& a, const Pattern& pattern) {
  std::size_t appearance = 1;
  for (const auto& row : a.rows)
    if (!row.is_new && row->id == pattern.id) ++appearance;
  const std::size_t row = a.rows.size();
  a.rows.push_back(Row{std::make_shared<const Pattern>(pattern), appearance, false});
  for (std::size_t p = 0; p < pattern.size(); ++p) a.columns.push_back(Column{{Cell{row, p}}});
}

void step_equivalence(Check& check) {
  const PcsSystem sys = load_pcs(fixture_path("rotation.pcs"));
  const Corpus corpus = pcs_to_sp(sys);
  std::size_t checked = 0, swapped = 0;
  for (const auto& input : rotation_inputs()) {
    const auto steps = step(sys, input);
    if (steps.size() != 1) {
      check.expect(false, "no single step for " + to_text(input));
      continue;
    }
    const auto result = search(corpus, input);
    if (result.ranked.empty()) {
      check.expect(false, "no alignment for " + to_text(input));
      continue;
    }
    const Alignment& best = result.ranked.front().alignment;
    const auto report = check_step_equivalence(steps[0], best);
    check.expect(report.equivalent(), "not equivalent: " + to_text(input));
    ++checked;

    Alignment swapped_alignment = best;
    if (swap_adjacent_new_columns(swapped_alignment, input.size())) {
      ++swapped;
      check.expect(failed_conditions(check_step_equivalence(steps[0], swapped_alignment)) ==
                       std::vector<StepCondition>{StepCondition::kHitCorrespondence},
                   "swap mutation of " + to_text(input));
    }
    Alignment injected = best;
    inject_unmatched_row(injected, corpus.patterns().front());
    check.expect(validate(injected).valid(), "injected alignment invalid for " + to_text(input));
    check.expect(failed_conditions(check_step_equivalence(steps[0], injected)) ==
                     std::vector<StepCondition>{StepCondition::kNoMismatch},
                 "mismatch mutation of " + to_text(input));
  }
  check.expect(checked == 363, "checked " + std::to_string(checked) + " inputs");
  check.expect(swapped > 0, "no swap mutation applied");
}

// Lays out a two-row alignment for a set of (a position, b position) hits.
Alignment pair_alignment(const SymbolString& a, const SymbolString& b,
                         const std::vector<std::pair<std::size_t, std::size_t>>& hits) {
  Alignment al;
  al.rows.push_back(Row{std::make_shared<const Pattern>("new", a), 1, true});
  al.rows.push_back(Row{std::make_shared<const Pattern>("p", b), 1, false});
  std::vector<bool> b_used(b.size(), false);
  for (const auto& h : hits) b_used[h.second] = true;
  std::size_t j = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto hit = std::find_if(hits.begin(), hits.end(), [&](const auto& h) { return h.first == i; });
    if (hit != hits.end()) {
      for (; j < hit->second; ++j)
        if (!b_used[j]) al.columns.push_back(Column{{Cell{1, j}}});
      al.columns.push_back(Column{{Cell{0, i}, Cell{1, hit->second}}});
      j = std::max(j, hit->second + 1);
    } else {
      al.columns.push_back(Column{{Cell{0, i}}});
    }
  }
  for (std::size_t k = 0; k < b.size(); ++k) {
    const bool placed = std::any_of(al.columns.begin(), al.columns.end(), [&](const Column& c) {
      return std::any_of(c.cells.begin(), c.cells.end(), [&](const Cell& x) { return x.row == 1 && x.pos == k; });
    });
    if (!placed) al.columns.push_back(Column{{Cell{1, k}}});
  }
  return al;
}

void property_suites(Check& check) {
  support::Generator gen(8);
  const std::vector<std::string> names{"a", "b", "c"};

  // Order constraint against brute-force enumeration of pair sets.
  for (int trial = 0; trial < 300; ++trial) {
    const SymbolString a = gen.symbols(gen.between(1, 6), names), b = gen.symbols(gen.between(1, 6), names);
    std::vector<std::pair<std::size_t, std::size_t>> all;
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j)
        if (a[i] == b[j]) all.emplace_back(i, j);
    if (all.size() > 12) continue;
    for (std::uint32_t mask = 1; mask < (1u << all.size()); ++mask) {
      std::vector<std::pair<std::size_t, std::size_t>> hits;
      std::set<std::size_t> is, js;
      for (std::size_t k = 0; k < all.size(); ++k)
        if (mask >> k & 1) hits.push_back(all[k]);
      for (const auto& h : hits) is.insert(h.first), js.insert(h.second);
      if (is.size() != hits.size() || js.size() != hits.size()) continue;
      bool crossing = false;
      for (std::size_t x = 0; x < hits.size(); ++x)
        for (std::size_t y = 0; y < hits.size(); ++y)
          crossing |= hits[x].first < hits[y].first && hits[x].second > hits[y].second;
      const auto report = validate(pair_alignment(a, b, hits));
      if (crossing)
        check.expect(report.has(ViolationKind::kOrderConstraint), "crossing accepted: " + to_text(a) + " / " + to_text(b));
      else
        check.expect(report.valid(), "ordered rejected: " + to_text(a) + " / " + to_text(b));
    }
  }

  // Projection keeps every row in order on search outputs.
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Pattern> ps;
    for (std::size_t i = 0, n = gen.between(1, 4); i < n; ++i)
      ps.emplace_back("p" + std::to_string(i), gen.symbols(gen.between(1, 5), names), gen.between(1, 5));
    SearchParams params;
    params.beam_width = 8;
    params.max_cycles = 3;
    const auto result =
        find_alignments(build_corpus(ps), Pattern("new", gen.symbols(gen.between(1, 6), names)), CostModel{}, params);
    for (const auto& r : result.ranked) {
      check.expect(validate(r.alignment).valid() && !has_old_old_mismatch(r.alignment), "invalid search output");
      const SymbolString proj = project(r.alignment).symbols;
      for (const auto& row : r.alignment.rows) {
        std::size_t j = 0;
        for (const auto& s : proj)
          if (j < row->size() && (*row)[j] == s) ++j;
        check.expect(j == row->size(), "projection loses row order");
      }
    }
  }

  // sfe monotonicity and frequency-scale invariance.
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Pattern> ps, scaled;
    const std::uint64_t factor = gen.between(2, 7);
    for (std::size_t i = 0, n = gen.between(1, 5); i < n; ++i) {
      ps.emplace_back("p" + std::to_string(i), gen.symbols(gen.between(1, 6), 6), gen.between(1, 40));
      scaled.push_back(ps.back());
      scaled.back().frequency *= factor;
    }
    const Corpus one = build_corpus(ps), many = build_corpus(scaled);
    const CostModel model{CostMode::kSfe, 40.0, 4.0};
    for (const auto& [s, fs] : one.symbol_frequency()) {
      const double cs = symbol_min_bits(one, model, s);
      check.expect(std::abs(cs - symbol_min_bits(many, model, s)) < 1e-9, "scale changed cost of " + s.name());
      for (const auto& [t, ft] : one.symbol_frequency())
        if (fs < ft) check.expect(cs > symbol_min_bits(one, model, t), "rarer symbol not dearer");
    }
  }

  // Nonsense alignments are mismatches and never come out of search.
  const Corpus nonsense = build_corpus({Pattern("p1", to_symbols("a x b")), Pattern("p2", to_symbols("a y b"))});
  Alignment inner;
  inner.rows.push_back(Row{std::make_shared<const Pattern>(new_of("a b")), 1, true});
  inner.rows.push_back(Row{std::make_shared<const Pattern>(nonsense.patterns()[0]), 1, false});
  inner.rows.push_back(Row{std::make_shared<const Pattern>(nonsense.patterns()[1]), 1, false});
  inner.columns = {Column{{{0, 0}, {1, 0}, {2, 0}}}, Column{{{1, 1}}}, Column{{{2, 1}}},
                   Column{{{0, 1}, {1, 2}, {2, 2}}}};
  check.expect(validate(inner).valid() && has_old_old_mismatch(inner), "nonsense alignment not flagged");
  for (const auto& r : find_alignments(nonsense, new_of("a b"), CostModel{}, SearchParams{}).ranked) {
    check.expect(!has_old_old_mismatch(r.alignment), "search kept a mismatch");
    check.expect(r.alignment.rows.size() <= 2, "search combined both nonsense rows");
  }
}

std::string run_binary(const std::vector<std::string>& args) {
  std::string command = SPMATCH_CLI_PATH;
  for (const auto& a : args) command += " '" + a + "'";
  command += " 2>&1; echo \"exit=$?\"";
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(command.c_str(), "r"), pclose);
  if (!pipe) return "popen failed";
  std::string out;
  std::array<char, 4096> buffer{};
  for (std::size_t n; (n = std::fread(buffer.data(), 1, buffer.size(), pipe.get())) > 0;) out.append(buffer.data(), n);
  return out;
}

void determinism(Check& check) {
  const auto dir = std::filesystem::temp_directory_path() / "spmatch_acceptance";
  std::filesystem::create_directories(dir);
  const std::string dump_path = (dir / "rotation.dump").string();
  std::ofstream(dump_path) << cli({"align", "--old", fixture_path("rotation_old.sp"), "--new",
                                   fixture_path("rotation_new.sp"), "--output", "dump"});
  std::set<std::string> covered;
  for (const auto& args : support::fixture_command_lines(dump_path)) {
    const std::string first = run_binary(args), second = run_binary(args);
    check.expect(first == second, "output differs: " + args[0] + " " + args[1]);
    check.expect(first.find("exit=1") == std::string::npos, "input error: " + args[0] + " " + args[1]);
    covered.insert(args[0]);
  }
  check.expect(covered.size() == 7, "subcommands covered: " + std::to_string(covered.size()));
  std::filesystem::remove_all(dir);
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* name;
    std::function<void(Check&)> body;
  };
  const std::vector<Criterion> criteria{
      {1, "sentence-parse", sentence_parse},
      {2, "rotation", rotation},
      {3, "compression-arithmetic", compression_arithmetic},
      {4, "unary", unary},
      {5, "palindrome", palindrome},
      {6, "search-space-size", psi},
      {7, "step-equivalence", step_equivalence},
      {8, "property-suites", property_suites},
      {9, "determinism", determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Check check;
    try {
      c.body(check);
    } catch (const std::exception& e) {
      check.expect(false, std::string("exception: ") + e.what());
    }
    std::cout << "criterion " << c.number << " " << c.name << ": " << (check.passed() ? "PASS" : "FAIL") << '\n';
    for (std::size_t i = 0; i < std::min<std::size_t>(check.notes().size(), 10); ++i)
      std::cout << "  " << check.notes()[i] << '\n';
    if (check.notes().size() > 10) std::cout << "  ... " << check.notes().size() - 10 << " more\n";
    std::cout.flush();
    failures += !check.passed();
  }
  return failures == 0 ? 0 : 1;
}

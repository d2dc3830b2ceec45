#include <gtest/gtest.h>

#include <algorithm>
#include <memory>
#include <sstream>

#include "figure.hpp"
#include "spmatch/equivalence.hpp"
#include "spmatch/error.hpp"
#include "spmatch/search.hpp"

using namespace spmatch;
using spmatch::support::data_path;
using spmatch::support::fixture_path;
using spmatch::support::read_drawn_alignment;
using spmatch::support::read_text_file;

namespace {

constexpr std::array kAll{StepCondition::kNoMismatch, StepCondition::kInputMapping, StepCondition::kInputOrder,
                          StepCondition::kProductionMapping, StepCondition::kHitCorrespondence};

Corpus load(const std::string& name) { return build_corpus(load_patterns(fixture_path(name))); }

Alignment rotation_drawing() {
  return read_drawn_alignment(read_text_file(data_path("rotation_step.txt")), load("rotation_old.sp"));
}

DerivationStep rotation_step(const std::string& input) {
  const auto steps = step(load_pcs(fixture_path("rotation.pcs")), to_symbols(input));
  if (steps.size() != 1) throw std::runtime_error("expected one step for " + input);
  return steps.front();
}

std::vector<StepCondition> failed(const EquivalenceReport& r) {
  std::vector<StepCondition> out;
  for (auto c : kAll)
    if (!r.passed(c)) out.push_back(c);
  return out;
}

// Column holding New position `pos`.
std::size_t new_column(const Alignment& a, std::size_t pos) {
  for (std::size_t c = 0; c < a.columns.size(); ++c)
    for (const auto& cell : a.columns[c].cells)
      if (a.rows[cell.row].is_new && cell.pos == pos) return c;
  throw std::runtime_error("no column for New position");
}

Alignment best_alignment(const Corpus& corpus, const SymbolString& input) {
  const auto result = find_alignments(corpus, Pattern("new", input), CostModel{}, SearchParams{});
  if (result.ranked.empty()) throw std::runtime_error("no alignment");
  return result.ranked.front().alignment;
}

}  // namespace

TEST(CheckStepEquivalence, RotationDrawingModelsTheStep) {
  const Alignment a = rotation_drawing();
  ASSERT_TRUE(validate(a).valid());
  const auto report = check_step_equivalence(rotation_step("a b c b t"), a);
  EXPECT_TRUE(report.equivalent()) << render_report(report);
  EXPECT_TRUE(report.diagnostics.empty());
  EXPECT_EQ(render_report(report),
            "no-mismatch: PASS\n"
            "symbol-mapping-of-I: PASS\n"
            "order-of-I: PASS\n"
            "production-mapping: PASS\n"
            "hit-column-correspondence: PASS\n"
            "equivalent: yes\n");
}

TEST(CheckStepEquivalence, SwappedHitColumnsFailOnlyCorrespondence) {
  Alignment a = rotation_drawing();
  std::swap(a.columns[new_column(a, 1)], a.columns[new_column(a, 2)]);
  const auto report = check_step_equivalence(rotation_step("a b c b t"), a);
  EXPECT_EQ(failed(report), std::vector<StepCondition>{StepCondition::kHitCorrespondence}) << render_report(report);
  EXPECT_FALSE(report.equivalent());
  ASSERT_EQ(report.diagnostics.size(), 1u);
  EXPECT_EQ(report.diagnostics[0].rfind("hit-column-correspondence: ", 0), 0u);
}

TEST(CheckStepEquivalence, InjectedOldSingleFailsOnlyNoMismatch) {
  Alignment a = rotation_drawing();
  // A second "L c #L" sitting unmatched beside row 1's trailing "a #P".
  const Corpus corpus = load("rotation_old.sp");
  const std::size_t row = a.rows.size();
  a.rows.push_back(Row{std::make_shared<const Pattern>(*corpus.find("p3")), 2, false});
  for (std::size_t p = 0; p < 3; ++p) a.columns.push_back(Column{{Cell{row, p}}});
  ASSERT_TRUE(validate(a).valid());
  const auto report = check_step_equivalence(rotation_step("a b c b t"), a);
  EXPECT_EQ(failed(report), std::vector<StepCondition>{StepCondition::kNoMismatch}) << render_report(report);
}

TEST(CheckStepEquivalence, SentenceParseLacksTheInput) {
  const Alignment a = read_drawn_alignment(read_text_file(data_path("sentence_parse.txt")), load("sentence_grammar.sp"));
  const auto report = check_step_equivalence(rotation_step("a b c b t"), a);
  EXPECT_FALSE(report.equivalent());
  EXPECT_FALSE(report.passed(StepCondition::kInputMapping));
  EXPECT_TRUE(report.passed(StepCondition::kNoMismatch));
  EXPECT_NE(render_report(report).find("symbol-mapping-of-I: FAIL"), std::string::npos);
  EXPECT_NE(render_report(report).find("equivalent: no"), std::string::npos);
}

TEST(CheckStepEquivalence, WrongProductionFails) {
  const auto report = check_step_equivalence(rotation_step("b c b t a"), rotation_drawing());
  EXPECT_FALSE(report.equivalent());
  EXPECT_FALSE(report.passed(StepCondition::kProductionMapping));
}

TEST(CheckStepEquivalence, InvariantUnderIdRenaming) {
  const DerivationStep st = rotation_step("a b c b t");
  Alignment a = rotation_drawing();
  const std::string before = render_report(check_step_equivalence(st, a));
  for (auto& row : a.rows) {
    Pattern renamed = *row.pattern;
    renamed.id = "renamed_" + renamed.id;
    row.pattern = std::make_shared<const Pattern>(renamed);
  }
  EXPECT_EQ(render_report(check_step_equivalence(st, a)), before);

  Alignment broken = rotation_drawing();
  std::swap(broken.columns[new_column(broken, 1)], broken.columns[new_column(broken, 2)]);
  const std::string broken_before = render_report(check_step_equivalence(st, broken));
  for (auto& row : broken.rows) {
    Pattern renamed = *row.pattern;
    renamed.id = "x" + renamed.id;
    row.pattern = std::make_shared<const Pattern>(renamed);
  }
  EXPECT_EQ(render_report(check_step_equivalence(st, broken)), broken_before);
}

TEST(PcsToSp, RotationMatchesTheFixture) {
  const PcsSystem sys = load_pcs(fixture_path("rotation.pcs"));
  const auto patterns = pcs_to_patterns(sys);
  ASSERT_EQ(patterns.size(), sys.alphabet.size() + sys.productions.size() + 1);
  std::string text;
  for (const auto& p : patterns) text += render_pattern(p) + "\n";
  EXPECT_EQ(text, read_text_file(fixture_path("rotation_old.sp")));
  EXPECT_EQ(patterns.front().id, "p1");
  EXPECT_EQ(pcs_to_sp(sys).patterns().size(), 8u);
}

TEST(PcsToSp, NonNormalFormIsUnsupported) {
  EXPECT_THROW(pcs_to_sp(load_pcs(fixture_path("palindrome.pcs"))), UnsupportedFormError);
}

TEST(PcsToSp, EmptyPrefixIsStillNormalForm) {
  const Corpus corpus = pcs_to_sp(load_pcs(fixture_path("unary.pcs")));
  ASSERT_EQ(corpus.patterns().size(), 3u);
  EXPECT_EQ(to_text(corpus.patterns()[0].symbols), "L 1 #L");
  EXPECT_EQ(to_text(corpus.patterns()[1].symbols), "P $ #$ 1 #P");
  EXPECT_EQ(to_text(corpus.patterns()[2].symbols), "$ L #L $ #$ #$");
}

TEST(PcsToSp, TwoSymbolPrefixRoundTrip) {
  std::istringstream in("alphabet: a b c\naxiom: a b c\nrule: a b $ -> $ c\n");
  const PcsSystem sys = read_pcs(in);
  const Corpus corpus = pcs_to_sp(sys);
  ASSERT_EQ(corpus.patterns().size(), 5u);
  EXPECT_EQ(to_text(corpus.patterns()[3].symbols), "P a b $ #$ c #P");

  const auto steps = step(sys, to_symbols("a b c"));
  ASSERT_EQ(steps.size(), 1u);
  EXPECT_EQ(to_text(steps[0].output), "c c");
  const Alignment best = best_alignment(corpus, steps[0].input);
  const auto report = check_step_equivalence(steps[0], best);
  EXPECT_TRUE(report.equivalent()) << render(best) << render_report(report);
}

TEST(EquivalenceProperties, ShortRotationInputsAreModelled) {
  const PcsSystem sys = load_pcs(fixture_path("rotation.pcs"));
  const Corpus corpus = pcs_to_sp(sys);
  std::vector<SymbolString> inputs{SymbolString{}};
  for (std::size_t len = 1; len <= 3; ++len)
    for (std::size_t k = 0, n = inputs.size(); k < n; ++k)
      if (inputs[k].size() == len - 1)
        for (const char* s : {"a", "b", "c"}) {
          inputs.push_back(inputs[k]);
          inputs.back().push_back(Symbol(s));
        }
  std::size_t checked = 0;
  for (auto input : inputs) {
    if (input.empty()) continue;
    input.push_back(Symbol("t"));
    const auto steps = step(sys, input);
    ASSERT_EQ(steps.size(), 1u);
    const auto report = check_step_equivalence(steps[0], best_alignment(corpus, input));
    EXPECT_TRUE(report.equivalent()) << to_text(input) << "\n" << render_report(report);
    ++checked;
  }
  EXPECT_EQ(checked, 3u + 9 + 27);
}

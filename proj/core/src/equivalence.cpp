#include "spmatch/equivalence.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>

#include "spmatch/error.hpp"

namespace spmatch {

namespace {

const Symbol kVarOpen{"$"};
const Symbol kVarClose{"#$"};

// Leftmost embedding of `needle` as a subsequence of `hay`.
std::optional<std::vector<std::size_t>> embed(const SymbolString& needle, const SymbolString& hay) {
  std::vector<std::size_t> at;
  std::size_t j = 0;
  for (const auto& s : needle) {
    while (j < hay.size() && !(hay[j] == s)) ++j;
    if (j == hay.size()) return std::nullopt;
    at.push_back(j++);
  }
  return at;
}

SymbolString production_markers(const Production& p) {
  SymbolString out = p.leading();
  out.push_back(kVarOpen);
  out.push_back(kVarClose);
  for (auto& s : p.trailing()) out.push_back(s);
  return out;
}

std::string join_indices(const std::vector<std::size_t>& v) {
  std::string out;
  for (auto x : v) out += (out.empty() ? "" : ",") + std::to_string(x);
  return out;
}

}  // namespace

const char* to_string(StepCondition condition) {
  switch (condition) {
    case StepCondition::kNoMismatch: return "no-mismatch";
    case StepCondition::kInputMapping: return "symbol-mapping-of-I";
    case StepCondition::kInputOrder: return "order-of-I";
    case StepCondition::kProductionMapping: return "production-mapping";
    case StepCondition::kHitCorrespondence: return "hit-column-correspondence";
  }
  return "unknown";
}

bool EquivalenceReport::equivalent() const {
  return std::all_of(conditions.begin(), conditions.end(), [](bool b) { return b; });
}

EquivalenceReport check_step_equivalence(const DerivationStep& step, const Alignment& a) {
  EquivalenceReport report;
  auto record = [&](StepCondition c, bool ok, const std::string& why) {
    report.conditions[static_cast<std::size_t>(c)] = ok;
    if (!ok) report.diagnostics.push_back(std::string(to_string(c)) + ": " + why);
  };

  {
    std::vector<std::size_t> offending;
    for (const auto& m : scan_mismatches(a))
      if (m.kind == MismatchKind::kOldOld)
        offending.insert(offending.end(), m.offending_columns.begin(), m.offending_columns.end());
    record(StepCondition::kNoMismatch, offending.empty(),
           "unmatched Old symbols from different rows share columns " + join_indices(offending));
  }

  const Row* new_row = nullptr;
  std::size_t new_index = 0;
  for (std::size_t r = 0; r < a.rows.size(); ++r)
    if (a.rows[r].is_new) {
      new_row = &a.rows[r];
      new_index = r;
      break;
    }
  const SymbolString empty;
  const SymbolString& new_symbols = new_row ? (*new_row)->symbols : empty;

  {
    std::map<Symbol, std::size_t> available;
    for (const auto& s : new_symbols) ++available[s];
    std::vector<std::string> missing;
    for (const auto& s : step.input)
      if (available[s]-- == 0) missing.push_back(s.name());
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : " ") + m;
    record(StepCondition::kInputMapping, missing.empty(), "New lacks input symbols: " + list);
  }

  const auto input_at = embed(step.input, new_symbols);
  record(StepCondition::kInputOrder, input_at.has_value(), "input is not a subsequence of New");

  const SymbolString markers = production_markers(step.production);
  std::optional<std::size_t> production_row;
  std::vector<std::size_t> production_at;
  for (std::size_t r = 0; r < a.rows.size() && !production_row; ++r) {
    if (a.rows[r].is_new) continue;
    if (auto at = embed(markers, a.rows[r]->symbols)) {
      production_row = r;
      production_at = std::move(*at);
    }
  }
  record(StepCondition::kProductionMapping, production_row.has_value(),
         "no Old row contains \"" + to_text(markers) + "\" in order");

  {
    std::string why;
    if (!input_at) {
      why = "input has no place in New";
    } else {
      std::map<Cell, std::size_t> column_of;
      for (std::size_t c = 0; c < a.columns.size(); ++c)
        for (const auto& cell : a.columns[c].cells) column_of[cell] = c;
      const std::size_t fixed = step.production.leading().size();
      std::optional<std::size_t> previous;
      for (std::size_t i = 0; i < step.input.size() && why.empty(); ++i) {
        const Cell new_cell{new_index, (*input_at)[i]};
        const auto found = column_of.find(new_cell);
        if (found == column_of.end()) {
          why = "input symbol " + std::to_string(i) + " has no column";
          break;
        }
        const std::size_t col = found->second;
        const auto& cells = a.columns[col].cells;
        bool matched = false;
        if (i < fixed) {
          if (production_row) {
            const Cell want{*production_row, production_at[i]};
            matched = std::find(cells.begin(), cells.end(), want) != cells.end();
          }
        } else {
          matched = std::any_of(cells.begin(), cells.end(), [&](const Cell& c) {
            return c.row != new_index && a.symbol(c) == step.input[i];
          });
        }
        if (!matched) {
          why = "input symbol " + std::to_string(i) + " (" + step.input[i].name() + ") is not matched in column " +
                std::to_string(col);
        } else if (previous && col <= *previous) {
          why = "hit column " + std::to_string(col) + " for input symbol " + std::to_string(i) +
                " does not follow column " + std::to_string(*previous);
        }
        previous = col;
      }
    }
    record(StepCondition::kHitCorrespondence, why.empty(), why);
  }
  return report;
}

std::string render_report(const EquivalenceReport& report) {
  std::ostringstream out;
  for (std::size_t i = 0; i < kStepConditionCount; ++i)
    out << to_string(static_cast<StepCondition>(i)) << ": " << (report.conditions[i] ? "PASS" : "FAIL") << '\n';
  for (const auto& d : report.diagnostics) out << "  " << d << '\n';
  out << "equivalent: " << (report.equivalent() ? "yes" : "no") << '\n';
  return out.str();
}

std::vector<Pattern> pcs_to_patterns(const PcsSystem& sys) {
  for (const auto& p : sys.productions)
    if (!p.is_normal_form()) throw UnsupportedFormError("production \"" + p.text + "\" is not of the form g $ -> $ h");
  std::vector<Pattern> out;
  auto add = [&](SymbolString symbols) {
    out.emplace_back("p" + std::to_string(out.size() + 1), std::move(symbols));
  };
  const Symbol open_l{"L"}, close_l{"#L"}, open_p{"P"}, close_p{"#P"};
  for (const auto& x : sys.alphabet) add({open_l, x, close_l});
  for (const auto& p : sys.productions) {
    SymbolString s{open_p};
    for (auto& x : production_markers(p)) s.push_back(std::move(x));
    s.push_back(close_p);
    add(std::move(s));
  }
  add({kVarOpen, open_l, close_l, kVarOpen, kVarClose, kVarClose});
  return out;
}

Corpus pcs_to_sp(const PcsSystem& sys) { return build_corpus(pcs_to_patterns(sys)); }

}  // namespace spmatch

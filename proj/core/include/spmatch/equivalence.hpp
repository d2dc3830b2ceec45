#pragma once

#include <array>
#include <string>
#include <vector>

#include "spmatch/alignment.hpp"
#include "spmatch/pattern.hpp"
#include "spmatch/pcs.hpp"

namespace spmatch {

enum class StepCondition {
  kNoMismatch,
  kInputMapping,
  kInputOrder,
  kProductionMapping,
  kHitCorrespondence,
};

inline constexpr std::size_t kStepConditionCount = 5;

/// "no-mismatch", "symbol-mapping-of-I", ...
const char* to_string(StepCondition condition);

struct EquivalenceReport {
  std::array<bool, kStepConditionCount> conditions{};
  /// One line per failed condition, prefixed by the condition name.
  std::vector<std::string> diagnostics;

  bool passed(StepCondition c) const { return conditions[static_cast<std::size_t>(c)]; }
  bool equivalent() const;
};

/// Checks whether the alignment models the derivation step: the step's input
/// sits in New in order, the production "g $ #$ h" sits in one Old row, and
/// every matched input symbol lands in its own hit column with columns in
/// input order. All five conditions are always evaluated.
EquivalenceReport check_step_equivalence(const DerivationStep& step, const Alignment& alignment);

/// Five "<name>: PASS|FAIL" lines, then the diagnostics.
std::string render_report(const EquivalenceReport& report);

/// Old patterns for a normal-form system: "L x #L" per alphabet symbol,
/// "P g $ #$ h #P" per production and the bridge "$ L #L $ #$ #$", with ids
/// p1, p2, ... in that order. Throws UnsupportedFormError on any production
/// not of the form g $ -> $ h.
std::vector<Pattern> pcs_to_patterns(const PcsSystem& sys);
Corpus pcs_to_sp(const PcsSystem& sys);

}  // namespace spmatch

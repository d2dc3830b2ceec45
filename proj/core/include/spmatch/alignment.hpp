#pragma once

#include <compare>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spmatch/pattern.hpp"

namespace spmatch {

/// One symbol slot: position `pos` of the pattern in row `row`.
struct Cell {
  std::size_t row = 0;
  std::size_t pos = 0;

  friend auto operator<=>(const Cell&, const Cell&) = default;
};

/// An appearance of a pattern. Row 0 holds New; every other row is an Old
/// pattern, and the same pattern may appear several times (ordinals 1..k).
struct Row {
  std::shared_ptr<const Pattern> pattern;
  std::size_t appearance = 1;
  bool is_new = false;

  const Pattern& operator*() const { return *pattern; }
  const Pattern* operator->() const { return pattern.get(); }
};

/// Symbols placed in one column. Two or more cells make a hit column.
struct Column {
  std::vector<Cell> cells;

  bool is_hit() const noexcept { return cells.size() >= 2; }
};

/// Rows plus an ordered sequence of columns. Plain value; validity is
/// checked by validate(), not enforced on construction.
struct Alignment {
  std::vector<Row> rows;
  std::vector<Column> columns;

  const Symbol& symbol(const Cell& c) const { return rows[c.row].pattern->symbols[c.pos]; }
  bool column_has_new(std::size_t col) const;
  bool column_has_old(std::size_t col) const;
};

/// New on its own: one row, one single-symbol column per symbol.
Alignment new_only_alignment(const Pattern& new_pattern);

enum class ViolationKind {
  kNewRow,            // row 0 must be the only New row
  kAppearanceOrdinal, // ordinals of one pattern must run 1..k
  kBadCell,           // empty column or cell outside its row
  kMissingPosition,
  kDuplicatePosition,
  kSameRowTwice,      // one column holds two symbols of the same row
  kHeterogeneousHit,  // hit column with differing symbol types
  kSelfMatch,         // two appearances of a pattern matched at the same position
  kOrderConstraint,   // crossing matches between two rows
  kColumnOrder,       // column sequence disagrees with a row's own order
};

const char* to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string detail;
};

struct ValidityReport {
  std::vector<Violation> violations;

  bool valid() const noexcept { return violations.empty(); }
  bool has(ViolationKind kind) const;
};

ValidityReport validate(const Alignment& alignment);

enum class MismatchKind {
  kOldOld,      // single Old symbols from two or more rows share a hit-free span
  kNewResidue,  // unmatched New symbols; permitted, they just stay unencoded
};

/// A maximal span without hits, bounded by hit columns or by an edge of the
/// alignment (nullopt).
struct Mismatch {
  MismatchKind kind;
  std::optional<std::size_t> left_hit;
  std::optional<std::size_t> right_hit;
  std::vector<std::size_t> offending_columns;
};

/// Throws ContractError if the alignment is not valid.
std::vector<Mismatch> detect_mismatches(const Alignment& alignment);

/// Span scan without the validity precondition; cells must be in range.
std::vector<Mismatch> scan_mismatches(const Alignment& alignment);
bool has_old_old_mismatch(const Alignment& alignment);

/// True when every pair of columns holding Old symbols is ordered by the rows
/// themselves, i.e. no column order of Old material is an arbitrary choice.
/// Stronger than the absence of span mismatches. Requires a valid alignment.
bool old_material_ordered(const Alignment& alignment);

/// Flattens the alignment into one sequence, one symbol per column.
/// Throws ProjectionError on an Old-Old mismatch.
Pattern project(const Alignment& alignment);

/// Re-derives column order and row numbering from the hit structure alone:
/// New-only columns as early as the rows allow, Old rows numbered by where
/// they sit. Two alignments with the same structure get the same form.
Alignment canonical_form(const Alignment& alignment);

/// A string that is equal for two alignments iff their canonical forms match.
std::string structure_key(const Alignment& canonical);

/// Number of New symbols that sit in hit columns.
std::size_t new_hit_count(const Alignment& alignment);

/// Display form: one line per row with the row index at both ends and lines
/// of '|' tying hits together. Each column is as wide as its widest token
/// plus one space.
std::string render(const Alignment& alignment);

/// Machine form: "row <i> <id> <appearance>: <tokens>" lines, then one
/// "<col>: <row>@<pos>,..." line per column.
std::string dump(const Alignment& alignment);
Alignment parse_dump(std::string_view text);

}  // namespace spmatch

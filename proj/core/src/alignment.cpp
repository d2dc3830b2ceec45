#include "spmatch/alignment.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "order.hpp"
#include "spmatch/error.hpp"

namespace spmatch {

namespace detail {

std::vector<std::vector<std::size_t>> column_index(const Alignment& a) {
  std::vector<std::vector<std::size_t>> col_of(a.rows.size());
  for (std::size_t r = 0; r < a.rows.size(); ++r) col_of[r].assign(a.rows[r]->size(), kNoColumn);
  for (std::size_t c = 0; c < a.columns.size(); ++c)
    for (const auto& cell : a.columns[c].cells) col_of[cell.row][cell.pos] = c;
  return col_of;
}

std::vector<Bits> reach_after(const Alignment& a, const std::vector<std::vector<std::size_t>>& col_of) {
  const std::size_t n = a.columns.size();
  std::vector<Bits> after(n, Bits(n));
  for (std::size_t c = n; c-- > 0;) {
    for (const auto& cell : a.columns[c].cells) {
      if (cell.pos + 1 >= col_of[cell.row].size()) continue;
      const std::size_t next = col_of[cell.row][cell.pos + 1];
      after[c].set(next);
      after[c] |= after[next];
    }
  }
  return after;
}

std::vector<Bits> reach_before(const std::vector<Bits>& after, std::size_t n) {
  std::vector<Bits> before(n, Bits(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (after[i].test(j)) before[j].set(i);
  return before;
}

}  // namespace detail

bool Alignment::column_has_new(std::size_t col) const {
  return std::any_of(columns[col].cells.begin(), columns[col].cells.end(),
                     [&](const Cell& c) { return rows[c.row].is_new; });
}

bool Alignment::column_has_old(std::size_t col) const {
  return std::any_of(columns[col].cells.begin(), columns[col].cells.end(),
                     [&](const Cell& c) { return !rows[c.row].is_new; });
}

Alignment new_only_alignment(const Pattern& new_pattern) {
  Alignment a;
  a.rows.push_back(Row{std::make_shared<const Pattern>(new_pattern), 1, true});
  for (std::size_t i = 0; i < new_pattern.size(); ++i) a.columns.push_back(Column{{Cell{0, i}}});
  return a;
}

const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kNewRow: return "new-row";
    case ViolationKind::kAppearanceOrdinal: return "appearance-ordinal";
    case ViolationKind::kBadCell: return "bad-cell";
    case ViolationKind::kMissingPosition: return "missing-position";
    case ViolationKind::kDuplicatePosition: return "duplicate-position";
    case ViolationKind::kSameRowTwice: return "same-row-twice";
    case ViolationKind::kHeterogeneousHit: return "heterogeneous-hit";
    case ViolationKind::kSelfMatch: return "self-match";
    case ViolationKind::kOrderConstraint: return "order-constraint";
    case ViolationKind::kColumnOrder: return "column-order";
  }
  return "unknown";
}

bool ValidityReport::has(ViolationKind kind) const {
  return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.kind == kind; });
}

ValidityReport validate(const Alignment& a) {
  ValidityReport report;
  auto add = [&](ViolationKind k, std::string detail) { report.violations.push_back({k, std::move(detail)}); };

  if (a.rows.empty() || !a.rows[0].is_new) add(ViolationKind::kNewRow, "row 0 must hold New");
  for (std::size_t r = 0; r < a.rows.size(); ++r) {
    if (!a.rows[r].pattern) {
      add(ViolationKind::kBadCell, "row " + std::to_string(r) + " has no pattern");
      return report;
    }
    if (r > 0 && a.rows[r].is_new) add(ViolationKind::kNewRow, "row " + std::to_string(r) + " is marked New");
  }

  std::map<std::string, std::vector<std::size_t>> ordinals;
  for (std::size_t r = 1; r < a.rows.size(); ++r) ordinals[a.rows[r]->id].push_back(a.rows[r].appearance);
  for (auto& [id, ords] : ordinals) {
    std::sort(ords.begin(), ords.end());
    for (std::size_t k = 0; k < ords.size(); ++k)
      if (ords[k] != k + 1) {
        add(ViolationKind::kAppearanceOrdinal, "appearances of '" + id + "' are not numbered 1.." + std::to_string(ords.size()));
        break;
      }
  }

  // Coverage.
  std::vector<std::vector<int>> seen(a.rows.size());
  for (std::size_t r = 0; r < a.rows.size(); ++r) seen[r].assign(a.rows[r]->size(), 0);
  bool cells_ok = true;
  for (std::size_t c = 0; c < a.columns.size(); ++c) {
    const auto& cells = a.columns[c].cells;
    if (cells.empty()) {
      add(ViolationKind::kBadCell, "column " + std::to_string(c) + " is empty");
      cells_ok = false;
    }
    for (const auto& cell : cells) {
      if (cell.row >= a.rows.size() || cell.pos >= a.rows[cell.row]->size()) {
        add(ViolationKind::kBadCell, "column " + std::to_string(c) + " references a missing position");
        cells_ok = false;
        continue;
      }
      ++seen[cell.row][cell.pos];
    }
  }
  if (!cells_ok) return report;
  bool coverage_ok = true;
  for (std::size_t r = 0; r < a.rows.size(); ++r)
    for (std::size_t p = 0; p < seen[r].size(); ++p) {
      const std::string where = std::to_string(r) + "@" + std::to_string(p);
      if (seen[r][p] == 0) {
        add(ViolationKind::kMissingPosition, where + " is in no column");
        coverage_ok = false;
      } else if (seen[r][p] > 1) {
        add(ViolationKind::kDuplicatePosition, where + " is in " + std::to_string(seen[r][p]) + " columns");
        coverage_ok = false;
      }
    }

  for (std::size_t c = 0; c < a.columns.size(); ++c) {
    const auto& cells = a.columns[c].cells;
    const std::string col = "column " + std::to_string(c);
    for (std::size_t i = 0; i < cells.size(); ++i)
      for (std::size_t j = i + 1; j < cells.size(); ++j) {
        const auto& x = cells[i];
        const auto& y = cells[j];
        if (x.row == y.row) {
          add(ViolationKind::kSameRowTwice, col + " holds two symbols of row " + std::to_string(x.row));
          continue;
        }
        if (!(a.symbol(x) == a.symbol(y)))
          add(ViolationKind::kHeterogeneousHit,
              col + " matches '" + a.symbol(x).name() + "' with '" + a.symbol(y).name() + "'");
        if (!a.rows[x.row].is_new && !a.rows[y.row].is_new && a.rows[x.row]->id == a.rows[y.row]->id &&
            x.pos == y.pos)
          add(ViolationKind::kSelfMatch, col + " matches position " + std::to_string(x.pos) + " of '" +
                                             a.rows[x.row]->id + "' with itself");
      }
  }

  // Pairwise order constraints, independent of the column sequence.
  const std::size_t nrows = a.rows.size();
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> links(nrows * nrows);
  for (const auto& column : a.columns)
    for (const auto& x : column.cells)
      for (const auto& y : column.cells)
        if (x.row < y.row) links[x.row * nrows + y.row].emplace_back(x.pos, y.pos);
  for (std::size_t ra = 0; ra < nrows; ++ra)
    for (std::size_t rb = ra + 1; rb < nrows; ++rb) {
      auto& pairs = links[ra * nrows + rb];
      std::sort(pairs.begin(), pairs.end());
      for (std::size_t k = 1; k < pairs.size(); ++k)
        if (pairs[k].second <= pairs[k - 1].second) {
          add(ViolationKind::kOrderConstraint, "matches between rows " + std::to_string(ra) + " and " +
                                                   std::to_string(rb) + " cross");
          break;
        }
    }

  if (coverage_ok) {
    const auto col_of = detail::column_index(a);
    for (std::size_t r = 0; r < nrows; ++r)
      for (std::size_t p = 1; p < col_of[r].size(); ++p)
        if (col_of[r][p] <= col_of[r][p - 1]) {
          add(ViolationKind::kColumnOrder, "row " + std::to_string(r) + " position " + std::to_string(p) +
                                               " is not to the right of position " + std::to_string(p - 1));
          break;
        }
  }
  return report;
}

std::vector<Mismatch> scan_mismatches(const Alignment& a) {
  std::vector<Mismatch> out;
  std::optional<std::size_t> left;
  std::set<std::size_t> old_rows;
  std::vector<std::size_t> old_cols;
  std::vector<std::size_t> new_cols;

  auto close_span = [&](std::optional<std::size_t> right) {
    if (old_rows.size() >= 2) out.push_back({MismatchKind::kOldOld, left, right, old_cols});
    if (!new_cols.empty()) out.push_back({MismatchKind::kNewResidue, left, right, new_cols});
    old_rows.clear();
    old_cols.clear();
    new_cols.clear();
  };

  for (std::size_t c = 0; c < a.columns.size(); ++c) {
    const auto& cells = a.columns[c].cells;
    if (cells.size() >= 2) {
      close_span(c);
      left = c;
    } else if (cells.size() == 1) {
      const auto& cell = cells.front();
      if (a.rows[cell.row].is_new) {
        new_cols.push_back(c);
      } else {
        old_rows.insert(cell.row);
        old_cols.push_back(c);
      }
    }
  }
  close_span(std::nullopt);
  return out;
}

std::vector<Mismatch> detect_mismatches(const Alignment& a) {
  const auto report = validate(a);
  if (!report.valid())
    throw ContractError("detect_mismatches needs a valid alignment: " +
                        std::string(to_string(report.violations.front().kind)) + ": " +
                        report.violations.front().detail);
  return scan_mismatches(a);
}

bool has_old_old_mismatch(const Alignment& a) {
  const auto ms = scan_mismatches(a);
  return std::any_of(ms.begin(), ms.end(), [](const Mismatch& m) { return m.kind == MismatchKind::kOldOld; });
}

bool old_material_ordered(const Alignment& a) {
  const auto col_of = detail::column_index(a);
  const auto after = detail::reach_after(a, col_of);
  std::vector<std::size_t> old_cols;
  for (std::size_t c = 0; c < a.columns.size(); ++c)
    if (a.column_has_old(c)) old_cols.push_back(c);
  for (std::size_t i = 0; i + 1 < old_cols.size(); ++i)
    for (std::size_t j = i + 1; j < old_cols.size(); ++j)
      if (!after[old_cols[i]].test(old_cols[j])) return false;
  return true;
}

Pattern project(const Alignment& a) {
  for (const auto& m : detect_mismatches(a))
    if (m.kind == MismatchKind::kOldOld)
      throw ProjectionError("alignment has an Old-Old mismatch; its projection would be arbitrary");
  SymbolString symbols;
  symbols.reserve(a.columns.size());
  for (const auto& column : a.columns) symbols.push_back(a.symbol(column.cells.front()));
  return Pattern("projection", std::move(symbols), 1);
}

std::size_t new_hit_count(const Alignment& a) {
  std::size_t n = 0;
  for (const auto& column : a.columns)
    if (column.is_hit())
      for (const auto& cell : column.cells)
        if (a.rows[cell.row].is_new) ++n;
  return n;
}

Alignment canonical_form(const Alignment& a) {
  const std::size_t n = a.columns.size();
  const auto col_of = detail::column_index(a);

  std::vector<std::vector<std::size_t>> succ(n);
  std::vector<std::size_t> indegree(n, 0);
  for (std::size_t r = 0; r < a.rows.size(); ++r)
    for (std::size_t p = 1; p < col_of[r].size(); ++p) {
      succ[col_of[r][p - 1]].push_back(col_of[r][p]);
      ++indegree[col_of[r][p]];
    }

  using Key = std::tuple<int, std::string, std::size_t, std::size_t>;
  auto key_of = [&](std::size_t c) -> Key {
    if (!a.column_has_old(c)) return {0, {}, 0, c};
    Key best{1, {}, 0, 0};
    bool first = true;
    for (const auto& cell : a.columns[c].cells) {
      if (a.rows[cell.row].is_new) continue;
      Key k{1, a.rows[cell.row]->id, cell.pos, cell.row};
      if (first || k < best) best = k;
      first = false;
    }
    return best;
  };

  std::set<std::pair<Key, std::size_t>> ready;
  for (std::size_t c = 0; c < n; ++c)
    if (indegree[c] == 0) ready.emplace(key_of(c), c);
  std::vector<std::size_t> order;
  order.reserve(n);
  while (!ready.empty()) {
    const std::size_t c = ready.begin()->second;
    ready.erase(ready.begin());
    order.push_back(c);
    for (std::size_t s : succ[c])
      if (--indegree[s] == 0) ready.emplace(key_of(s), s);
  }
  if (order.size() != n) throw ContractError("alignment rows impose a cyclic column order");

  std::vector<std::size_t> rank(n);
  for (std::size_t i = 0; i < n; ++i) rank[order[i]] = i;

  std::vector<std::size_t> old_rows;
  for (std::size_t r = 1; r < a.rows.size(); ++r) old_rows.push_back(r);
  std::vector<std::vector<std::size_t>> seq(a.rows.size());
  for (std::size_t r = 0; r < a.rows.size(); ++r)
    for (std::size_t c : col_of[r]) seq[r].push_back(rank[c]);
  std::sort(old_rows.begin(), old_rows.end(), [&](std::size_t x, std::size_t y) {
    if (seq[x] != seq[y]) return seq[x] < seq[y];
    if (a.rows[x]->id != a.rows[y]->id) return a.rows[x]->id < a.rows[y]->id;
    return x < y;
  });

  std::vector<std::size_t> new_index(a.rows.size());
  Alignment out;
  out.rows.push_back(a.rows[0]);
  out.rows[0].appearance = 1;
  std::map<std::string, std::size_t> seen;
  for (std::size_t r : old_rows) {
    new_index[r] = out.rows.size();
    Row row = a.rows[r];
    row.appearance = ++seen[row->id];
    out.rows.push_back(std::move(row));
  }
  out.columns.reserve(n);
  for (std::size_t c : order) {
    Column col;
    for (const auto& cell : a.columns[c].cells) col.cells.push_back({new_index[cell.row], cell.pos});
    std::sort(col.cells.begin(), col.cells.end());
    out.columns.push_back(std::move(col));
  }
  return out;
}

std::string structure_key(const Alignment& a) {
  std::string key;
  for (std::size_t r = 1; r < a.rows.size(); ++r) {
    key += a.rows[r]->id;
    key += '|';
  }
  key += '#';
  for (const auto& column : a.columns) {
    for (const auto& cell : column.cells) {
      key += std::to_string(cell.row);
      key += '@';
      key += std::to_string(cell.pos);
      key += ',';
    }
    key += ';';
  }
  return key;
}

}  // namespace spmatch

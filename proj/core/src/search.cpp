#include "spmatch/search.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

#include "order.hpp"
#include "spmatch/error.hpp"

namespace spmatch {

namespace {

using detail::Bits;
using detail::kNoColumn;

// Completions enumerated per (alignment, pattern) pair before the search
// moves on to the next pattern.
constexpr std::size_t kMaxCompletions = 20000;
constexpr std::size_t kExhaustivePairLength = 12;

struct Entry {
  Alignment alignment;
  double score = 0.0;
  std::size_t per_symbol_codes = 0;
  std::vector<std::string> projection;
  std::string key;
  double outlook = 0.0;
};

std::vector<std::string> column_tokens(const Alignment& a) {
  std::vector<std::string> out;
  out.reserve(a.columns.size());
  for (const auto& column : a.columns) out.push_back(a.symbol(column.cells.front()).name());
  return out;
}

bool entry_before(const Entry& x, const Entry& y) {
  if (x.score != y.score) return x.score > y.score;
  if (x.alignment.rows.size() != y.alignment.rows.size()) return x.alignment.rows.size() < y.alignment.rows.size();
  if (x.per_symbol_codes != y.per_symbol_codes) return x.per_symbol_codes < y.per_symbol_codes;
  if (x.projection != y.projection) return x.projection < y.projection;
  return x.key < y.key;
}

// Exploration order: score less the value of New symbols that are already
// out of reach, then the reporting order.
bool explores_before(const Entry& x, const Entry& y) {
  if (x.outlook != y.outlook) return x.outlook > y.outlook;
  return entry_before(x, y);
}

// Which symbols a future row could bring into an existing column.
struct JoinTable {
  std::set<Symbol> anywhere;
  std::set<Symbol> interior;

  explicit JoinTable(const Corpus& corpus) {
    for (const auto& p : corpus.patterns())
      for (std::size_t i = 0; i < p.size(); ++i) {
        anywhere.insert(p[i]);
        if (i > 0 && i + 1 < p.size()) interior.insert(p[i]);
      }
  }
};

// Unmatched New symbols that no extension can ever bring into a hit. A
// column that can gain no cells keeps its neighbours forever; if it also has
// no successors, a New symbol that already follows all of its predecessors
// can be placed neither before nor after it. Likewise mirrored.
std::size_t dead_residue(const Alignment& a, const JoinTable& joins) {
  const std::size_t n = a.columns.size();
  const auto col_of = detail::column_index(a);
  const auto after = detail::reach_after(a, col_of);

  struct Sealed {
    std::size_t col;
    std::vector<std::size_t> neighbours;
    bool at_end;  // no successors; otherwise no predecessors
  };
  std::vector<Sealed> sealed;
  for (std::size_t c = 0; c < n; ++c) {
    const auto& cells = a.columns[c].cells;
    bool has_old = false, holds_end = false, all_first = true, all_last = true;
    for (const auto& cell : cells) {
      const std::size_t len = a.rows[cell.row]->size();
      if (cell.pos != 0) all_first = false;
      if (cell.pos + 1 != len) all_last = false;
      if (a.rows[cell.row].is_new) continue;
      has_old = true;
      if (cell.pos == 0 || cell.pos + 1 == len) holds_end = true;
    }
    if (!has_old) continue;
    const Symbol& s = a.symbol(cells.front());
    const bool can_join = holds_end ? joins.interior.count(s) != 0 : joins.anywhere.count(s) != 0;
    if (can_join || (!all_first && !all_last)) continue;
    Sealed entry{c, {}, all_last};
    for (const auto& cell : cells) {
      if (all_last && cell.pos > 0) entry.neighbours.push_back(col_of[cell.row][cell.pos - 1]);
      if (!all_last && cell.pos + 1 < a.rows[cell.row]->size())
        entry.neighbours.push_back(col_of[cell.row][cell.pos + 1]);
    }
    sealed.push_back(std::move(entry));
  }

  std::size_t dead = 0;
  for (std::size_t x = 0; x < n; ++x) {
    if (a.columns[x].is_hit() || !a.rows[a.columns[x].cells.front().row].is_new) continue;
    for (const auto& o : sealed) {
      bool blocked;
      if (o.at_end) {
        blocked = !after[x].test(o.col);
        for (std::size_t p : o.neighbours) blocked = blocked && (p == x || after[p].test(x));
      } else {
        blocked = !after[o.col].test(x);
        for (std::size_t s : o.neighbours) blocked = blocked && (s == x || after[x].test(s));
      }
      if (blocked) {
        ++dead;
        break;
      }
    }
  }
  return dead;
}

bool within_max_gap(const Alignment& a, const std::optional<std::size_t>& max_gap) {
  if (!max_gap) return true;
  const auto col_of = detail::column_index(a);
  for (const auto& row_cols : col_of) {
    std::optional<std::size_t> last_hit;
    for (std::size_t p = 0; p < row_cols.size(); ++p) {
      if (!a.columns[row_cols[p]].is_hit()) continue;
      if (last_hit && p - *last_hit - 1 > *max_gap) return false;
      last_hit = p;
    }
  }
  return true;
}

// Everything the extension step needs to know about one alignment.
class Extender {
 public:
  Extender(const Alignment& a, const SearchParams& params) : a_(a), params_(params), n_(a.columns.size()) {
    const auto col_of = detail::column_index(a);
    after_eq_ = detail::reach_after(a, col_of);
    before_eq_ = detail::reach_before(after_eq_, n_);
    after_ = after_eq_;
    for (std::size_t c = 0; c < n_; ++c) {
      after_eq_[c].set(c);
      before_eq_[c].set(c);
    }
    old_cols_ = Bits(n_);
    for (std::size_t c = 0; c < n_; ++c) {
      if (a.column_has_old(c)) old_cols_.set(c);
      by_symbol_[a.symbol(a.columns[c].cells.front())].push_back(c);
    }
  }

  /// Calls emit(assignment) for each admissible placement of `p` as a new
  /// row; assignment[i] is the column hit by position i or kNoColumn.
  template <typename Emit>
  void extend(const Pattern& p, Emit&& emit) {
    pattern_ = &p;
    emitted_ = 0;
    assignment_.assign(p.size(), kNoColumn);
    candidates_.clear();
    for (const auto& s : p.symbols) {
      auto it = by_symbol_.find(s);
      candidates_.push_back(it == by_symbol_.end() ? nullptr : &it->second);
    }
    State start{Bits(n_), Bits(n_), Bits(n_), false, 0, 0};
    dfs(0, start, emit);
  }

 private:
  struct State {
    Bits matched;
    Bits before_hits;  // columns at or before some hit so far
    Bits pending;      // Old columns that some later hit must precede
    bool has_hit;
    std::size_t unmatched_run;
    std::size_t hits;
  };

  // Old cells at the first or last position of their pattern.
  bool holds_old_end(std::size_t c) const {
    for (const auto& cell : a_.columns[c].cells)
      if (!a_.rows[cell.row].is_new && (cell.pos == 0 || cell.pos + 1 == a_.rows[cell.row]->size())) return true;
    return false;
  }

  bool self_match(std::size_t c, std::size_t pos) const {
    for (const auto& cell : a_.columns[c].cells)
      if (!a_.rows[cell.row].is_new && cell.pos == pos && a_.rows[cell.row]->id == pattern_->id) return true;
    return false;
  }

  template <typename Emit>
  void dfs(std::size_t i, const State& st, Emit& emit) {
    if (emitted_ >= kMaxCompletions) return;
    if (i == pattern_->size()) {
      if (st.hits == 0) return;
      Bits pending = st.pending;
      if (st.unmatched_run > 0) {
        Bits loose = old_cols_;
        loose.subtract(st.before_hits);
        pending |= loose;
      }
      if (pending.any()) return;
      ++emitted_;
      emit(assignment_);
      return;
    }
    if (candidates_[i] != nullptr) {
      for (std::size_t c : *candidates_[i]) {
        if (st.matched.test(c) || after_[c].intersects(st.matched) || self_match(c, i)) continue;
        if ((i == 0 || i + 1 == pattern_->size()) && holds_old_end(c)) continue;
        if (st.has_hit && params_.max_gap && st.unmatched_run > *params_.max_gap) continue;
        State next = st;
        if (st.unmatched_run > 0) {
          Bits loose = old_cols_;
          loose.subtract(st.before_hits);
          loose.subtract(after_eq_[c]);
          next.pending |= loose;
        }
        next.pending.subtract(after_eq_[c]);
        next.before_hits |= before_eq_[c];
        next.matched.set(c);
        next.has_hit = true;
        next.unmatched_run = 0;
        ++next.hits;
        assignment_[i] = c;
        dfs(i + 1, next, emit);
        assignment_[i] = kNoColumn;
      }
    }
    State next = st;
    ++next.unmatched_run;
    dfs(i + 1, next, emit);
  }

  const Alignment& a_;
  const SearchParams& params_;
  std::size_t n_;
  std::vector<Bits> after_, after_eq_, before_eq_;
  Bits old_cols_;
  std::map<Symbol, std::vector<std::size_t>> by_symbol_;

  const Pattern* pattern_ = nullptr;
  std::vector<const std::vector<std::size_t>*> candidates_;
  std::vector<std::size_t> assignment_;
  std::size_t emitted_ = 0;
};

Alignment add_row(const Alignment& a, const std::shared_ptr<const Pattern>& p, std::size_t appearance,
                  const std::vector<std::size_t>& assignment) {
  Alignment out = a;
  const std::size_t row = out.rows.size();
  out.rows.push_back(Row{p, appearance, false});
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i] == kNoColumn)
      out.columns.push_back(Column{{Cell{row, i}}});
    else
      out.columns[assignment[i]].cells.push_back(Cell{row, i});
  }
  return out;
}

}  // namespace

void check_search_params(const SearchParams& params) {
  if (params.beam_width == 0) throw ContractError("beam width must be at least 1");
  if (params.max_cycles == 0) throw ContractError("max cycles must be at least 1");
  if (params.max_appearances == 0) throw ContractError("max appearances must be at least 1");
}

std::vector<Alignment> align_pair(const Pattern& a, const Pattern& b, const SearchParams& params) {
  using Matching = std::vector<std::pair<std::size_t, std::size_t>>;
  auto better = [](const Matching& x, const Matching& y) {
    if (x.size() != y.size()) return x.size() > y.size();
    return x < y;
  };
  auto gap_ok = [&](std::size_t from, std::size_t to) {
    return !params.max_gap || to - from - 1 <= *params.max_gap;
  };

  std::vector<Matching> found;
  if (a.size() <= kExhaustivePairLength && b.size() <= kExhaustivePairLength) {
    Matching current;
    auto dfs = [&](auto& self, std::size_t i) -> void {
      if (i == a.size()) {
        if (!current.empty()) found.push_back(current);
        return;
      }
      const std::size_t j0 = current.empty() ? 0 : current.back().second + 1;
      for (std::size_t j = j0; j < b.size(); ++j) {
        if (!(a[i] == b[j])) continue;
        if (!current.empty() && (!gap_ok(current.back().first, i) || !gap_ok(current.back().second, j))) continue;
        current.emplace_back(i, j);
        self(self, i + 1);
        current.pop_back();
      }
      self(self, i + 1);
    };
    dfs(dfs, 0);
  } else {
    std::vector<Matching> beam{Matching{}};
    const std::size_t keep = std::max<std::size_t>(params.beam_width, 1);
    for (std::size_t i = 0; i < a.size(); ++i) {
      std::vector<Matching> next;
      for (const auto& m : beam) {
        next.push_back(m);
        const std::size_t j0 = m.empty() ? 0 : m.back().second + 1;
        for (std::size_t j = j0; j < b.size(); ++j) {
          if (!(a[i] == b[j])) continue;
          if (!m.empty() && (!gap_ok(m.back().first, i) || !gap_ok(m.back().second, j))) continue;
          auto grown = m;
          grown.emplace_back(i, j);
          next.push_back(std::move(grown));
        }
      }
      std::sort(next.begin(), next.end(), better);
      next.erase(std::unique(next.begin(), next.end()), next.end());
      if (next.size() > keep) next.resize(keep);
      beam = std::move(next);
    }
    for (auto& m : beam)
      if (!m.empty()) found.push_back(std::move(m));
  }
  std::sort(found.begin(), found.end(), better);

  auto pa = std::make_shared<const Pattern>(a);
  auto pb = std::make_shared<const Pattern>(b);
  std::vector<Alignment> out;
  out.reserve(found.size());
  for (const auto& m : found) {
    Alignment al;
    al.rows.push_back(Row{pa, 1, true});
    al.rows.push_back(Row{pb, 1, false});
    std::size_t i = 0, j = 0;
    for (const auto& [hi, hj] : m) {
      for (; i < hi; ++i) al.columns.push_back(Column{{Cell{0, i}}});
      for (; j < hj; ++j) al.columns.push_back(Column{{Cell{1, j}}});
      al.columns.push_back(Column{{Cell{0, i++}, Cell{1, j++}}});
    }
    for (; i < a.size(); ++i) al.columns.push_back(Column{{Cell{0, i}}});
    for (; j < b.size(); ++j) al.columns.push_back(Column{{Cell{1, j}}});
    out.push_back(std::move(al));
  }
  return out;
}

bool ranks_before(const ScoredAlignment& x, const ScoredAlignment& y) {
  auto entry = [](const ScoredAlignment& s) {
    return Entry{s.alignment, s.score_bits, s.per_symbol_codes, column_tokens(s.alignment), structure_key(s.alignment)};
  };
  return entry_before(entry(x), entry(y));
}

SearchResult find_alignments(const Corpus& corpus, const Pattern& new_pattern, const CostModel& model,
                             const SearchParams& params, const ProgressFn& progress) {
  check_search_params(params);
  std::vector<std::shared_ptr<const Pattern>> olds;
  for (const auto& p : corpus.patterns()) olds.push_back(std::make_shared<const Pattern>(p));

  const JoinTable joins(corpus);
  SearchResult result;
  std::unordered_set<std::string> seen;
  std::vector<Entry> best;
  std::vector<Entry> beam;
  std::vector<Entry> frontier{Entry{new_only_alignment(new_pattern), 0.0, 0, {}, {}}};

  for (std::size_t cycle = 0; cycle < params.max_cycles && !frontier.empty(); ++cycle) {
    std::vector<Entry> pool = beam;
    for (const auto& base : frontier) {
      std::map<std::string, std::size_t> appearances;
      for (std::size_t r = 1; r < base.alignment.rows.size(); ++r) ++appearances[base.alignment.rows[r]->id];
      Extender extender(base.alignment, params);
      for (const auto& p : olds) {
        const std::size_t used = appearances[p->id];
        if (used >= params.max_appearances) continue;
        extender.extend(*p, [&](const std::vector<std::size_t>& assignment) {
          ++result.candidates_examined;
          Alignment grown = canonical_form(add_row(base.alignment, p, used + 1, assignment));
          std::string key = structure_key(grown);
          if (seen.count(key)) return;
          seen.insert(key);
          if (!old_material_ordered(grown) || !within_max_gap(grown, params.max_gap)) return;
          const Encoding encoding = evaluate(grown, corpus, model);
          const double score = encoding.score_bits;
          const double outlook =
              score - static_cast<double>(dead_residue(grown, joins)) * model.actual_new_bits;
          auto tokens = column_tokens(grown);
          Entry entry{std::move(grown), score, encoding.per_symbol_codes.size(), std::move(tokens), std::move(key), outlook};
          if (params.keep_nonpositive || score > 0.0) best.push_back(entry);
          pool.push_back(std::move(entry));
        });
      }
    }

    std::sort(pool.begin(), pool.end(), explores_before);
    if (pool.size() > params.beam_width) pool.resize(params.beam_width);
    std::sort(best.begin(), best.end(), entry_before);
    if (best.size() > params.beam_width) best.resize(params.beam_width);

    std::set<std::string> previous;
    for (const auto& e : beam) previous.insert(e.key);
    frontier.clear();
    for (const auto& e : pool)
      if (!previous.count(e.key)) frontier.push_back(e);
    beam = std::move(pool);
    result.cycles_run = cycle + 1;

    if (progress) {
      std::ostringstream line;
      line << "cycle=" << cycle << " retained=" << beam.size()
           << " best=" << (best.empty() ? std::string("none") : format_bits(best.front().score));
      progress(line.str());
    }
  }

  for (auto& e : best) result.ranked.push_back(ScoredAlignment{std::move(e.alignment), e.score, e.per_symbol_codes});
  return result;
}

boost::multiprecision::cpp_int search_space_size(unsigned m, unsigned n) {
  using boost::multiprecision::cpp_int;
  const cpp_int one = 1;
  return ((one << m) - 1) * ((one << n) - 1);
}

}  // namespace spmatch

#include "spmatch/encoding.hpp"

#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>

#include "order.hpp"
#include "tally.hpp"
#include "spmatch/error.hpp"

namespace spmatch {

namespace {

double sfe_bits(std::uint64_t frequency, std::uint64_t total) {
  return -std::log2(static_cast<double>(frequency) / static_cast<double>(total)) + 1.0;
}

// Row charged for each pattern: the appearance whose first symbol comes first.
std::vector<bool> charged_rows(const Alignment& a, const std::vector<std::vector<std::size_t>>& col_of) {
  std::map<std::string, std::size_t> leftmost;
  for (std::size_t r = 1; r < a.rows.size(); ++r) {
    auto [it, inserted] = leftmost.emplace(a.rows[r]->id, r);
    if (!inserted && col_of[r][0] < col_of[it->second][0]) it->second = r;
  }
  std::vector<bool> charged(a.rows.size(), false);
  for (const auto& [id, r] : leftmost) charged[r] = true;
  return charged;
}

void require_unambiguous(const Alignment& a) {
  if (has_old_old_mismatch(a))
    throw ProjectionError("alignment has an Old-Old mismatch; it encodes nothing unambiguously");
}

}  // namespace

void check_cost_model(const Corpus& corpus, const CostModel& model) {
  if (!(model.actual_new_bits > 0) || !(model.uniform_min_bits > 0))
    throw ContractError("symbol sizes must be positive");
  double worst = model.uniform_min_bits;
  if (model.mode == CostMode::kSfe) {
    worst = sfe_bits(1, corpus.total_frequency());
  }
  if (!(model.actual_new_bits > worst))
    throw ContractError("actual symbol size " + format_bits(model.actual_new_bits) +
                        " does not exceed the minimum cost " + format_bits(worst));
}

double symbol_min_bits(const Corpus& corpus, const CostModel& model, const Symbol& symbol) {
  if (model.mode == CostMode::kUniform) return model.uniform_min_bits;
  const auto& freq = corpus.symbol_frequency();
  const auto it = freq.find(symbol);
  if (it != freq.end()) return sfe_bits(it->second, corpus.total_frequency());
  if (!model.unknown_as_frequency_one) throw LookupError("symbol '" + symbol.name() + "' has no frequency");
  return sfe_bits(1, corpus.total_frequency());
}

SymbolString extract_code(const Alignment& a) {
  require_unambiguous(a);
  const auto col_of = detail::column_index(a);
  const auto charged = charged_rows(a, col_of);
  SymbolString code;
  for (const auto& column : a.columns)
    if (column.cells.size() == 1 && charged[column.cells.front().row]) code.push_back(a.symbol(column.cells.front()));
  return code;
}

CodeSequence extract_code(const Alignment& a, const Corpus& corpus, const CostModel& model) {
  CodeSequence out{extract_code(a), 0.0};
  for (const auto& s : out.symbols) out.bit_cost += symbol_min_bits(corpus, model, s);
  return out;
}

Encoding evaluate(const Alignment& a, const Corpus& corpus, const CostModel& model) {
  require_unambiguous(a);
  return detail::tally(a, corpus, model);
}

Encoding detail::tally(const Alignment& a, const Corpus& corpus, const CostModel& model) {
  const auto col_of = detail::column_index(a);
  const auto charged = charged_rows(a, col_of);

  std::vector<bool> has_single(a.rows.size(), false);
  for (const auto& column : a.columns)
    if (column.cells.size() == 1) has_single[column.cells.front().row] = true;

  Encoding e;
  for (const auto& column : a.columns) {
    if (column.cells.size() == 1) {
      const Cell& cell = column.cells.front();
      const Symbol& s = a.symbol(cell);
      if (a.rows[cell.row].is_new) {
        e.residue.push_back(s);
      } else if (charged[cell.row]) {
        e.code.push_back(s);
        e.tokens.push_back(s.name());
        e.code_bits += symbol_min_bits(corpus, model, s);
      }
      continue;
    }
    bool hits_new = false;
    for (const auto& cell : column.cells) hits_new = hits_new || a.rows[cell.row].is_new;
    if (!hits_new) continue;
    ++e.new_hits;
    const Symbol& s = a.symbol(column.cells.front());
    for (const auto& cell : column.cells) {
      if (a.rows[cell.row].is_new || has_single[cell.row]) continue;
      e.per_symbol_codes.push_back(s);
      e.tokens.push_back(s.name() + "'");
      e.code_bits += symbol_min_bits(corpus, model, s);
    }
  }
  e.score_bits = static_cast<double>(e.new_hits) * model.actual_new_bits - e.code_bits;
  return e;
}

double compression_score(const Alignment& a, const Corpus& corpus, const CostModel& model) {
  return evaluate(a, corpus, model).score_bits;
}

double corpus_size_bits(const Corpus& corpus, const CostModel& model) {
  double total = 0.0;
  for (const auto& p : corpus.patterns())
    for (const auto& s : p.symbols) total += symbol_min_bits(corpus, model, s);
  return total;
}

std::string format_bits(double bits) {
  if (bits == 0.0) bits = 0.0;  // drop the sign of -0
  std::ostringstream out;
  out << std::fixed << std::setprecision(4) << bits;
  std::string s = out.str();
  while (s.size() > 2 && s.back() == '0' && s[s.size() - 2] != '.') s.pop_back();
  return s == "-0.0" ? "0.0" : s;
}

std::string score_line(const Encoding& e) {
  std::ostringstream out;
  out << "score_bits=" << format_bits(e.score_bits) << " new_hits=" << e.new_hits << " code=";
  for (std::size_t i = 0; i < e.tokens.size(); ++i) out << (i ? " " : "") << e.tokens[i];
  out << " residue=" << to_text(e.residue);
  return out.str();
}

}  // namespace spmatch

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "spmatch/alignment.hpp"
#include "spmatch/pattern.hpp"

namespace spmatch {

enum class CostMode { kUniform, kSfe };

struct CostModel {
  CostMode mode = CostMode::kUniform;
  /// Size of each raw New symbol. Must exceed every symbol's minimum cost.
  double actual_new_bits = 20.0;
  double uniform_min_bits = 4.0;
  /// In sfe mode, symbols missing from the corpus cost as if seen once.
  /// When false they raise LookupError.
  bool unknown_as_frequency_one = true;
};

/// Throws ContractError unless actual_new_bits exceeds the minimum cost of
/// every corpus symbol and of a frequency-one symbol.
void check_cost_model(const Corpus& corpus, const CostModel& model);

/// uniform: uniform_min_bits. sfe: -log2(f/T) + 1 with real-valued lengths.
double symbol_min_bits(const Corpus& corpus, const CostModel& model, const Symbol& symbol);

struct CodeSequence {
  SymbolString symbols;
  double bit_cost = 0.0;
};

/// Unmatched Old symbols, in column order, taken from the leftmost appearance
/// of each pattern. Later appearances reuse the same pattern code and are
/// not charged again. Throws ProjectionError on an Old-Old mismatch.
SymbolString extract_code(const Alignment& alignment);
CodeSequence extract_code(const Alignment& alignment, const Corpus& corpus, const CostModel& model);

/// Full accounting of how an alignment encodes New.
struct Encoding {
  SymbolString code;
  /// One per New hit inside an Old row that has no unmatched symbols of its
  /// own: such a row cannot be identified by a code of its own, so the
  /// matched symbol is charged directly.
  SymbolString per_symbol_codes;
  /// code and per_symbol_codes merged in column order; the latter carry a
  /// trailing "'".
  std::vector<std::string> tokens;
  SymbolString residue;
  std::size_t new_hits = 0;
  double code_bits = 0.0;
  double score_bits = 0.0;
};

/// Requires a valid alignment. Throws ProjectionError on an Old-Old mismatch.
Encoding evaluate(const Alignment& alignment, const Corpus& corpus, const CostModel& model);

/// new_hits * actual_new_bits minus the bits of the code and per-symbol codes.
double compression_score(const Alignment& alignment, const Corpus& corpus, const CostModel& model);

/// Sum of minimum symbol costs over every symbol of every pattern.
double corpus_size_bits(const Corpus& corpus, const CostModel& model);

/// "72.0", "13.2877": at least one decimal, at most four.
std::string format_bits(double bits);

/// "score_bits=<x> new_hits=<n> code=<tokens> residue=<tokens>"
std::string score_line(const Encoding& encoding);

}  // namespace spmatch

#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "spmatch/alignment.hpp"
#include "spmatch/encoding.hpp"
#include "spmatch/pattern.hpp"

namespace spmatch {

struct SearchParams {
  std::size_t beam_width = 30;
  /// Longest run of unmatched symbols allowed between two hits of one row.
  std::optional<std::size_t> max_gap;
  std::size_t max_appearances = 10;
  std::size_t max_cycles = 20;
  bool keep_nonpositive = true;
};

/// Throws ContractError when beam_width, max_cycles or max_appearances is zero.
void check_search_params(const SearchParams& params);

struct ScoredAlignment {
  Alignment alignment;
  double score_bits = 0.0;
  /// How many New symbols the encoding spells out one by one.
  std::size_t per_symbol_codes = 0;
};

struct SearchResult {
  std::vector<ScoredAlignment> ranked;
  std::size_t cycles_run = 0;
  std::size_t candidates_examined = 0;
};

/// Order-preserving alignments of `a` (row 0) with `b` (row 1), each with at
/// least one hit and within params.max_gap. Exhaustive when both patterns
/// have at most 12 symbols; otherwise a beam of params.beam_width partial
/// matchings is kept per position of `a`. Sorted by hit count, then by the
/// leftmost hit positions.
std::vector<Alignment> align_pair(const Pattern& a, const Pattern& b, const SearchParams& params);

/// Called once per cycle with "cycle=<k> retained=<n> best=<bits>".
using ProgressFn = std::function<void(const std::string&)>;

/// Beam search for alignments of `new_pattern` against the corpus. Cycle 0
/// aligns New with each Old pattern; each later cycle adds one more pattern
/// appearance to every alignment that entered the beam in the previous
/// cycle. Stops when the beam stops changing or after params.max_cycles.
/// Deterministic.
SearchResult find_alignments(const Corpus& corpus, const Pattern& new_pattern, const CostModel& model,
                             const SearchParams& params, const ProgressFn& progress = {});

/// Orders by score descending, then fewer rows, then fewer per-symbol codes,
/// then lexicographically smaller projection, then structure key.
bool ranks_before(const ScoredAlignment& x, const ScoredAlignment& y);

/// Number of ways to pick a non-empty subsequence from each of two
/// sequences of lengths m and n: (2^m - 1)(2^n - 1).
boost::multiprecision::cpp_int search_space_size(unsigned m, unsigned n);

}  // namespace spmatch

#pragma once

#include <cstddef>
#include <vector>

#include "bits.hpp"
#include "spmatch/alignment.hpp"

namespace spmatch::detail {

inline constexpr std::size_t kNoColumn = static_cast<std::size_t>(-1);

/// col_of[row][pos] -> column index, kNoColumn where a position is missing.
std::vector<std::vector<std::size_t>> column_index(const Alignment& a);

/// after[c] holds every column reachable from c through row order.
/// Columns must already be in an order that respects every row.
std::vector<Bits> reach_after(const Alignment& a, const std::vector<std::vector<std::size_t>>& col_of);

/// before[c] holds every column from which c is reachable.
std::vector<Bits> reach_before(const std::vector<Bits>& after, std::size_t n);

}  // namespace spmatch::detail

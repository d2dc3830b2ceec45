#pragma once

#include "spmatch/encoding.hpp"

namespace spmatch::detail {

/// evaluate() without the mismatch check, for alignments still under
/// construction whose Old rows are not yet tied into one order.
Encoding tally(const Alignment& a, const Corpus& corpus, const CostModel& model);

}  // namespace spmatch::detail

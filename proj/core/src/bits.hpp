#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace spmatch::detail {

class Bits {
 public:
  Bits() = default;
  explicit Bits(std::size_t n) : words_((n + 63) / 64, 0) {}

  void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }

  Bits& operator|=(const Bits& o) {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= o.words_[w];
    return *this;
  }
  /// Clears every bit that is set in o.
  Bits& subtract(const Bits& o) {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= ~o.words_[w];
    return *this;
  }
  bool any() const {
    for (auto w : words_)
      if (w) return true;
    return false;
  }
  bool intersects(const Bits& o) const {
    for (std::size_t w = 0; w < words_.size(); ++w)
      if (words_[w] & o.words_[w]) return true;
    return false;
  }
  /// True if (*this & a & b) is non-empty.
  bool intersects3(const Bits& a, const Bits& b) const {
    for (std::size_t w = 0; w < words_.size(); ++w)
      if (words_[w] & a.words_[w] & b.words_[w]) return true;
    return false;
  }

 private:
  std::vector<std::uint64_t> words_;
};

}  // namespace spmatch::detail

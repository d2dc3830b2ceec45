#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace spmatch {

/// An opaque, comparable token. Two symbols either match or they don't;
/// the name carries no meaning for the engine.
class Symbol {
 public:
  Symbol() = default;
  explicit Symbol(std::string name);

  const std::string& name() const noexcept { return name_; }

  friend bool operator==(const Symbol&, const Symbol&) = default;
  // Ordering exists only so symbols can key ordered containers deterministically.
  friend auto operator<=>(const Symbol&, const Symbol&) = default;

 private:
  std::string name_;
};

using SymbolString = std::vector<Symbol>;

/// Splits on whitespace; every token becomes a symbol.
SymbolString to_symbols(std::string_view text);
std::string to_text(const SymbolString& symbols);

struct Pattern {
  std::string id;
  SymbolString symbols;
  std::uint64_t frequency = 1;

  Pattern() = default;
  /// Throws CorpusError if `symbols` is empty or `frequency` is zero.
  Pattern(std::string id, SymbolString symbols, std::uint64_t frequency = 1);

  std::size_t size() const noexcept { return symbols.size(); }
  const Symbol& operator[](std::size_t i) const { return symbols[i]; }
};

/// Parses "N 0 j o h n #N (300)". A trailing "(N)" sets the frequency.
Pattern parse_pattern_line(std::string_view line, std::string id = {});

/// Inverse of parse_pattern_line; the frequency suffix is omitted when it is 1.
std::string render_pattern(const Pattern& pattern);

/// Reads a pattern file: one pattern per line, "//" comment lines and blank
/// lines skipped. Ids are assigned as p1, p2, ... in file order.
std::vector<Pattern> read_patterns(std::istream& in);
std::vector<Pattern> load_patterns(const std::string& path);

/// The Old store: patterns plus their alphabet and occurrence-weighted symbol counts.
class Corpus {
 public:
  const std::vector<Pattern>& patterns() const noexcept { return patterns_; }
  const std::set<Symbol>& alphabet() const noexcept { return alphabet_; }
  const std::map<Symbol, std::uint64_t>& symbol_frequency() const noexcept { return frequency_; }
  /// Sum of symbol_frequency over the alphabet.
  std::uint64_t total_frequency() const noexcept { return total_; }

  bool contains(const Symbol& s) const { return alphabet_.count(s) != 0; }
  const Pattern* find(std::string_view id) const;

 private:
  friend Corpus build_corpus(std::vector<Pattern> patterns);

  std::vector<Pattern> patterns_;
  std::set<Symbol> alphabet_;
  std::map<Symbol, std::uint64_t> frequency_;
  std::uint64_t total_ = 0;
};

/// Throws CorpusError on an empty collection or duplicate ids.
Corpus build_corpus(std::vector<Pattern> patterns);

}  // namespace spmatch

template <>
struct std::hash<spmatch::Symbol> {
  std::size_t operator()(const spmatch::Symbol& s) const noexcept {
    return std::hash<std::string>{}(s.name());
  }
};

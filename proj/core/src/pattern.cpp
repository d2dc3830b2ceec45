#include "spmatch/pattern.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

#include "spmatch/error.hpp"

namespace spmatch {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f'; }

std::vector<std::string_view> split_tokens(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_space(text[j])) ++j;
    if (j > i) out.push_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

}  // namespace

Symbol::Symbol(std::string name) : name_(std::move(name)) {}

SymbolString to_symbols(std::string_view text) {
  SymbolString out;
  for (auto tok : split_tokens(text)) out.emplace_back(std::string(tok));
  return out;
}

std::string to_text(const SymbolString& symbols) {
  std::string out;
  for (const auto& s : symbols) {
    if (!out.empty()) out += ' ';
    out += s.name();
  }
  return out;
}

Pattern::Pattern(std::string id_, SymbolString symbols_, std::uint64_t frequency_)
    : id(std::move(id_)), symbols(std::move(symbols_)), frequency(frequency_) {
  if (symbols.empty()) throw CorpusError("pattern '" + id + "' has no symbols");
  if (frequency == 0) throw CorpusError("pattern '" + id + "' has zero frequency");
}

Pattern parse_pattern_line(std::string_view line, std::string id) {
  auto tokens = split_tokens(line);
  if (tokens.empty()) throw FormatError("empty pattern line");

  std::uint64_t frequency = 1;
  const auto last = tokens.back();
  if (last.size() >= 2 && last.front() == '(' && last.back() == ')') {
    const auto digits = last.substr(1, last.size() - 2);
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc{} || ptr != digits.data() + digits.size() || digits.empty())
      throw FormatError("frequency '" + std::string(last) + "' is not an integer");
    if (value <= 0) throw FormatError("frequency must be positive, got " + std::to_string(value));
    frequency = static_cast<std::uint64_t>(value);
    tokens.pop_back();
    if (tokens.empty()) throw FormatError("pattern has a frequency but no symbols");
  }

  SymbolString symbols;
  symbols.reserve(tokens.size());
  for (auto tok : tokens) symbols.emplace_back(std::string(tok));
  return Pattern(std::move(id), std::move(symbols), frequency);
}

std::string render_pattern(const Pattern& pattern) {
  std::string out = to_text(pattern.symbols);
  if (pattern.frequency != 1) out += " (" + std::to_string(pattern.frequency) + ")";
  return out;
}

std::vector<Pattern> read_patterns(std::istream& in) {
  std::vector<Pattern> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty() || body.substr(0, 2) == "//") continue;
    try {
      out.push_back(parse_pattern_line(body, "p" + std::to_string(out.size() + 1)));
    } catch (const FormatError& e) {
      throw FormatError(e.what(), line_no);
    }
  }
  return out;
}

std::vector<Pattern> load_patterns(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open pattern file '" + path + "'");
  try {
    return read_patterns(in);
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

const Pattern* Corpus::find(std::string_view id) const {
  for (const auto& p : patterns_)
    if (p.id == id) return &p;
  return nullptr;
}

Corpus build_corpus(std::vector<Pattern> patterns) {
  if (patterns.empty()) throw CorpusError("corpus needs at least one pattern");
  std::set<std::string> ids;
  Corpus corpus;
  for (const auto& p : patterns) {
    if (!ids.insert(p.id).second) throw CorpusError("duplicate pattern id '" + p.id + "'");
    if (p.symbols.empty() || p.frequency == 0)
      throw CorpusError("pattern '" + p.id + "' violates pattern invariants");
    for (const auto& s : p.symbols) {
      corpus.alphabet_.insert(s);
      corpus.frequency_[s] += p.frequency;
      corpus.total_ += p.frequency;
    }
  }
  corpus.patterns_ = std::move(patterns);
  return corpus;
}

}  // namespace spmatch

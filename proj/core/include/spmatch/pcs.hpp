#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "spmatch/pattern.hpp"

namespace spmatch {

/// One element of a production side: a fixed symbol or a variable reference.
struct Term {
  bool is_variable = false;
  Symbol symbol;         // when !is_variable
  std::string variable;  // "$", "$1", ...

  static Term fixed(Symbol s) { return Term{false, std::move(s), {}}; }
  static Term var(std::string name) { return Term{true, {}, std::move(name)}; }
};

using TermString = std::vector<Term>;
using Bindings = std::map<std::string, SymbolString>;

struct Production {
  TermString lhs;
  TermString rhs;
  std::string text;  // "a $ -> $ a"

  /// lhs = g $ and rhs = $ h for one variable and fixed strings g, h.
  bool is_normal_form() const;
  /// The fixed prefix g and suffix h of a normal-form production.
  SymbolString leading() const;
  SymbolString trailing() const;
};

/// Parses "a $ -> $ a". Variables are "$" or "$" followed by digits.
/// Throws FormatError on a missing arrow, a repeated lhs variable or an rhs
/// variable absent from the lhs.
Production parse_production(std::string_view text, std::size_t line = 0);

struct PcsSystem {
  std::vector<Symbol> alphabet;  // file order
  std::vector<SymbolString> axioms;
  std::vector<Production> productions;

  bool in_alphabet(const Symbol& s) const;
};

/// Reads "alphabet:", "axiom:" and "rule:" lines; "//" starts a comment line.
/// Throws FormatError (with line number) on malformed input, symbols outside
/// the alphabet, or a system without axioms or rules.
PcsSystem read_pcs(std::istream& in);
PcsSystem load_pcs(const std::string& path);

SymbolString substitute(const TermString& side, const Bindings& bindings);

/// Every binding under which `side` spells out `s` exactly. Variables may be empty.
std::vector<Bindings> match_side(const TermString& side, const SymbolString& s);

/// match_side against the production's left-hand side.
std::vector<Bindings> match_production(const Production& p, const SymbolString& s);

struct DerivationStep {
  SymbolString input;
  Production production;
  std::size_t production_index = 0;
  Bindings bindings;
  SymbolString output;
};

/// One step per (production, binding), productions in file order.
/// Throws AlphabetError if `s` uses a symbol outside the alphabet.
std::vector<DerivationStep> step(const PcsSystem& sys, const SymbolString& s);

enum class LeafReason { kQuiescent, kDepthLimit, kStringLimit, kDuplicate };

const char* to_string(LeafReason reason);

struct DerivationNode {
  SymbolString string;
  std::size_t depth = 0;
  std::optional<std::size_t> parent;
  std::optional<DerivationStep> via;
  std::vector<std::size_t> children;
  std::optional<LeafReason> leaf;  // set on nodes that were not expanded
};

/// Breadth-first derivation tree; nodes[0] is the root.
struct Derivation {
  std::vector<DerivationNode> nodes;

  /// Distinct strings in the order they were first produced, root included.
  std::vector<SymbolString> generated() const;
  /// Distinct strings first produced at exactly `depth` steps.
  std::vector<SymbolString> at_depth(std::size_t depth) const;
  /// Strings no production applies to.
  std::vector<SymbolString> terminal() const;
  std::size_t steps() const;
};

/// Expands level by level, each level in lexicographic token order, for at
/// most max_steps levels and at most max_strings distinct strings. A string
/// already produced becomes a duplicate leaf.
Derivation run(const PcsSystem& sys, const SymbolString& input, std::size_t max_steps, std::size_t max_strings);

struct Recognition {
  bool accepted = false;
  /// Forward chain from an axiom to the recognised string.
  std::vector<DerivationStep> witness;
};

/// Applies productions right to left (match the rhs, emit the lhs) breadth
/// first until an axiom is reached or max_steps reverse steps are exhausted.
Recognition recognize(const PcsSystem& sys, const SymbolString& s, std::size_t max_steps);

/// Indented tree, two spaces per level: "<string>  [rule N]" per node and a
/// leaf marker for nodes that were not expanded.
std::string render_derivation(const Derivation& d);

}  // namespace spmatch

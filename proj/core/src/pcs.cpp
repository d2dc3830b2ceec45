#include "spmatch/pcs.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <sstream>

#include "spmatch/error.hpp"

namespace spmatch {

namespace {

bool is_variable_token(const std::string& tok) {
  if (tok.empty() || tok[0] != '$') return false;
  return std::all_of(tok.begin() + 1, tok.end(), [](char ch) { return ch >= '0' && ch <= '9'; });
}

TermString parse_side(const std::vector<std::string>& tokens) {
  TermString side;
  for (const auto& tok : tokens) side.push_back(is_variable_token(tok) ? Term::var(tok) : Term::fixed(Symbol(tok)));
  return side;
}

std::string join(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

void match_from(const TermString& side, std::size_t ti, const SymbolString& s, std::size_t si, Bindings& current,
                std::vector<Bindings>& out) {
  if (ti == side.size()) {
    if (si == s.size()) out.push_back(current);
    return;
  }
  const Term& t = side[ti];
  if (!t.is_variable) {
    if (si < s.size() && s[si] == t.symbol) match_from(side, ti + 1, s, si + 1, current, out);
    return;
  }
  if (auto bound = current.find(t.variable); bound != current.end()) {
    const auto& v = bound->second;
    if (si + v.size() <= s.size() && std::equal(v.begin(), v.end(), s.begin() + static_cast<std::ptrdiff_t>(si)))
      match_from(side, ti + 1, s, si + v.size(), current, out);
    return;
  }
  for (std::size_t end = si; end <= s.size(); ++end) {
    current[t.variable] = SymbolString(s.begin() + static_cast<std::ptrdiff_t>(si),
                                       s.begin() + static_cast<std::ptrdiff_t>(end));
    match_from(side, ti + 1, s, end, current, out);
  }
  current.erase(t.variable);
}

void check_alphabet(const PcsSystem& sys, const SymbolString& s) {
  for (const auto& sym : s)
    if (!sys.in_alphabet(sym)) throw AlphabetError("symbol '" + sym.name() + "' is not in the alphabet");
}

}  // namespace

bool Production::is_normal_form() const {
  std::size_t lhs_vars = 0, rhs_vars = 0;
  for (const auto& t : lhs) lhs_vars += t.is_variable;
  for (const auto& t : rhs) rhs_vars += t.is_variable;
  return lhs_vars == 1 && rhs_vars == 1 && lhs.back().is_variable && rhs.front().is_variable &&
         lhs.back().variable == rhs.front().variable;
}

SymbolString Production::leading() const {
  SymbolString out;
  for (const auto& t : lhs)
    if (!t.is_variable) out.push_back(t.symbol);
  return out;
}

SymbolString Production::trailing() const {
  SymbolString out;
  for (const auto& t : rhs)
    if (!t.is_variable) out.push_back(t.symbol);
  return out;
}

Production parse_production(std::string_view text, std::size_t line) {
  std::istringstream in{std::string(text)};
  std::vector<std::string> left, right;
  bool seen_arrow = false;
  for (std::string tok; in >> tok;) {
    if (tok == "->") {
      if (seen_arrow) throw FormatError("production has two arrows", line);
      seen_arrow = true;
    } else {
      (seen_arrow ? right : left).push_back(tok);
    }
  }
  if (!seen_arrow) throw FormatError("production needs '->'", line);
  if (left.empty()) throw FormatError("production has an empty left-hand side", line);
  Production p{parse_side(left), parse_side(right), join(left) + " -> " + join(right)};
  std::set<std::string> vars;
  for (const auto& t : p.lhs)
    if (t.is_variable && !vars.insert(t.variable).second)
      throw FormatError("variable " + t.variable + " appears twice on the left", line);
  for (const auto& t : p.rhs)
    if (t.is_variable && !vars.count(t.variable))
      throw FormatError("variable " + t.variable + " is not bound on the left", line);
  return p;
}

bool PcsSystem::in_alphabet(const Symbol& s) const {
  return std::find(alphabet.begin(), alphabet.end(), s) != alphabet.end();
}

PcsSystem read_pcs(std::istream& in) {
  PcsSystem sys;
  std::vector<std::pair<Production, std::size_t>> rules;
  std::vector<std::pair<SymbolString, std::size_t>> axioms;
  bool have_alphabet = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line.compare(first, 2, "//") == 0) continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) throw FormatError("expected 'alphabet:', 'axiom:' or 'rule:'", lineno);
    std::string head = line.substr(first, colon - first);
    while (!head.empty() && (head.back() == ' ' || head.back() == '\t')) head.pop_back();
    const std::string body = line.substr(colon + 1);
    if (head == "alphabet") {
      if (have_alphabet) throw FormatError("second alphabet line", lineno);
      have_alphabet = true;
      for (auto& s : to_symbols(body)) {
        if (is_variable_token(s.name())) throw FormatError("'" + s.name() + "' is reserved for variables", lineno);
        if (!sys.in_alphabet(s)) sys.alphabet.push_back(std::move(s));
      }
      if (sys.alphabet.empty()) throw FormatError("empty alphabet", lineno);
    } else if (head == "axiom") {
      auto symbols = to_symbols(body);
      if (symbols.empty()) throw FormatError("empty axiom", lineno);
      axioms.emplace_back(std::move(symbols), lineno);
    } else if (head == "rule") {
      rules.emplace_back(parse_production(body, lineno), lineno);
    } else {
      throw FormatError("unknown directive '" + head + "'", lineno);
    }
  }
  if (!have_alphabet) throw FormatError("missing alphabet line");
  for (auto& [axiom, at] : axioms) {
    for (const auto& s : axiom)
      if (!sys.in_alphabet(s)) throw FormatError("axiom uses '" + s.name() + "' outside the alphabet", at);
    sys.axioms.push_back(std::move(axiom));
  }
  for (auto& [rule, at] : rules) {
    for (const auto* side : {&rule.lhs, &rule.rhs})
      for (const auto& t : *side)
        if (!t.is_variable && !sys.in_alphabet(t.symbol))
          throw FormatError("rule uses '" + t.symbol.name() + "' outside the alphabet", at);
    sys.productions.push_back(std::move(rule));
  }
  if (sys.axioms.empty()) throw FormatError("no axiom");
  if (sys.productions.empty()) throw FormatError("no rule");
  return sys;
}

PcsSystem load_pcs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  return read_pcs(in);
}

SymbolString substitute(const TermString& side, const Bindings& bindings) {
  SymbolString out;
  for (const auto& t : side) {
    if (!t.is_variable) {
      out.push_back(t.symbol);
      continue;
    }
    const auto it = bindings.find(t.variable);
    if (it == bindings.end()) throw ContractError("variable " + t.variable + " is unbound");
    out.insert(out.end(), it->second.begin(), it->second.end());
  }
  return out;
}

std::vector<Bindings> match_side(const TermString& side, const SymbolString& s) {
  std::vector<Bindings> out;
  Bindings current;
  match_from(side, 0, s, 0, current, out);
  return out;
}

std::vector<Bindings> match_production(const Production& p, const SymbolString& s) { return match_side(p.lhs, s); }

std::vector<DerivationStep> step(const PcsSystem& sys, const SymbolString& s) {
  check_alphabet(sys, s);
  std::vector<DerivationStep> out;
  for (std::size_t i = 0; i < sys.productions.size(); ++i) {
    const auto& p = sys.productions[i];
    for (auto& b : match_production(p, s)) {
      auto output = substitute(p.rhs, b);
      out.push_back(DerivationStep{s, p, i, std::move(b), std::move(output)});
    }
  }
  return out;
}

const char* to_string(LeafReason reason) {
  switch (reason) {
    case LeafReason::kQuiescent: return "quiescent";
    case LeafReason::kDepthLimit: return "depth-limit";
    case LeafReason::kStringLimit: return "string-limit";
    case LeafReason::kDuplicate: return "duplicate";
  }
  return "unknown";
}

std::vector<SymbolString> Derivation::generated() const {
  std::vector<SymbolString> out;
  for (const auto& n : nodes)
    if (n.leaf != LeafReason::kDuplicate) out.push_back(n.string);
  return out;
}

std::vector<SymbolString> Derivation::at_depth(std::size_t depth) const {
  std::vector<SymbolString> out;
  for (const auto& n : nodes)
    if (n.depth == depth && n.leaf != LeafReason::kDuplicate) out.push_back(n.string);
  return out;
}

std::vector<SymbolString> Derivation::terminal() const {
  std::vector<SymbolString> out;
  for (const auto& n : nodes)
    if (n.leaf == LeafReason::kQuiescent) out.push_back(n.string);
  return out;
}

std::size_t Derivation::steps() const {
  std::size_t deepest = 0;
  for (const auto& n : nodes) deepest = std::max(deepest, n.depth);
  return deepest;
}

Derivation run(const PcsSystem& sys, const SymbolString& input, std::size_t max_steps, std::size_t max_strings) {
  if (max_steps == 0 || max_strings == 0) throw ContractError("run limits must be at least 1");
  check_alphabet(sys, input);
  Derivation d;
  d.nodes.push_back(DerivationNode{input, 0, std::nullopt, std::nullopt, {}, std::nullopt});
  std::set<SymbolString> seen{input};
  std::vector<std::size_t> level{0};

  for (std::size_t depth = 0; !level.empty(); ++depth) {
    std::sort(level.begin(), level.end(),
              [&](std::size_t x, std::size_t y) { return d.nodes[x].string < d.nodes[y].string; });
    std::vector<std::size_t> next;
    for (std::size_t idx : level) {
      auto steps = step(sys, d.nodes[idx].string);
      if (steps.empty()) {
        d.nodes[idx].leaf = LeafReason::kQuiescent;
        continue;
      }
      if (depth >= max_steps) {
        d.nodes[idx].leaf = LeafReason::kDepthLimit;
        continue;
      }
      if (seen.size() >= max_strings) {
        d.nodes[idx].leaf = LeafReason::kStringLimit;
        continue;
      }
      for (auto& st : steps) {
        DerivationNode child{st.output, depth + 1, idx, std::nullopt, {}, std::nullopt};
        const bool fresh = seen.insert(st.output).second;
        if (!fresh) child.leaf = LeafReason::kDuplicate;
        child.via = std::move(st);
        d.nodes[idx].children.push_back(d.nodes.size());
        if (fresh) next.push_back(d.nodes.size());
        d.nodes.push_back(std::move(child));
      }
    }
    level = std::move(next);
  }
  return d;
}

Recognition recognize(const PcsSystem& sys, const SymbolString& s, std::size_t max_steps) {
  if (max_steps == 0) throw ContractError("recognize needs max_steps of at least 1");
  check_alphabet(sys, s);
  auto is_axiom = [&](const SymbolString& x) {
    return std::find(sys.axioms.begin(), sys.axioms.end(), x) != sys.axioms.end();
  };

  // Each reached string remembers the forward step that leads from it to
  // the string it was reached from.
  std::map<SymbolString, std::optional<DerivationStep>> back;
  back.emplace(s, std::nullopt);
  std::vector<SymbolString> level{s};
  auto witness_from = [&](SymbolString x) {
    Recognition r{true, {}};
    while (back.at(x)) {
      r.witness.push_back(*back.at(x));
      x = r.witness.back().output;
    }
    return r;
  };
  if (is_axiom(s)) return witness_from(s);

  for (std::size_t depth = 0; depth < max_steps && !level.empty(); ++depth) {
    std::vector<SymbolString> next;
    for (const auto& cur : level) {
      for (std::size_t i = 0; i < sys.productions.size(); ++i) {
        const auto& p = sys.productions[i];
        for (auto& b : match_side(p.rhs, cur)) {
          bool bound = true;
          for (const auto& t : p.lhs)
            if (t.is_variable && !b.count(t.variable)) bound = false;
          if (!bound) continue;
          auto prev = substitute(p.lhs, b);
          if (prev.empty() || back.count(prev)) continue;
          back.emplace(prev, DerivationStep{prev, p, i, b, cur});
          if (is_axiom(prev)) return witness_from(prev);
          next.push_back(std::move(prev));
        }
      }
    }
    std::sort(next.begin(), next.end());
    level = std::move(next);
  }
  return Recognition{};
}

std::string render_derivation(const Derivation& d) {
  std::ostringstream out;
  auto visit = [&](auto& self, std::size_t idx) -> void {
    const auto& n = d.nodes[idx];
    out << std::string(2 * n.depth, ' ') << to_text(n.string);
    if (n.via) out << "  [rule " << n.via->production_index + 1 << "]";
    if (n.leaf) out << "  (" << to_string(*n.leaf) << ")";
    out << '\n';
    for (std::size_t c : n.children) self(self, c);
  };
  if (!d.nodes.empty()) visit(visit, 0);
  return out.str();
}

}  // namespace spmatch

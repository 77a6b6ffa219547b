#include "fairplan/formula.hpp"

#include <cctype>
#include <unordered_map>

#include "fairplan/error.hpp"

namespace fairplan {

std::string_view to_string(Dialect dialect) {
  return dialect == Dialect::Ltl ? "ltl" : "ltlf";
}

Dialect parse_dialect(std::string_view text) {
  if (text == "ltl") return Dialect::Ltl;
  if (text == "ltlf") return Dialect::Ltlf;
  throw ValidationError("unknown dialect '" + std::string(text) + "'");
}

Formula Formula::make(Op op, std::string name, std::vector<Formula> kids) {
  return Formula(std::make_shared<const Node>(Node{op, std::move(name), std::move(kids)}));
}

Formula Formula::tt() {
  static const Formula t = make(Op::True, {}, {});
  return t;
}
Formula Formula::ff() {
  static const Formula f = make(Op::False, {}, {});
  return f;
}
Formula Formula::atom(std::string name) {
  if (name.empty()) throw ValidationError("empty atom name");
  for (char c : name) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') {
      throw ValidationError("invalid atom name '" + name + "'");
    }
  }
  return make(Op::Atom, std::move(name), {});
}
Formula Formula::lnot(Formula f) { return make(Op::Not, {}, {std::move(f)}); }
Formula Formula::land(Formula a, Formula b) {
  return make(Op::And, {}, {std::move(a), std::move(b)});
}
Formula Formula::lor(Formula a, Formula b) {
  return make(Op::Or, {}, {std::move(a), std::move(b)});
}
Formula Formula::implies(Formula a, Formula b) {
  return make(Op::Implies, {}, {std::move(a), std::move(b)});
}
Formula Formula::next(Formula f) { return make(Op::Next, {}, {std::move(f)}); }
Formula Formula::until(Formula a, Formula b) {
  return make(Op::Until, {}, {std::move(a), std::move(b)});
}
Formula Formula::release(Formula a, Formula b) {
  return make(Op::Release, {}, {std::move(a), std::move(b)});
}
Formula Formula::eventually(Formula f) { return make(Op::Eventually, {}, {std::move(f)}); }
Formula Formula::always(Formula f) { return make(Op::Always, {}, {std::move(f)}); }

Formula Formula::conjunction(const std::vector<Formula>& parts) {
  if (parts.empty()) return tt();
  Formula out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out = land(out, parts[i]);
  return out;
}

Formula Formula::disjunction(const std::vector<Formula>& parts) {
  if (parts.empty()) return ff();
  Formula out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out = lor(out, parts[i]);
  return out;
}

Formula Formula::next_n(Formula f, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) f = next(std::move(f));
  return f;
}

std::size_t Formula::arity() const { return node_->kids.size(); }

std::size_t Formula::size() const {
  // DAG-shared subtrees are counted once per occurrence; memoize by node.
  std::unordered_map<const void*, std::size_t> memo;
  auto rec = [&](auto&& self, const Formula& f) -> std::size_t {
    if (auto it = memo.find(f.id()); it != memo.end()) return it->second;
    std::size_t n = 1;
    for (const auto& k : f.node_->kids) n += self(self, k);
    memo.emplace(f.id(), n);
    return n;
  };
  return rec(rec, *this);
}

std::set<std::string> Formula::atoms() const {
  std::set<std::string> out;
  std::unordered_map<const void*, bool> seen;
  auto rec = [&](auto&& self, const Formula& f) -> void {
    if (!seen.emplace(f.id(), true).second) return;
    if (f.op() == Op::Atom) out.insert(f.name());
    for (const auto& k : f.node_->kids) self(self, k);
  };
  rec(rec, *this);
  return out;
}

std::string Formula::to_string() const {
  switch (op()) {
    case Op::True: return "true";
    case Op::False: return "false";
    case Op::Atom: return name();
    case Op::Not: return "!" + lhs().to_string();
    case Op::Next: return "X " + lhs().to_string();
    case Op::Eventually: return "F " + lhs().to_string();
    case Op::Always: return "G " + lhs().to_string();
    case Op::And: return "(" + lhs().to_string() + " & " + rhs().to_string() + ")";
    case Op::Or: return "(" + lhs().to_string() + " | " + rhs().to_string() + ")";
    case Op::Implies: return "(" + lhs().to_string() + " -> " + rhs().to_string() + ")";
    case Op::Until: return "(" + lhs().to_string() + " U " + rhs().to_string() + ")";
    case Op::Release:
      // No R in the surface grammar: print the dual.
      return "!(!" + lhs().to_string() + " U !" + rhs().to_string() + ")";
  }
  return {};
}

Formula Formula::normalize() const {
  std::unordered_map<const void*, Formula> memo;
  auto rec = [&](auto&& self, const Formula& f) -> Formula {
    if (auto it = memo.find(f.id()); it != memo.end()) return it->second;
    auto kid = [&](std::size_t i) { return self(self, f.node_->kids[i]); };
    Formula out = f;
    switch (f.op()) {
      case Op::True:
      case Op::False:
      case Op::Atom: break;
      case Op::Not: out = lnot(kid(0)); break;
      case Op::Next: out = next(kid(0)); break;
      case Op::And: out = land(kid(0), kid(1)); break;
      case Op::Until: out = until(kid(0), kid(1)); break;
      case Op::Or: out = lnot(land(lnot(kid(0)), lnot(kid(1)))); break;
      case Op::Implies: out = lnot(land(kid(0), lnot(kid(1)))); break;
      case Op::Release: out = lnot(until(lnot(kid(0)), lnot(kid(1)))); break;
      case Op::Eventually: out = until(tt(), kid(0)); break;
      case Op::Always: out = lnot(until(tt(), lnot(kid(0)))); break;
    }
    memo.emplace(f.id(), out);
    return out;
  };
  return rec(rec, *this);
}

bool Formula::operator==(const Formula& other) const {
  if (node_ == other.node_) return true;
  if (op() != other.op() || name() != other.name() || arity() != other.arity()) return false;
  for (std::size_t i = 0; i < arity(); ++i) {
    if (!(node_->kids[i] == other.node_->kids[i])) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

enum class Tok { Ident, True, False, Not, Next, Event, Always, And, Or, Implies, Until,
                 LParen, RParen, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
      std::string word(s.substr(start, i - start));
      Tok kind = Tok::Ident;
      if (word == "true") kind = Tok::True;
      else if (word == "false") kind = Tok::False;
      else if (word == "X") kind = Tok::Next;
      else if (word == "F") kind = Tok::Event;
      else if (word == "G") kind = Tok::Always;
      else if (word == "U") kind = Tok::Until;
      out.push_back({kind, std::move(word), start});
      continue;
    }
    switch (c) {
      case '!': out.push_back({Tok::Not, "!", start}); ++i; break;
      case '&': out.push_back({Tok::And, "&", start}); ++i; break;
      case '|': out.push_back({Tok::Or, "|", start}); ++i; break;
      case '(': out.push_back({Tok::LParen, "(", start}); ++i; break;
      case ')': out.push_back({Tok::RParen, ")", start}); ++i; break;
      case '-':
        if (i + 1 < s.size() && s[i + 1] == '>') {
          out.push_back({Tok::Implies, "->", start});
          i += 2;
          break;
        }
        [[fallthrough]];
      default:
        throw ParseError(std::string("unknown token '") + c + "'", start);
    }
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Formula parse() {
    Formula f = implication();
    if (peek().kind != Tok::End) throw ParseError("unexpected '" + peek().text + "'", peek().pos);
    return f;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& take() { return toks_[pos_++]; }

  Formula implication() {
    Formula lhs = disjunction();
    if (peek().kind == Tok::Implies) {
      take();
      return Formula::implies(lhs, implication());
    }
    return lhs;
  }
  Formula disjunction() {
    Formula f = conjunction();
    while (peek().kind == Tok::Or) {
      take();
      f = Formula::lor(f, conjunction());
    }
    return f;
  }
  Formula conjunction() {
    Formula f = until();
    while (peek().kind == Tok::And) {
      take();
      f = Formula::land(f, until());
    }
    return f;
  }
  Formula until() {
    Formula lhs = unary();
    if (peek().kind == Tok::Until) {
      take();
      return Formula::until(lhs, until());
    }
    return lhs;
  }
  Formula unary() {
    switch (peek().kind) {
      case Tok::Not: take(); return Formula::lnot(unary());
      case Tok::Next: take(); return Formula::next(unary());
      case Tok::Event: take(); return Formula::eventually(unary());
      case Tok::Always: take(); return Formula::always(unary());
      default: return primary();
    }
  }
  Formula primary() {
    const Token& t = take();
    switch (t.kind) {
      case Tok::True: return Formula::tt();
      case Tok::False: return Formula::ff();
      case Tok::Ident: return Formula::atom(t.text);
      case Tok::LParen: {
        Formula f = implication();
        if (peek().kind != Tok::RParen) throw ParseError("expected ')'", peek().pos);
        take();
        return f;
      }
      case Tok::End: throw ParseError("unexpected end of input", t.pos);
      default: throw ParseError("unexpected '" + t.text + "'", t.pos);
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

Formula parse_formula(std::string_view text, Dialect /*dialect*/) {
  // Both dialects share one grammar; the dialect only changes semantics.
  return Parser(tokenize(text)).parse();
}

}  // namespace fairplan

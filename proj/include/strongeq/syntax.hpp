#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "strongeq/errors.hpp"

namespace strongeq {

// A set of atoms, one bit per atom id.
using AtomSet = std::uint64_t;

inline constexpr std::size_t kMaxSessionAtoms = 64;

struct Atom {
  std::uint32_t id = 0;
  friend constexpr auto operator<=>(Atom, Atom) = default;
};

namespace bits {

constexpr AtomSet singleton(Atom a) { return AtomSet{1} << a.id; }
constexpr AtomSet singleton(std::size_t id) { return AtomSet{1} << id; }
constexpr AtomSet first_n(std::size_t n) {
  return n >= 64 ? ~AtomSet{0} : (AtomSet{1} << n) - 1;
}
constexpr bool contains(AtomSet s, Atom a) { return (s >> a.id) & 1U; }
constexpr bool subset(AtomSet a, AtomSet b) { return (a & ~b) == 0; }
constexpr std::size_t size(AtomSet s) { return static_cast<std::size_t>(std::popcount(s)); }
constexpr std::size_t lowest(AtomSet s) { return static_cast<std::size_t>(std::countr_zero(s)); }

template <typename Fn>
constexpr void for_each(AtomSet s, Fn&& fn) {
  while (s != 0) {
    fn(Atom{static_cast<std::uint32_t>(std::countr_zero(s))});
    s &= s - 1;
  }
}

// Strict weak order: cardinality first, then the sorted id lists lexicographically.
// Among equal-size sets the one owning the lowest differing atom comes first.
constexpr bool card_lex_less(AtomSet a, AtomSet b) {
  const auto ca = size(a), cb = size(b);
  if (ca != cb) return ca < cb;
  const AtomSet diff = a ^ b;
  if (diff == 0) return false;
  return (a & (diff & (~diff + 1))) != 0;
}

// Visits every subset of `universe` in card_lex_less order; stops when fn returns false.
template <typename Fn>
bool for_each_subset_ordered(AtomSet universe, Fn&& fn) {
  std::vector<std::size_t> ids;
  for_each(universe, [&](Atom a) { ids.push_back(a.id); });
  const std::size_t n = ids.size();
  std::vector<std::size_t> pick;
  for (std::size_t k = 0; k <= n; ++k) {
    pick.resize(k);
    std::iota(pick.begin(), pick.end(), 0);
    while (true) {
      AtomSet s = 0;
      for (auto i : pick) s |= singleton(ids[i]);
      if (!fn(s)) return false;
      // next k-combination of [0, n) in lexicographic order
      std::size_t i = k;
      while (i > 0 && pick[i - 1] == n - k + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return true;
}

}  // namespace bits

// Per-session atom interning. Append-only: an id never changes once handed out.
class SymbolTable {
public:
  Atom intern(std::string_view name) {
    if (auto it = ids_.find(std::string(name)); it != ids_.end()) return Atom{it->second};
    if (names_.size() >= kMaxSessionAtoms) {
      throw GuardError("symbol table supports at most " + std::to_string(kMaxSessionAtoms) +
                       " atoms");
    }
    const auto id = static_cast<std::uint32_t>(names_.size());
    names_.emplace_back(name);
    ids_.emplace(names_.back(), id);
    return Atom{id};
  }

  std::optional<Atom> find(std::string_view name) const {
    if (auto it = ids_.find(std::string(name)); it != ids_.end()) return Atom{it->second};
    return std::nullopt;
  }

  const std::string& name(Atom a) const { return names_.at(a.id); }
  std::size_t size() const noexcept { return names_.size(); }

  std::vector<std::string> names(AtomSet s) const {
    std::vector<std::string> out;
    bits::for_each(s, [&](Atom a) { out.push_back(name(a)); });
    return out;
  }

private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::uint32_t> ids_;
};

// Hd <- Ps, not Ng, each component a set.
struct Rule {
  AtomSet hd = 0;
  AtomSet ps = 0;
  AtomSet ng = 0;

  constexpr AtomSet atoms() const { return hd | ps | ng; }
  constexpr std::size_t literal_count() const {
    return bits::size(hd) + bits::size(ps) + bits::size(ng);
  }
  constexpr bool empty() const { return atoms() == 0; }

  friend constexpr auto operator<=>(const Rule&, const Rule&) = default;
};

constexpr bool is_canonical(const Rule& r) {
  return (r.hd & r.ps) == 0 && (r.hd & r.ng) == 0 && (r.ps & r.ng) == 0;
}

// Rules in first-insertion order, no two equal.
class Program {
public:
  Program() = default;
  Program(std::initializer_list<Rule> rules) {
    for (const auto& r : rules) add(r);
  }
  explicit Program(std::span<const Rule> rules) {
    for (const auto& r : rules) add(r);
  }

  // Returns false when an equal rule is already present.
  bool add(const Rule& r) {
    if (contains(r)) return false;
    rules_.push_back(r);
    return true;
  }

  bool contains(const Rule& r) const {
    return std::find(rules_.begin(), rules_.end(), r) != rules_.end();
  }

  AtomSet atoms() const {
    AtomSet s = 0;
    for (const auto& r : rules_) s |= r.atoms();
    return s;
  }

  std::span<const Rule> rules() const noexcept { return rules_; }
  std::size_t size() const noexcept { return rules_.size(); }
  bool empty() const noexcept { return rules_.empty(); }
  const Rule& operator[](std::size_t i) const { return rules_[i]; }
  auto begin() const noexcept { return rules_.begin(); }
  auto end() const noexcept { return rules_.end(); }

  friend bool operator==(const Program&, const Program&) = default;

private:
  std::vector<Rule> rules_;
};

namespace detail {

class RuleLexer {
public:
  enum class Tok { Atom, Not, If, Semi, Comma, Dot, End };

  struct Token {
    Tok kind;
    std::string_view text;
    std::size_t line;
    std::size_t column;
  };

  explicit RuleLexer(std::string_view src) : src_(src) { advance(); }

  const Token& peek() const noexcept { return cur_; }

  Token take() {
    Token t = cur_;
    advance();
    return t;
  }

private:
  void advance() {
    skip_space_and_comments();
    const std::size_t line = line_, col = col_;
    if (pos_ >= src_.size()) {
      cur_ = {Tok::End, {}, line, col};
      return;
    }
    const char c = src_[pos_];
    if (c >= 'a' && c <= 'z') {
      std::size_t end = pos_ + 1;
      while (end < src_.size() && is_ident_char(src_[end])) ++end;
      auto text = src_.substr(pos_, end - pos_);
      bump(end - pos_);
      cur_ = {text == "not" ? Tok::Not : Tok::Atom, text, line, col};
      return;
    }
    switch (c) {
      case ';': bump(1); cur_ = {Tok::Semi, ";", line, col}; return;
      case ',': bump(1); cur_ = {Tok::Comma, ",", line, col}; return;
      case '.': bump(1); cur_ = {Tok::Dot, ".", line, col}; return;
      case ':':
        if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '-') {
          bump(2);
          cur_ = {Tok::If, ":-", line, col};
          return;
        }
        break;
      default: break;
    }
    if (c >= 'A' && c <= 'Z') {
      throw ParseError(ParseError::Kind::Syntax, line, col,
                       "atoms must start with a lowercase letter (variables are not supported)");
    }
    throw ParseError(ParseError::Kind::Syntax, line, col,
                     std::string("unexpected character '") + c + "'");
  }

  static bool is_ident_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
  }

  void skip_space_and_comments() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '%') {
        while (pos_ < src_.size() && src_[pos_] != '\n') bump(1);
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v') {
        bump(1);
      } else {
        break;
      }
    }
  }

  void bump(std::size_t n) {
    for (std::size_t i = 0; i < n; ++i, ++pos_) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
  Token cur_{Tok::End, {}, 1, 1};
};

inline const char* describe(RuleLexer::Tok t) {
  switch (t) {
    case RuleLexer::Tok::Atom: return "atom";
    case RuleLexer::Tok::Not: return "'not'";
    case RuleLexer::Tok::If: return "':-'";
    case RuleLexer::Tok::Semi: return "';'";
    case RuleLexer::Tok::Comma: return "','";
    case RuleLexer::Tok::Dot: return "'.'";
    case RuleLexer::Tok::End: return "end of input";
  }
  return "token";
}

// Atom expected after a separator; a missing one is an empty token.
inline Atom expect_atom(RuleLexer& lex, SymbolTable& table, const char* after) {
  const auto& t = lex.peek();
  if (t.kind == RuleLexer::Tok::Atom) return table.intern(lex.take().text);
  const auto kind = (t.kind == RuleLexer::Tok::Not) ? ParseError::Kind::Syntax
                                                    : ParseError::Kind::EmptyToken;
  throw ParseError(kind, t.line, t.column,
                   std::string("expected atom after ") + after + ", found " + describe(t.kind));
}

inline Rule parse_statement(RuleLexer& lex, SymbolTable& table) {
  using Tok = RuleLexer::Tok;
  Rule r;
  if (lex.peek().kind == Tok::Atom) {
    r.hd |= bits::singleton(table.intern(lex.take().text));
    while (lex.peek().kind == Tok::Semi) {
      lex.take();
      r.hd |= bits::singleton(expect_atom(lex, table, "';'"));
    }
  } else if (lex.peek().kind == Tok::Not) {
    const auto& t = lex.peek();
    throw ParseError(ParseError::Kind::Syntax, t.line, t.column, "'not' is not allowed in a head");
  }
  if (lex.peek().kind == Tok::If) {
    lex.take();
    if (lex.peek().kind != Tok::Dot) {
      const char* after = "':-'";
      while (true) {
        if (lex.peek().kind == Tok::Not) {
          lex.take();
          r.ng |= bits::singleton(expect_atom(lex, table, "'not'"));
        } else {
          r.ps |= bits::singleton(expect_atom(lex, table, after));
        }
        if (lex.peek().kind != Tok::Comma) break;
        lex.take();
        after = "','";
      }
    }
  }
  const auto& t = lex.peek();
  if (t.kind != Tok::Dot) {
    throw ParseError(ParseError::Kind::Syntax, t.line, t.column,
                     std::string("expected '.', found ") + describe(t.kind));
  }
  lex.take();
  return r;
}

}  // namespace detail

// Parses exactly one statement, e.g. "a ; b :- c, not d."
inline Rule parse_rule(std::string_view text, SymbolTable& table) {
  detail::RuleLexer lex(text);
  if (lex.peek().kind == detail::RuleLexer::Tok::End) {
    throw ParseError(ParseError::Kind::EmptyToken, 1, 1, "expected a rule, found end of input");
  }
  Rule r = detail::parse_statement(lex, table);
  if (const auto& t = lex.peek(); t.kind != detail::RuleLexer::Tok::End) {
    throw ParseError(ParseError::Kind::Syntax, t.line, t.column,
                     "trailing input after the rule");
  }
  return r;
}

inline Program parse_program(std::string_view text, SymbolTable& table) {
  detail::RuleLexer lex(text);
  Program p;
  while (lex.peek().kind != detail::RuleLexer::Tok::End) p.add(detail::parse_statement(lex, table));
  return p;
}

inline std::string format_rule(const Rule& r, const SymbolTable& table) {
  std::string out;
  bool first = true;
  bits::for_each(r.hd, [&](Atom a) {
    if (!first) out += " ; ";
    out += table.name(a);
    first = false;
  });
  if (r.ps == 0 && r.ng == 0) {
    out += r.hd == 0 ? ":- ." : ".";
    return out;
  }
  out += r.hd == 0 ? ":- " : " :- ";
  first = true;
  bits::for_each(r.ps, [&](Atom a) {
    if (!first) out += ", ";
    out += table.name(a);
    first = false;
  });
  bits::for_each(r.ng, [&](Atom a) {
    if (!first) out += ", ";
    out += "not ";
    out += table.name(a);
    first = false;
  });
  out += '.';
  return out;
}

inline std::string format_program(const Program& p, const SymbolTable& table) {
  std::string out;
  for (const auto& r : p) {
    out += format_rule(r, table);
    out += '\n';
  }
  return out;
}

// Total map from atom ids to atoms. Entry i is the image of atom i.
using AtomMap = std::vector<std::optional<Atom>>;

inline AtomSet map_atoms(AtomSet s, const AtomMap& f) {
  AtomSet out = 0;
  bits::for_each(s, [&](Atom a) {
    if (a.id >= f.size() || !f[a.id]) {
      throw PreconditionError("rename: atom " + std::to_string(a.id) + " has no image");
    }
    if (f[a.id]->id >= kMaxSessionAtoms) throw PreconditionError("rename: image id out of range");
    out |= bits::singleton(*f[a.id]);
  });
  return out;
}

inline Rule rename(const Rule& r, const AtomMap& f) {
  return Rule{map_atoms(r.hd, f), map_atoms(r.ps, f), map_atoms(r.ng, f)};
}

// Maps every rule through f; rules that become equal are merged.
inline Program rename(const Program& p, const AtomMap& f) {
  Program out;
  for (const auto& r : p) out.add(rename(r, f));
  return out;
}

inline constexpr std::size_t kIsoMaxAtoms = 8;

// Least renaming of the tuple (position-wise, lexicographic on (hd, ps, ng)) over
// every bijection from its occurring atoms onto ids 0..n-1.
inline std::vector<Rule> iso_canonical_form(std::span<const Rule> rules) {
  AtomSet occurring = 0;
  for (const auto& r : rules) occurring |= r.atoms();
  std::vector<std::uint32_t> ids;
  bits::for_each(occurring, [&](Atom a) { ids.push_back(a.id); });
  if (ids.size() > kIsoMaxAtoms) {
    throw GuardError("iso_canonical_form: tuple mentions " + std::to_string(ids.size()) +
                     " atoms, limit is " + std::to_string(kIsoMaxAtoms));
  }
  std::vector<std::uint32_t> image(ids.size());
  std::iota(image.begin(), image.end(), 0U);

  auto relabel = [&](AtomSet s) {
    AtomSet out = 0;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if ((s >> ids[i]) & 1U) out |= bits::singleton(image[i]);
    }
    return out;
  };

  std::vector<Rule> best, cand(rules.size());
  do {
    for (std::size_t i = 0; i < rules.size(); ++i) {
      cand[i] = Rule{relabel(rules[i].hd), relabel(rules[i].ps), relabel(rules[i].ng)};
    }
    if (best.empty() || cand < best) best = cand;
  } while (std::next_permutation(image.begin(), image.end()));
  return best;
}

}  // namespace strongeq

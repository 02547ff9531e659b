#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "strongeq/strongeq.hpp"

namespace strongeq::test {

// Parses rules and programs against one shared symbol table.
struct Lang {
  SymbolTable table;

  Lang() = default;
  explicit Lang(std::initializer_list<const char*> atoms) {
    for (auto a : atoms) table.intern(a);
  }

  Rule rule(std::string_view text) { return parse_rule(text, table); }
  Program prog(std::string_view text) { return parse_program(text, table); }
  AtomSet set(std::initializer_list<const char*> atoms) {
    AtomSet s = 0;
    for (auto a : atoms) s |= bits::singleton(table.intern(a));
    return s;
  }
  std::string str(const Rule& r) const { return format_rule(r, table); }
};

// Names a1..aN bound to ids 0..N-1.
inline Lang numbered(std::size_t n) {
  Lang l;
  l.table = enumeration_symbols(n);
  return l;
}

// Truth-table decision of the primed/unprimed encoding: every assignment of L ∪ L'
// is tried, including those where some p holds but p' does not.
inline bool tautology_oracle(std::span<const Rule> p1, std::span<const Rule> p2) {
  AtomSet lang = 0;
  for (const auto& r : p1) lang |= r.atoms();
  for (const auto& r : p2) lang |= r.atoms();
  std::vector<std::size_t> ids;
  bits::for_each(lang, [&](Atom a) { ids.push_back(a.id); });
  const std::size_t n = ids.size();

  auto body_true = [](AtomSet pos, AtomSet neg_primed_false, AtomSet val, AtomSet val_primed) {
    return (pos & ~val) == 0 && (neg_primed_false & val_primed) == 0;
  };
  auto delta = [&](const Rule& r, AtomSet u, AtomSet v) {
    const bool imp3 = !body_true(r.ps, r.ng, u, v) || (r.hd & u) != 0;
    const bool imp4 = !body_true(r.ps, r.ng, v, v) || (r.hd & v) != 0;
    return imp3 && imp4;
  };
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << (2 * n)); ++code) {
    AtomSet u = 0, v = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if ((code >> i) & 1U) u |= bits::singleton(ids[i]);
      if ((code >> (n + i)) & 1U) v |= bits::singleton(ids[i]);
    }
    const bool antecedent = (u & ~v) == 0;
    bool c1 = true, c2 = true;
    for (const auto& r : p1) c1 = c1 && delta(r, u, v);
    for (const auto& r : p2) c2 = c2 && delta(r, u, v);
    if (antecedent && c1 != c2) return false;
  }
  return true;
}

// Each atom lands in one of hd/ps/ng/none, with a `mess` chance of also landing in a
// second component so non-canonical rules show up.
inline Rule random_rule(std::mt19937_64& rng, std::size_t atoms, double mess = 0.15) {
  std::uniform_int_distribution<int> slot(0, 3);
  std::bernoulli_distribution extra(mess);
  Rule r;
  for (std::size_t i = 0; i < atoms; ++i) {
    const AtomSet b = bits::singleton(i);
    auto put = [&](int s) {
      if (s == 0) r.hd |= b;
      if (s == 1) r.ps |= b;
      if (s == 2) r.ng |= b;
    };
    put(slot(rng));
    if (extra(rng)) put(slot(rng));
  }
  return r;
}

// Fully uniform over all 2^(3a) masks, empty rule included.
inline Rule uniform_rule(std::mt19937_64& rng, std::size_t atoms) {
  std::uniform_int_distribution<std::uint64_t> d(0, bits::first_n(atoms));
  return Rule{d(rng), d(rng), d(rng)};
}

inline Program random_program(std::mt19937_64& rng, std::size_t atoms, std::size_t max_rules,
                              double mess = 0.15) {
  std::uniform_int_distribution<std::size_t> count(0, max_rules);
  Program p;
  const std::size_t n = count(rng);
  for (std::size_t i = 0; i < n; ++i) p.add(random_rule(rng, atoms, mess));
  return p;
}

inline Program join(const Program& a, const Program& b) {
  Program out = a;
  for (const auto& r : b) out.add(r);
  return out;
}

// Random bijection on ids 0..n-1.
inline AtomMap random_bijection(std::mt19937_64& rng, std::size_t n) {
  std::vector<std::uint32_t> img(n);
  for (std::size_t i = 0; i < n; ++i) img[i] = static_cast<std::uint32_t>(i);
  std::shuffle(img.begin(), img.end(), rng);
  AtomMap f(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = Atom{img[i]};
  return f;
}

// Random total map on ids 0..n-1 (not necessarily injective).
inline AtomMap random_map(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<std::uint32_t> d(0, static_cast<std::uint32_t>(n - 1));
  AtomMap f(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = Atom{d(rng)};
  return f;
}

}  // namespace strongeq::test

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "strongeq/syntax.hpp"

namespace strongeq {

// Here-and-there pair: x is the unprimed (here) valuation, y the primed (there) one.
struct HTPair {
  AtomSet x = 0;
  AtomSet y = 0;
  friend constexpr bool operator==(HTPair, HTPair) = default;
};

struct SEVerdict {
  bool equivalent = true;
  std::optional<HTPair> countermodel;  // set iff !equivalent
};

inline constexpr std::size_t kOracleMaxAtoms = 24;

// Both implications of the rule's translation under (x, y):
//   Ps ⊆ x  and Ng ∩ y = ∅  ⇒  Hd ∩ x ≠ ∅
//   Ps ⊆ y  and Ng ∩ y = ∅  ⇒  Hd ∩ y ≠ ∅
// Empty bodies make the antecedent true; empty heads make the consequent false.
constexpr bool delta_holds_unchecked(const Rule& r, HTPair pair) {
  if ((r.ng & pair.y) != 0) return true;
  if (bits::subset(r.ps, pair.x) && (r.hd & pair.x) == 0) return false;
  if (bits::subset(r.ps, pair.y) && (r.hd & pair.y) == 0) return false;
  return true;
}

inline bool delta_holds(const Rule& r, HTPair pair) {
  if (!bits::subset(pair.x, pair.y)) throw PreconditionError("delta_holds: x is not a subset of y");
  return delta_holds_unchecked(r, pair);
}

constexpr bool delta_holds_all(std::span<const Rule> rules, HTPair pair) {
  for (const auto& r : rules) {
    if (!delta_holds_unchecked(r, pair)) return false;
  }
  return true;
}

namespace detail {

inline AtomSet language_of(std::span<const Rule> a, std::span<const Rule> b) {
  AtomSet lang = 0;
  for (const auto& r : a) lang |= r.atoms();
  for (const auto& r : b) lang |= r.atoms();
  return lang;
}

}  // namespace detail

// Validity of the primed/unprimed encoding, decided over every pair x ⊆ y ⊆ L with
// L the atoms of both programs. Pairs with x ⊄ y satisfy the encoding vacuously.
// The first failing pair is reported in (y, x) card-lex order.
inline SEVerdict strongly_equivalent(std::span<const Rule> p1, std::span<const Rule> p2,
                                     std::size_t max_atoms = kOracleMaxAtoms) {
  const AtomSet lang = detail::language_of(p1, p2);
  if (bits::size(lang) > max_atoms) {
    throw GuardError("strongly_equivalent: programs have " + std::to_string(bits::size(lang)) +
                     " atoms, limit is " + std::to_string(max_atoms));
  }
  SEVerdict verdict;
  bits::for_each_subset_ordered(lang, [&](AtomSet y) {
    return bits::for_each_subset_ordered(y, [&](AtomSet x) {
      const HTPair pair{x, y};
      if (delta_holds_all(p1, pair) != delta_holds_all(p2, pair)) {
        verdict.equivalent = false;
        verdict.countermodel = pair;
        return false;
      }
      return true;
    });
  });
  return verdict;
}

inline SEVerdict strongly_equivalent(const Program& p1, const Program& p2,
                                     std::size_t max_atoms = kOracleMaxAtoms) {
  return strongly_equivalent(p1.rules(), p2.rules(), max_atoms);
}

// Same decision as strongly_equivalent without ordering or a countermodel.
inline bool se_holds(std::span<const Rule> p1, std::span<const Rule> p2) {
  const AtomSet lang = detail::language_of(p1, p2);
  for (AtomSet y = lang;; y = (y - 1) & lang) {
    for (AtomSet x = y;; x = (x - 1) & y) {
      const HTPair pair{x, y};
      if (delta_holds_all(p1, pair) != delta_holds_all(p2, pair)) return false;
      if (x == 0) break;
    }
    if (y == 0) break;
  }
  return true;
}

// Precomputed delta truth tables: one row per rule, one column per HT pair over the
// first `atom_count` ids. Deciding an SE query becomes word-wise AND and compare.
// Extending the language with atoms no rule mentions does not change the verdict.
class DeltaMatrix {
public:
  DeltaMatrix(std::size_t atom_count, std::span<const Rule> rules) : atom_count_(atom_count) {
    const AtomSet lang = bits::first_n(atom_count);
    for (const auto& r : rules) {
      if (!bits::subset(r.atoms(), lang)) {
        throw PreconditionError("DeltaMatrix: rule mentions an atom outside the language");
      }
    }
    std::vector<HTPair> pairs;
    for (AtomSet y = 0; y <= lang; ++y) {
      for (AtomSet x = y;; x = (x - 1) & y) {
        pairs.push_back({x, y});
        if (x == 0) break;
      }
    }
    pair_count_ = pairs.size();
    words_ = (pair_count_ + 63) / 64;
    rows_.assign(rules.size() * words_, ~std::uint64_t{0});
    for (std::size_t i = 0; i < rules.size(); ++i) {
      std::uint64_t* row = &rows_[i * words_];
      for (std::size_t c = 0; c < pair_count_; ++c) {
        if (!delta_holds_unchecked(rules[i], pairs[c])) row[c / 64] &= ~(std::uint64_t{1} << (c % 64));
      }
    }
  }

  static std::size_t words_for(std::size_t atom_count) {
    std::size_t pairs = 1;
    for (std::size_t i = 0; i < atom_count; ++i) pairs *= 3;
    return (pairs + 63) / 64;
  }

  std::size_t atom_count() const noexcept { return atom_count_; }
  std::size_t pair_count() const noexcept { return pair_count_; }
  std::size_t rows() const noexcept { return words_ == 0 ? 0 : rows_.size() / words_; }

  // Rows are indices into the rule list given at construction.
  bool equivalent(std::span<const std::uint32_t> lhs, std::span<const std::uint32_t> rhs) const {
    for (std::size_t w = 0; w < words_; ++w) {
      std::uint64_t l = ~std::uint64_t{0}, r = ~std::uint64_t{0};
      for (auto i : lhs) l &= rows_[i * words_ + w];
      for (auto i : rhs) r &= rows_[i * words_ + w];
      if (l != r) return false;
    }
    return true;
  }

private:
  std::size_t atom_count_;
  std::size_t pair_count_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> rows_;
};

}  // namespace strongeq

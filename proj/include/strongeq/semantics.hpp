#pragma once

#include <string>
#include <vector>

#include "strongeq/syntax.hpp"

namespace strongeq {

using Interpretation = AtomSet;

inline constexpr std::size_t kAnswerSetMaxAtoms = 20;

// Gelfond-Lifschitz reduct: rules blocked by x are dropped, `not` literals stripped.
inline Program reduct(const Program& p, Interpretation x) {
  Program out;
  for (const auto& r : p) {
    if ((r.ng & x) != 0) continue;
    out.add(Rule{r.hd, r.ps, 0});
  }
  return out;
}

// Classical satisfaction of a not-free rule.
inline bool satisfies(Interpretation x, const Rule& r) {
  if (r.ng != 0) throw PreconditionError("satisfies: rule has a negative body");
  return !bits::subset(r.ps, x) || (r.hd & x) != 0;
}

inline bool satisfies_all(Interpretation x, const Program& not_free) {
  for (const auto& r : not_free) {
    if (!satisfies(x, r)) return false;
  }
  return true;
}

inline bool is_answer_set(const Program& p, Interpretation x) {
  const Program px = reduct(p, x);
  if (!satisfies_all(x, px)) return false;
  if (x == 0) return true;
  for (AtomSet s = (x - 1) & x; ; s = (s - 1) & x) {
    if (satisfies_all(s, px)) return false;
    if (s == 0) break;
  }
  return true;
}

// All answer sets, ordered by cardinality then by sorted atom ids.
inline std::vector<Interpretation> answer_sets(const Program& p,
                                               std::size_t max_atoms = kAnswerSetMaxAtoms) {
  const AtomSet lang = p.atoms();
  if (bits::size(lang) > max_atoms) {
    throw GuardError("answer_sets: program has " + std::to_string(bits::size(lang)) +
                     " atoms, limit is " + std::to_string(max_atoms));
  }
  std::vector<Interpretation> out;
  bits::for_each_subset_ordered(lang, [&](AtomSet x) {
    if (is_answer_set(p, x)) out.push_back(x);
    return true;
  });
  return out;
}

inline bool equivalent(const Program& p1, const Program& p2,
                       std::size_t max_atoms = kAnswerSetMaxAtoms) {
  const AtomSet lang = p1.atoms() | p2.atoms();
  if (bits::size(lang) > max_atoms) {
    throw GuardError("equivalent: programs have " + std::to_string(bits::size(lang)) +
                     " atoms, limit is " + std::to_string(max_atoms));
  }
  return answer_sets(p1, max_atoms) == answer_sets(p2, max_atoms);
}

}  // namespace strongeq

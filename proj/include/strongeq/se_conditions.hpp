#pragma once

#include <cstddef>
#include <optional>

#include "strongeq/syntax.hpp"

// Exact syntactic characterizations of strong equivalence for small k-m-n shapes:
// k shared rules, m rules on the left, n rules on the right.

namespace strongeq {

// {r} is strongly equivalent to the empty program.
constexpr bool cond_0_1_0(const Rule& r) { return ((r.hd | r.ng) & r.ps) != 0; }

// {r1, r2} is strongly equivalent to {r1}: r2 may be deleted given r1.
constexpr bool cond_1_1_0(const Rule& r1, const Rule& r2) {
  return cond_0_1_0(r2) || (bits::subset(r1.ps, r2.ps) && bits::subset(r1.ng, r2.ng) &&
                            bits::subset(r1.hd, r2.hd | r2.ng));
}

// r1 s-implies r2: some A ⊆ Ng(r2) has Hd(r1) ⊆ Hd(r2) ∪ A, Ng(r1) ⊆ Ng(r2) \ A and
// Ps(r1) ⊆ Ps(r2). The largest admissible A is Ng(r2) \ Ng(r1), so testing it suffices.
constexpr bool s_implies(const Rule& r1, const Rule& r2) {
  const AtomSet a = r2.ng & ~r1.ng;
  return bits::subset(r1.hd, r2.hd | a) && bits::subset(r1.ng, r2.ng) &&
         bits::subset(r1.ps, r2.ps);
}

// {r1} is strongly equivalent to {r2}.
constexpr bool cond_0_1_1(const Rule& r1, const Rule& r2) {
  return (cond_0_1_0(r1) && cond_0_1_0(r2)) ||
         (r1.ps == r2.ps && r1.ng == r2.ng && (r1.hd | r1.ng) == (r2.hd | r2.ng));
}

namespace detail {

inline void require_canonical(const Rule& r, const char* who) {
  if (!is_canonical(r)) throw PreconditionError(std::string(who) + ": rule is not canonical");
}

constexpr AtomSet witness_candidates(const Rule& r1, const Rule& r2) {
  return (r1.ps | r2.ps) & (r1.hd | r2.hd | r1.ng | r2.ng);
}

// Atoms of r1 or r2 that r3 does not cover. The covering condition holds for p iff
// this set is a subset of {p}.
constexpr AtomSet uncovered_by(const Rule& r1, const Rule& r2, const Rule& r3) {
  return ((r1.hd | r2.hd) & ~(r3.hd | r3.ng)) | ((r1.ps | r2.ps) & ~r3.ps) |
         ((r1.ng | r2.ng) & ~r3.ng);
}

constexpr bool is_deletion_witness(const Rule& r1, const Rule& r2, const Rule& r3, Atom p) {
  const AtomSet pm = bits::singleton(p);
  if ((witness_candidates(r1, r2) & pm) == 0) return false;
  if (!bits::subset(uncovered_by(r1, r2, r3), pm)) return false;
  if ((r1.ps & r2.ng & pm) != 0 && (r1.hd & r3.hd) != 0) return false;
  if ((r2.ps & r1.ng & pm) != 0 && (r2.hd & r3.hd) != 0) return false;
  return true;
}

}  // namespace detail

// Least atom p witnessing the third deletion condition for r3 given r1 and r2:
//   p ∈ (Ps1 ∪ Ps2) ∩ (Hd1 ∪ Hd2 ∪ Ng1 ∪ Ng2);
//   apart from p, the heads of r1, r2 lie in Hd3 ∪ Ng3, their positive bodies in Ps3,
//   their negative bodies in Ng3;
//   p ∈ Ps1 ∩ Ng2 requires Hd1 ∩ Hd3 = ∅, and symmetrically p ∈ Ps2 ∩ Ng1 requires
//   Hd2 ∩ Hd3 = ∅.
// Worked examples elsewhere call this "condition (4)" with the last two clauses as
// "(4.3)" and "(4.4)"; here it is the third of the three alternatives.
inline std::optional<Atom> deletion_witness(const Rule& r1, const Rule& r2, const Rule& r3) {
  const AtomSet uncovered = detail::uncovered_by(r1, r2, r3);
  AtomSet cands = detail::witness_candidates(r1, r2);
  // at most one uncovered atom can be excused, and it must be the witness
  if (uncovered != 0) {
    if (bits::size(uncovered) > 1) return std::nullopt;
    cands &= uncovered;
  }
  std::optional<Atom> found;
  bits::for_each(cands, [&](Atom p) {
    if (!found && detail::is_deletion_witness(r1, r2, r3, p)) found = p;
  });
  return found;
}

// {r1, r2, r3} is strongly equivalent to {r1, r2}. All three rules must be canonical.
inline bool cond_2_1_0(const Rule& r1, const Rule& r2, const Rule& r3) {
  detail::require_canonical(r1, "cond_2_1_0");
  detail::require_canonical(r2, "cond_2_1_0");
  detail::require_canonical(r3, "cond_2_1_0");
  return cond_1_1_0(r1, r3) || cond_1_1_0(r2, r3) || deletion_witness(r1, r2, r3).has_value();
}

// {r1, r2} is strongly equivalent to {r3}.
inline bool cond_0_2_1(const Rule& r1, const Rule& r2, const Rule& r3) {
  return cond_2_1_0(r1, r2, r3) && cond_1_1_0(r3, r1) && cond_1_1_0(r3, r2);
}

// {r1, r2} is strongly equivalent to {r3, r4}.
inline bool cond_0_2_2(const Rule& r1, const Rule& r2, const Rule& r3, const Rule& r4) {
  return cond_2_1_0(r1, r2, r3) && cond_2_1_0(r1, r2, r4) && cond_2_1_0(r3, r4, r1) &&
         cond_2_1_0(r3, r4, r2);
}

// Language size at which exhaustive checking of a condition with w leading existential
// variables over k+m+n rules (m >= n) settles its sufficiency in general.
inline std::size_t sufficient_language_size(std::size_t k, std::size_t m, std::size_t n,
                                            std::size_t w) {
  if (m < n) throw PreconditionError("sufficient_language_size: requires m >= n");
  if (n > 0) return w + 2 * (k + m);
  const std::size_t bound = w + 2 * k;
  return bound > 0 ? bound : 1;
}

}  // namespace strongeq

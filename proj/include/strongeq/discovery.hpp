#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <exception>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "strongeq/se_oracle.hpp"
#include "strongeq/syntax.hpp"

namespace strongeq {

inline constexpr std::size_t kEnumerateMaxAtoms = 7;
inline constexpr std::size_t kMaxTupleArity = 8;
inline constexpr std::size_t kMismatchCap = 1000;

// k shared rules, m rules only on the left, n rules only on the right.
struct TupleShape {
  std::size_t k = 0;
  std::size_t m = 0;
  std::size_t n = 0;

  constexpr std::size_t arity() const { return k + m + n; }
  friend constexpr bool operator==(const TupleShape&, const TupleShape&) = default;
};

struct Mismatch {
  std::vector<Rule> tuple;
  bool oracle = false;
  bool condition = false;
};

struct DiscoveryReport {
  TupleShape shape;
  std::size_t atom_count = 0;
  std::uint64_t total = 0;
  std::uint64_t se_positive = 0;
  std::uint64_t condition_positive = 0;
  std::uint64_t mismatch_count = 0;
  std::vector<Mismatch> mismatches;  // first kMismatchCap in enumeration order
  std::chrono::milliseconds elapsed{0};

  bool agrees() const noexcept { return mismatch_count == 0; }
};

struct EnumerationOptions {
  bool canonical_only = false;
  bool modulo_iso = false;
};

namespace detail {

inline void check_enumeration_atoms(std::size_t atom_count) {
  if (atom_count > kEnumerateMaxAtoms) {
    throw GuardError("enumeration supports at most " + std::to_string(kEnumerateMaxAtoms) +
                     " atoms, got " + std::to_string(atom_count));
  }
}

inline void check_shape(const TupleShape& shape) {
  if (shape.arity() == 0) throw PreconditionError("tuple shape must have at least one rule");
  if (shape.arity() > kMaxTupleArity) {
    throw PreconditionError("tuple shape has more than " + std::to_string(kMaxTupleArity) +
                            " rules");
  }
}

}  // namespace detail

// Every rule over atoms 0..atom_count-1 except the empty one, ascending in the packed
// mask hd·2^(2a) + ps·2^a + ng (which is the (hd, ps, ng) lexicographic order).
inline std::vector<Rule> enumerate_rules(std::size_t atom_count, bool canonical_only) {
  detail::check_enumeration_atoms(atom_count);
  const std::uint64_t full = bits::first_n(atom_count);
  const std::uint64_t codes = std::uint64_t{1} << (3 * atom_count);
  std::vector<Rule> out;
  out.reserve(canonical_only ? (std::size_t{1} << (2 * atom_count)) : codes);
  for (std::uint64_t code = 1; code < codes; ++code) {
    const Rule r{(code >> (2 * atom_count)) & full, (code >> atom_count) & full, code & full};
    if (!canonical_only || is_canonical(r)) out.push_back(r);
  }
  return out;
}

// All permutations of atoms 0..a-1 as byte lookup tables over masks.
class AtomPermutations {
public:
  explicit AtomPermutations(std::size_t atom_count) {
    detail::check_enumeration_atoms(atom_count);
    std::vector<std::uint8_t> image(atom_count);
    std::iota(image.begin(), image.end(), std::uint8_t{0});
    do {
      std::array<std::uint8_t, 128> table{};
      for (std::size_t mask = 0; mask < (std::size_t{1} << atom_count); ++mask) {
        std::uint8_t out = 0;
        for (std::size_t i = 0; i < atom_count; ++i) {
          if ((mask >> i) & 1U) out |= static_cast<std::uint8_t>(1U << image[i]);
        }
        table[mask] = out;
      }
      tables_.push_back(table);
    } while (std::next_permutation(image.begin(), image.end()));
  }

  std::size_t size() const noexcept { return tables_.size(); }

  Rule apply(std::size_t perm, const Rule& r) const {
    const auto& t = tables_[perm];
    return Rule{t[r.hd], t[r.ps], t[r.ng]};
  }

private:
  std::vector<std::array<std::uint8_t, 128>> tables_;
};

namespace detail {

// Depth-first walk over index tuples into `rules`. With modulo_iso, a tuple is visited
// iff it is the lexicographically least member of its orbit under atom permutations:
// at depth d only permutations fixing the prefix can make the tuple smaller, and they
// do so iff they map position d to a smaller rule.
class TupleWalker {
public:
  TupleWalker(std::span<const Rule> rules, std::size_t arity, const AtomPermutations* perms)
      : rules_(rules), arity_(arity), perms_(perms), stab_(arity + 1) {
    if (perms_ != nullptr) {
      // permutation 0 is the identity
      for (std::uint32_t p = 1; p < perms_->size(); ++p) stab_[0].push_back(p);
    }
  }

  template <typename Fn>
  void walk(std::size_t outer_begin, std::size_t outer_end, Fn&& fn) {
    descend(0, outer_begin, outer_end, fn);
  }

private:
  template <typename Fn>
  void descend(std::size_t depth, std::size_t begin, std::size_t end, Fn& fn) {
    if (depth == arity_) {
      fn(std::span<const std::uint32_t>(idx_.data(), arity_));
      return;
    }
    for (std::size_t i = begin; i < end; ++i) {
      if (perms_ != nullptr && !admit(depth, rules_[i])) continue;
      idx_[depth] = static_cast<std::uint32_t>(i);
      descend(depth + 1, 0, rules_.size(), fn);
    }
  }

  bool admit(std::size_t depth, const Rule& r) {
    auto& next = stab_[depth + 1];
    next.clear();
    for (auto p : stab_[depth]) {
      const Rule img = perms_->apply(p, r);
      if (img < r) return false;
      if (img == r) next.push_back(p);
    }
    return true;
  }

  std::span<const Rule> rules_;
  std::size_t arity_;
  const AtomPermutations* perms_;
  std::vector<std::vector<std::uint32_t>> stab_;
  std::array<std::uint32_t, kMaxTupleArity> idx_{};
};

}  // namespace detail

// Visits the ordered tuples of length shape.arity() over enumerate_rules(...).
// With modulo_iso exactly one representative per isomorphism class is visited.
template <typename Fn>
void for_each_tuple(const TupleShape& shape, std::size_t atom_count, EnumerationOptions opts,
                    Fn&& fn) {
  detail::check_shape(shape);
  const auto rules = enumerate_rules(atom_count, opts.canonical_only);
  std::optional<AtomPermutations> perms;
  if (opts.modulo_iso) perms.emplace(atom_count);
  detail::TupleWalker walker(rules, shape.arity(), perms ? &*perms : nullptr);
  std::array<Rule, kMaxTupleArity> tuple{};
  walker.walk(0, rules.size(), [&](std::span<const std::uint32_t> idx) {
    for (std::size_t i = 0; i < idx.size(); ++i) tuple[i] = rules[idx[i]];
    fn(std::span<const Rule>(tuple.data(), idx.size()));
  });
}

inline std::vector<std::vector<Rule>> enumerate_tuples(const TupleShape& shape,
                                                       std::size_t atom_count,
                                                       EnumerationOptions opts) {
  std::vector<std::vector<Rule>> out;
  for_each_tuple(shape, atom_count, opts, [&](std::span<const Rule> t) {
    out.emplace_back(t.begin(), t.end());
  });
  return out;
}

namespace detail {

// Decides {r.., u..} ≃se {r.., v..} for index tuples into a fixed rule list.
class TupleOracle {
public:
  static constexpr std::size_t kMatrixWordBudget = std::size_t{1} << 25;

  TupleOracle(std::span<const Rule> rules, std::size_t atom_count, const TupleShape& shape)
      : rules_(rules), shape_(shape) {
    if (rules.size() * DeltaMatrix::words_for(atom_count) <= kMatrixWordBudget) {
      matrix_.emplace(atom_count, rules);
    }
  }

  bool operator()(std::span<const std::uint32_t> idx) const {
    const std::size_t left = shape_.k + shape_.m;
    std::array<std::uint32_t, kMaxTupleArity> rhs{};
    std::size_t nr = 0;
    for (std::size_t i = 0; i < shape_.k; ++i) rhs[nr++] = idx[i];
    for (std::size_t i = left; i < idx.size(); ++i) rhs[nr++] = idx[i];
    if (matrix_) return matrix_->equivalent(idx.first(left), std::span(rhs.data(), nr));
    std::array<Rule, kMaxTupleArity> l{}, r{};
    for (std::size_t i = 0; i < left; ++i) l[i] = rules_[idx[i]];
    for (std::size_t i = 0; i < nr; ++i) r[i] = rules_[rhs[i]];
    return se_holds(std::span<const Rule>(l.data(), left), std::span<const Rule>(r.data(), nr));
  }

private:
  std::span<const Rule> rules_;
  TupleShape shape_;
  std::optional<DeltaMatrix> matrix_;
};

struct PartialReport {
  std::uint64_t total = 0;
  std::uint64_t se_positive = 0;
  std::uint64_t condition_positive = 0;
  std::uint64_t mismatch_count = 0;
  std::vector<Mismatch> mismatches;
  std::exception_ptr error;
};

}  // namespace detail

// Labels every enumerated tuple [r1..rk, u1..um, v1..vn] with the oracle verdict and
// with `condition`, and reports how often they disagree. Work is split into contiguous
// chunks of the outermost loop; chunks merge in index order, so the report does not
// depend on job_count.
template <typename Condition>
DiscoveryReport test_conjecture(const TupleShape& shape, std::size_t atom_count,
                                Condition&& condition, EnumerationOptions opts,
                                std::size_t job_count = 1) {
  const auto start = std::chrono::steady_clock::now();
  detail::check_shape(shape);
  const auto rules = enumerate_rules(atom_count, opts.canonical_only);
  std::optional<AtomPermutations> perms;
  if (opts.modulo_iso) perms.emplace(atom_count);
  const detail::TupleOracle oracle(rules, atom_count, shape);

  const std::size_t jobs = std::max<std::size_t>(1, job_count);
  const std::size_t chunk_count = std::min<std::size_t>(rules.size(), jobs == 1 ? 1 : jobs * 16);
  std::vector<detail::PartialReport> parts(chunk_count);
  std::atomic<std::size_t> next_chunk{0};

  auto work = [&] {
    detail::TupleWalker walker(rules, shape.arity(), perms ? &*perms : nullptr);
    std::array<Rule, kMaxTupleArity> tuple{};
    for (std::size_t c = next_chunk++; c < chunk_count; c = next_chunk++) {
      auto& part = parts[c];
      try {
        const std::size_t b = rules.size() * c / chunk_count;
        const std::size_t e = rules.size() * (c + 1) / chunk_count;
        walker.walk(b, e, [&](std::span<const std::uint32_t> idx) {
          for (std::size_t i = 0; i < idx.size(); ++i) tuple[i] = rules[idx[i]];
          const std::span<const Rule> t(tuple.data(), idx.size());
          const bool se = oracle(idx);
          const bool cond = condition(t);
          ++part.total;
          part.se_positive += se;
          part.condition_positive += cond;
          if (se != cond) {
            ++part.mismatch_count;
            if (part.mismatches.size() < kMismatchCap) {
              part.mismatches.push_back({std::vector<Rule>(t.begin(), t.end()), se, cond});
            }
          }
        });
      } catch (...) {
        part.error = std::current_exception();
      }
    }
  };

  if (jobs == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t j = 0; j < std::min(jobs, chunk_count); ++j) pool.emplace_back(work);
  }

  DiscoveryReport report;
  report.shape = shape;
  report.atom_count = atom_count;
  for (auto& part : parts) {
    if (part.error) std::rethrow_exception(part.error);
    report.total += part.total;
    report.se_positive += part.se_positive;
    report.condition_positive += part.condition_positive;
    report.mismatch_count += part.mismatch_count;
    for (auto& mm : part.mismatches) {
      if (report.mismatches.size() >= kMismatchCap) break;
      report.mismatches.push_back(std::move(mm));
    }
  }
  report.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - start);
  return report;
}

// Visits the tuples whose two sides are strongly equivalent.
template <typename Fn>
void discover_positive_tuples(const TupleShape& shape, std::size_t atom_count,
                              EnumerationOptions opts, Fn&& fn) {
  detail::check_shape(shape);
  const auto rules = enumerate_rules(atom_count, opts.canonical_only);
  std::optional<AtomPermutations> perms;
  if (opts.modulo_iso) perms.emplace(atom_count);
  const detail::TupleOracle oracle(rules, atom_count, shape);
  detail::TupleWalker walker(rules, shape.arity(), perms ? &*perms : nullptr);
  std::array<Rule, kMaxTupleArity> tuple{};
  walker.walk(0, rules.size(), [&](std::span<const std::uint32_t> idx) {
    if (!oracle(idx)) return;
    for (std::size_t i = 0; i < idx.size(); ++i) tuple[i] = rules[idx[i]];
    fn(std::span<const Rule>(tuple.data(), idx.size()));
  });
}

// Atoms a1..aN, ids 0..N-1, the naming used for enumerated rules.
inline SymbolTable enumeration_symbols(std::size_t atom_count) {
  SymbolTable table;
  for (std::size_t i = 1; i <= atom_count; ++i) table.intern("a" + std::to_string(i));
  return table;
}

}  // namespace strongeq

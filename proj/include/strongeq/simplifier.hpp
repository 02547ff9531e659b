#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "strongeq/se_conditions.hpp"
#include "strongeq/se_oracle.hpp"
#include "strongeq/syntax.hpp"

namespace strongeq {

enum class StepKind {
  DeleteTautology,  // T5-delete: the rule alone is SE to the empty program
  HeadClean,        // T7-head-clean: Hd := Hd \ Ng
  DeleteGivenOne,   // T6-delete
  DeleteGivenTwo,   // T8-delete
  ReplacePair,      // T9-replace
};

inline const char* step_name(StepKind k) {
  switch (k) {
    case StepKind::DeleteTautology: return "T5-delete";
    case StepKind::HeadClean: return "T7-head-clean";
    case StepKind::DeleteGivenOne: return "T6-delete";
    case StepKind::DeleteGivenTwo: return "T8-delete";
    case StepKind::ReplacePair: return "T9-replace";
  }
  return "?";
}

// Indices refer to the working rule list as it was just before the step.
struct SimplifyStep {
  StepKind kind{};
  std::vector<std::size_t> kept;      // context rules justifying the step
  std::vector<std::size_t> consumed;  // rules removed or rewritten, ascending
  std::optional<Rule> produced;       // written at consumed.front() when present

  friend bool operator==(const SimplifyStep&, const SimplifyStep&) = default;
};

using SimplifyTrace = std::vector<SimplifyStep>;

struct SimplifyResult {
  Program program;
  SimplifyTrace trace;
};

struct SimplifyOptions {
  bool verify = false;
  std::size_t max_atoms = kOracleMaxAtoms;
};

// Absent when the rule can be deleted outright; otherwise the canonical rule with the
// same bodies and Hd ∪ Ng.
constexpr std::optional<Rule> normalize_rule(const Rule& r) {
  if (cond_0_1_0(r)) return std::nullopt;
  return Rule{r.hd & ~r.ng, r.ps, r.ng};
}

inline std::size_t literal_count(std::span<const Rule> rules) {
  std::size_t n = 0;
  for (const auto& r : rules) n += r.literal_count();
  return n;
}

inline void apply_step(std::vector<Rule>& rules, const SimplifyStep& step) {
  auto consumed = step.consumed;
  std::size_t first_erase = 0;
  if (step.produced) {
    rules.at(consumed.front()) = *step.produced;
    first_erase = 1;
  }
  std::sort(consumed.begin() + static_cast<std::ptrdiff_t>(first_erase), consumed.end(),
            std::greater<>());
  for (std::size_t i = first_erase; i < consumed.size(); ++i) {
    rules.erase(rules.begin() + static_cast<std::ptrdiff_t>(consumed[i]));
  }
}

// Rebuilds the output of simplify from its input and trace.
inline Program replay(const Program& input, const SimplifyTrace& trace) {
  std::vector<Rule> rules(input.begin(), input.end());
  for (const auto& s : trace) apply_step(rules, s);
  return Program(rules);
}

namespace detail {

class Simplifier {
public:
  explicit Simplifier(const Program& p) : rules_(p.begin(), p.end()) {}

  SimplifyResult run() {
    while (normalize() | delete_given_one() | delete_given_two() | replace_pairs()) {
    }
    return {Program(rules_), std::move(trace_)};
  }

private:
  void record(SimplifyStep step) {
    apply_step(rules_, step);
    trace_.push_back(std::move(step));
  }

  bool normalize() {
    bool changed = false;
    for (std::size_t i = 0; i < rules_.size();) {
      const auto n = normalize_rule(rules_[i]);
      if (!n) {
        record({StepKind::DeleteTautology, {}, {i}, std::nullopt});
        changed = true;
        continue;
      }
      if (*n != rules_[i]) {
        record({StepKind::HeadClean, {}, {i}, *n});
        changed = true;
      }
      ++i;
    }
    // duplicates: each is deletable given its earlier copy
    for (std::size_t j = 1; j < rules_.size();) {
      const auto it = std::find(rules_.begin(), rules_.begin() + static_cast<std::ptrdiff_t>(j),
                                rules_[j]);
      if (it != rules_.begin() + static_cast<std::ptrdiff_t>(j)) {
        record({StepKind::DeleteGivenOne,
                {static_cast<std::size_t>(it - rules_.begin())}, {j}, std::nullopt});
        changed = true;
        continue;
      }
      ++j;
    }
    return changed;
  }

  bool delete_given_one() {
    bool changed = false;
    while (auto hit = find_given_one()) {
      record({StepKind::DeleteGivenOne, {hit->first}, {hit->second}, std::nullopt});
      changed = true;
    }
    return changed;
  }

  std::optional<std::pair<std::size_t, std::size_t>> find_given_one() const {
    for (std::size_t i = 0; i < rules_.size(); ++i) {
      for (std::size_t j = 0; j < rules_.size(); ++j) {
        if (i != j && cond_1_1_0(rules_[i], rules_[j])) return std::pair{i, j};
      }
    }
    return std::nullopt;
  }

  bool delete_given_two() {
    bool changed = false;
    while (auto hit = find_given_two()) {
      const auto [i, j, l] = *hit;
      record({StepKind::DeleteGivenTwo, {i, j}, {l}, std::nullopt});
      changed = true;
    }
    return changed;
  }

  // cond_2_1_0 is symmetric in its first two arguments, so i < j loses no hit.
  std::optional<std::array<std::size_t, 3>> find_given_two() const {
    const std::size_t n = rules_.size();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        for (std::size_t l = 0; l < n; ++l) {
          if (l == i || l == j) continue;
          if (cond_2_1_0(rules_[i], rules_[j], rules_[l])) return std::array{i, j, l};
        }
      }
    }
    return std::nullopt;
  }

  bool replace_pairs() {
    bool changed = false;
    for (bool found = true; found;) {
      found = false;
      for (std::size_t i = 0; i < rules_.size() && !found; ++i) {
        for (std::size_t j = i + 1; j < rules_.size() && !found; ++j) {
          if (auto r3 = find_replacement(rules_[i], rules_[j])) {
            record({StepKind::ReplacePair, {}, {i, j}, *r3});
            found = changed = true;
          }
        }
      }
    }
    return changed;
  }

  // Canonical r3 with fewer literals than the pair and {r1, r2} ≃se {r3}. Since neither
  // rule is deletable on its own, r3 must satisfy Ps3 ⊆ Ps1 ∩ Ps2, Ng3 ⊆ Ng1 ∩ Ng2 and
  // Hd3 ⊆ (Hd1 ∪ Ng1) ∩ (Hd2 ∪ Ng2); candidates are drawn from those sets only.
  static std::optional<Rule> find_replacement(const Rule& r1, const Rule& r2) {
    const AtomSet ps = r1.ps & r2.ps;
    const AtomSet ng = r1.ng & r2.ng;
    const AtomSet hd = (r1.hd | r1.ng) & (r2.hd | r2.ng);
    const std::size_t budget = r1.literal_count() + r2.literal_count();
    std::vector<Rule> cands;
    for (AtomSet p = ps;; p = (p - 1) & ps) {
      for (AtomSet q = ng;; q = (q - 1) & ng) {
        const AtomSet hd_free = hd & ~p & ~q;
        for (AtomSet h = hd_free;; h = (h - 1) & hd_free) {
          const Rule r3{h, p, q};
          if (r3.literal_count() < budget) cands.push_back(r3);
          if (h == 0) break;
        }
        if (q == 0) break;
      }
      if (p == 0) break;
    }
    std::sort(cands.begin(), cands.end(), [](const Rule& a, const Rule& b) {
      if (a.literal_count() != b.literal_count()) return a.literal_count() < b.literal_count();
      return a < b;
    });
    for (const auto& r3 : cands) {
      if (cond_0_2_1(r1, r2, r3)) return r3;
    }
    return std::nullopt;
  }

  std::vector<Rule> rules_;
  SimplifyTrace trace_;
};

}  // namespace detail

inline bool verify_simplification(const Program& p, const Program& q,
                                  std::size_t max_atoms = kOracleMaxAtoms) {
  return strongly_equivalent(p, q, max_atoms).equivalent;
}

// Rewrites to a fixpoint; each pass runs, in order:
//   1. drop deletable rules and clean heads (Hd := Hd \ Ng), then merge duplicates;
//   2. delete a rule made redundant by one other rule;
//   3. delete a rule made redundant by two others;
//   4. replace a pair by a single rule with fewer literals.
// Every step removes a rule or removes literals, so the loop terminates. Each scan
// restarts from the lowest indices after a change.
inline SimplifyResult simplify(const Program& p, const SimplifyOptions& opts = {}) {
  if (opts.verify && bits::size(p.atoms()) > opts.max_atoms) {
    throw GuardError("simplify: verification needs at most " + std::to_string(opts.max_atoms) +
                     " atoms, program has " + std::to_string(bits::size(p.atoms())));
  }
  auto result = detail::Simplifier(p).run();
  if (opts.verify && !verify_simplification(p, result.program, opts.max_atoms)) {
    throw std::logic_error("simplify: output is not strongly equivalent to the input");
  }
  return result;
}

}  // namespace strongeq

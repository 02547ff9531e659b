#include <catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <set>

#include "test_support.hpp"

using namespace strongeq;
using strongeq::test::Lang;

TEST_CASE("parse_rule reads heads, positive and negative bodies", "[syntax]") {
  Lang l;
  const Rule ab = l.rule("a ; b.");
  CHECK(ab == Rule{l.set({"a", "b"}), 0, 0});

  const Rule c = l.rule("c :- not a.");
  CHECK(c == Rule{l.set({"c"}), 0, l.set({"a"})});

  CHECK(l.rule(":- .") == Rule{});
  CHECK(l.rule(".") == Rule{});

  const Rule mixed = l.rule("x;y :- a, not b, c, not d.");
  CHECK(mixed.hd == l.set({"x", "y"}));
  CHECK(mixed.ps == l.set({"a", "c"}));
  CHECK(mixed.ng == l.set({"b", "d"}));
}

TEST_CASE("parse_rule deduplicates and ignores literal order", "[syntax]") {
  Lang l;
  CHECK(l.rule("a ; a :- b, b, not c, not c.") == l.rule("a :- b, not c."));
  CHECK(l.rule("a :- not c, b.") == l.rule("a :- b, not c."));
  CHECK(l.rule("b ; a.") == l.rule("a ; b."));
}

TEST_CASE("parse_rule accepts whitespace, comments and identifier characters", "[syntax]") {
  Lang l;
  const Rule r = l.rule("  reached_1 %comment\n :-\thc, reached_1 .  % trailing\n");
  CHECK(r.hd == l.set({"reached_1"}));
  CHECK(r.ps == l.set({"hc", "reached_1"}));
  CHECK(l.rule("notx :- nota.").hd == l.set({"notx"}));
  CHECK(l.rule("aB9_ :- not not_a.").ng == l.set({"not_a"}));
}

TEST_CASE("parse errors carry location and kind", "[syntax][errors]") {
  Lang l;
  auto kind_of = [&](std::string_view text) {
    try {
      (void)l.rule(text);
    } catch (const ParseError& e) {
      return e.kind();
    }
    FAIL("expected a parse error for: " << text);
    return ParseError::Kind::Syntax;
  };

  CHECK(kind_of("a ; .") == ParseError::Kind::EmptyToken);
  CHECK(kind_of("a :- b, .") == ParseError::Kind::EmptyToken);
  CHECK(kind_of("a :- not .") == ParseError::Kind::EmptyToken);
  CHECK(kind_of("") == ParseError::Kind::EmptyToken);
  CHECK(kind_of("a :- b") == ParseError::Kind::Syntax);
  CHECK(kind_of("X :- b.") == ParseError::Kind::Syntax);
  CHECK(kind_of("not a.") == ParseError::Kind::Syntax);
  CHECK(kind_of("a :- b. c.") == ParseError::Kind::Syntax);
  CHECK(kind_of("a(1).") == ParseError::Kind::Syntax);

  try {
    (void)l.prog("a.\nb :- c\n d.");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 2);
  }
}

TEST_CASE("parse_program keeps first occurrences in order", "[syntax]") {
  Lang l;
  const Program p = l.prog("a;b. c :- not a.");
  REQUIRE(p.size() == 2);
  CHECK(p[0] == l.rule("a;b."));
  CHECK(p[1] == l.rule("c :- not a."));

  CHECK(l.prog("a. a.").size() == 1);
  CHECK(l.prog("").empty());
  CHECK(l.prog("% only a comment\n").empty());
  CHECK(l.prog("b :- a. a. b :- a.").size() == 2);
}

TEST_CASE("format_rule", "[syntax]") {
  Lang l{"a", "b", "c"};
  CHECK(l.str(Rule{l.set({"c"}), l.set({"b"}), l.set({"c"})}) == "c :- b, not c.");
  CHECK(l.str(Rule{0, 0, l.set({"a"})}) == ":- not a.");
  CHECK(l.str(Rule{l.set({"a"}), 0, 0}) == "a.");
  CHECK(l.str(Rule{}) == ":- .");
  CHECK(l.str(Rule{l.set({"a", "b"}), 0, 0}) == "a ; b.");
  CHECK(l.str(Rule{0, l.set({"a", "b"}), 0}) == ":- a, b.");
}

TEST_CASE("property: parse(format(r)) == r over all rules on six atoms (sampled)", "[syntax][property]") {
  Lang l{"a", "b", "c", "d", "e", "f"};
  std::mt19937_64 rng(7);
  for (int i = 0; i < 20000; ++i) {
    const Rule r = strongeq::test::uniform_rule(rng, 6);
    REQUIRE(l.rule(l.str(r)) == r);
  }
  // exhaustive on three atoms, empty rule included
  for (const auto& r : enumerate_rules(3, false)) REQUIRE(l.rule(l.str(r)) == r);
  REQUIRE(l.rule(l.str(Rule{})) == Rule{});
}

TEST_CASE("is_canonical", "[syntax]") {
  Lang l;
  CHECK(is_canonical(l.rule("a :- b, not c.")));
  CHECK_FALSE(is_canonical(l.rule("a :- a.")));
  CHECK_FALSE(is_canonical(l.rule("c :- b, not c.")));
  CHECK_FALSE(is_canonical(l.rule(":- b, not b.")));
  CHECK(is_canonical(Rule{}));
}

TEST_CASE("symbol table is dense and append-only", "[syntax]") {
  SymbolTable t;
  CHECK(t.intern("b").id == 0);
  CHECK(t.intern("a").id == 1);
  CHECK(t.intern("b").id == 0);
  CHECK(t.size() == 2);
  CHECK(t.name(Atom{1}) == "a");
  CHECK_FALSE(t.find("zz").has_value());
  for (int i = 2; i < 64; ++i) t.intern("x" + std::to_string(i));
  CHECK_THROWS_AS(t.intern("overflow"), GuardError);
}

TEST_CASE("rename", "[syntax]") {
  Lang l{"a", "b", "c", "x", "y"};
  const auto A = l.table.find("a").value(), B = l.table.find("b").value(),
             C = l.table.find("c").value(), X = l.table.find("x").value(),
             Y = l.table.find("y").value();

  AtomMap f(5);
  f[A.id] = X;
  f[B.id] = Y;
  CHECK(rename(l.prog("a :- b."), f) == l.prog("x :- y."));

  AtomMap g(5);
  g[A.id] = C;
  g[B.id] = C;
  CHECK(rename(l.prog("a ; b."), g) == l.prog("c."));
  // merged duplicates
  CHECK(rename(l.prog("a. b."), g).size() == 1);

  AtomMap partial(5);
  partial[A.id] = X;
  CHECK_THROWS_AS(rename(l.prog("a :- b."), partial), PreconditionError);
}

TEST_CASE("rename: three-atom collapse keeps head/body disjointness", "[syntax]") {
  // Maps head atoms to one atom, positive-body atoms to a second, the rest to a third.
  std::mt19937_64 rng(11);
  int tried = 0;
  for (int i = 0; i < 5000; ++i) {
    Rule r = strongeq::test::random_rule(rng, 6, 0.3);
    if ((r.hd & r.ps) != 0 || (r.ps & r.ng) != 0) continue;
    ++tried;
    AtomMap f(6);
    for (std::uint32_t a = 0; a < 6; ++a) {
      const Atom atom{a};
      f[a] = bits::contains(r.hd, atom) ? Atom{0} : bits::contains(r.ps, atom) ? Atom{1} : Atom{2};
    }
    const Rule fr = rename(r, f);
    REQUIRE(bits::size(fr.atoms()) <= 3);
    REQUIRE((fr.hd & fr.ps) == 0);
    REQUIRE((fr.ps & fr.ng) == 0);
  }
  CHECK(tried > 500);
}

TEST_CASE("property: injective rename preserves canonicality", "[syntax][property]") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 5000; ++i) {
    const Rule r = strongeq::test::random_rule(rng, 6);
    const auto f = strongeq::test::random_bijection(rng, 6);
    REQUIRE(is_canonical(rename(r, f)) == is_canonical(r));
  }
}

TEST_CASE("iso_canonical_form identifies renamings only", "[syntax][iso]") {
  Lang l{"a", "b"};
  const std::vector<Rule> ab{l.rule("a :- b.")}, ba{l.rule("b :- a.")}, aa{l.rule("a :- a.")};
  CHECK(iso_canonical_form(ab) == iso_canonical_form(ba));
  CHECK(iso_canonical_form(ab) != iso_canonical_form(aa));

  // Position matters: (a←b, b←a) vs (b←a, a←b) are related by the swap.
  const std::vector<Rule> t1{l.rule("a :- b."), l.rule("b.")};
  const std::vector<Rule> t2{l.rule("b :- a."), l.rule("a.")};
  const std::vector<Rule> t3{l.rule("b :- a."), l.rule("b.")};
  CHECK(iso_canonical_form(t1) == iso_canonical_form(t2));
  CHECK(iso_canonical_form(t1) != iso_canonical_form(t3));

  Lang big;
  std::vector<Rule> nine{big.rule("a1 ; a2 ; a3 :- a4, a5, not a6, not a7, not a8, not a9.")};
  CHECK_THROWS_AS(iso_canonical_form(nine), GuardError);
}

TEST_CASE("iso classes of canonical one-rule tuples at three atoms", "[syntax][iso]") {
  // Orbit oracle: apply each of the six permutations directly and collect orbits.
  const auto rules = enumerate_rules(3, true);
  REQUIRE(rules.size() == 63);
  std::vector<std::array<int, 3>> perms;
  std::array<int, 3> p{0, 1, 2};
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  auto permute = [](AtomSet s, const std::array<int, 3>& q) {
    AtomSet out = 0;
    for (int i = 0; i < 3; ++i) {
      if ((s >> i) & 1U) out |= AtomSet{1} << q[i];
    }
    return out;
  };
  std::set<std::set<Rule>> orbits;
  for (const auto& r : rules) {
    std::set<Rule> orbit;
    for (const auto& q : perms) orbit.insert(Rule{permute(r.hd, q), permute(r.ps, q), permute(r.ng, q)});
    orbits.insert(orbit);
  }
  std::set<std::vector<Rule>> forms;
  for (const auto& r : rules) forms.insert(iso_canonical_form(std::vector<Rule>{r}));

  // multisets of size 3 over {hd, ps, ng, absent}, minus all-absent: C(6,3) - 1
  CHECK(orbits.size() == 19);
  CHECK(forms.size() == orbits.size());
}

TEST_CASE("property: iso_canonical_form is idempotent and renaming-invariant", "[syntax][iso][property]") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 2000; ++i) {
    std::vector<Rule> t;
    const int len = 1 + static_cast<int>(rng() % 3);
    for (int j = 0; j < len; ++j) t.push_back(strongeq::test::random_rule(rng, 5));
    const auto form = iso_canonical_form(t);
    REQUIRE(iso_canonical_form(form) == form);
    const auto f = strongeq::test::random_bijection(rng, 5);
    std::vector<Rule> ft;
    for (const auto& r : t) ft.push_back(rename(r, f));
    REQUIRE(iso_canonical_form(ft) == form);
  }
}

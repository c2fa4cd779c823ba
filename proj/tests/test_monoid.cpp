#include <utility>
#include <vector>

#include "doctest.h"
#include "gammalab/monoid.hpp"
#include "oracle.hpp"

using namespace gammalab;

namespace {

// Engine closure and both oracle routes must produce one partition.
void check_closure_against_oracles(const FiniteCommMonoid& m,
                                   const std::vector<std::pair<Elem, Elem>>& pairs) {
  const auto engine = oracle::partition_of(congruence_closure(m, pairs));
  CHECK(engine == oracle::naive_congruence(m, pairs));
  if (m.size <= 5) {
    CHECK(engine == oracle::finest_congruence_by_enumeration(m, pairs));
  }
  CHECK(oracle::is_congruence(m, engine));
}

}  // namespace

TEST_CASE("boolean OR monoid validates and is idempotent") {
  const auto m = boolean_or_monoid();
  const auto report = validate_comm_monoid(m);
  CHECK(report.ok);
  CHECK(m.complete());
  CHECK(m.idempotent());
}

TEST_CASE("cyclic monoids validate and are not idempotent beyond the trivial one") {
  for (int k : {1, 2, 3, 4, 5}) {
    const auto m = cyclic_monoid(k);
    CHECK(validate_comm_monoid(m).ok);
    CHECK(m.complete());
    CHECK(m.idempotent() == (k == 1));
  }
}

TEST_CASE("commutativity violations are caught with a concrete witness") {
  // max on {0,1,2} with the (1,2) cell broken one-sidedly.
  auto m = FiniteCommMonoid::from_rows({{0, 1, 2}, {1, 1, 1}, {2, 2, 2}}, 0);
  const auto report = validate_comm_monoid(m);
  CHECK_FALSE(report.ok);
  const Witness* w = report.witness_for("commutativity");
  REQUIRE(w != nullptr);
  CHECK(m.add(w->at[0], w->at[1]) != m.add(w->at[1], w->at[0]));
}

TEST_CASE("associativity violations are caught and the witness replays") {
  auto m = FiniteCommMonoid::from_rows({{0, 1, 2}, {1, 2, 0}, {2, 0, 2}}, 0);
  const auto report = validate_comm_monoid(m);
  CHECK_FALSE(report.ok);
  const Witness* w = report.witness_for("associativity");
  REQUIRE(w != nullptr);
  const Elem a = w->at[0], b = w->at[1], c = w->at[2];
  CHECK(m.add(m.add(a, b), c) != m.add(a, m.add(b, c)));
}

TEST_CASE("zero identity violations are caught") {
  auto m = FiniteCommMonoid::from_rows({{0, 1}, {1, 0}}, 1);  // zero claimed at 1
  const auto report = validate_comm_monoid(m);
  CHECK_FALSE(report.ok);
  CHECK(report.law_failed("zero-identity"));
}

TEST_CASE("congruence closure collapses Z4 by the relation 2 ~ 0") {
  const auto z4 = cyclic_monoid(4);
  const auto rel = congruence_closure(z4, {{2, 0}});
  CHECK(rel.classes == 2);
  CHECK(rel.class_of[0] == rel.class_of[2]);
  CHECK(rel.class_of[1] == rel.class_of[3]);
  CHECK(rel.class_of[0] != rel.class_of[1]);

  const auto q = quotient_monoid(z4, rel);
  CHECK(q.size == 2);
  CHECK(q.complete());
  CHECK(q.table == cyclic_monoid(2).table);
}

TEST_CASE("congruence closure agrees with both oracle routes") {
  check_closure_against_oracles(boolean_or_monoid(), {});
  check_closure_against_oracles(boolean_or_monoid(), {{1, 0}});
  check_closure_against_oracles(cyclic_monoid(4), {});
  check_closure_against_oracles(cyclic_monoid(4), {{2, 0}});
  check_closure_against_oracles(cyclic_monoid(4), {{1, 0}});
  check_closure_against_oracles(cyclic_monoid(4), {{3, 3}});
  check_closure_against_oracles(cyclic_monoid(5), {{1, 0}});
  check_closure_against_oracles(product_monoid(cyclic_monoid(2), cyclic_monoid(2)), {{1, 0}});
}

TEST_CASE("closure merges through equal-class cells even when direct sums are undefined") {
  // 0,a,b,c with a+a = c, b+b = 0, and a+b undefined: relating a ~ b must
  // force c ~ 0 through the cell rule alone.
  auto m = FiniteCommMonoid::from_rows(
      {{0, 1, 2, 3}, {1, 3, -1, -1}, {2, -1, 0, -1}, {3, -1, -1, -1}}, 0);
  CHECK(validate_comm_monoid(m).ok);  // weak laws hold on the partial table

  const auto rel = congruence_closure(m, {{1, 2}});
  CHECK(rel.classes == 2);
  CHECK(rel.class_of[0] == rel.class_of[3]);
  CHECK(rel.class_of[1] == rel.class_of[2]);
  check_closure_against_oracles(m, {{1, 2}});
}

TEST_CASE("bounded term universe over one generator") {
  SUBCASE("non-idempotent: 0, g, 2g with the bound cutting 3g off") {
    const auto u = bounded_term_universe(1, 2, false);
    CHECK(u.monoid.size == 3);
    CHECK(u.truncated);
    const Elem g = u.generator(0);
    CHECK(u.monoid.defined(g, g));
    const Elem gg = u.monoid.add(g, g);
    CHECK_FALSE(u.monoid.defined(gg, g));
    CHECK(validate_comm_monoid(u.monoid).ok);
  }
  SUBCASE("idempotent: only 0 and g, addition total") {
    const auto u = bounded_term_universe(1, 2, true);
    CHECK(u.monoid.size == 2);
    CHECK_FALSE(u.truncated);
    CHECK(u.monoid.complete());
    const Elem g = u.generator(0);
    CHECK(u.monoid.add(g, g) == g);
  }
}

TEST_CASE("bounded term universe size guard refuses oversized requests") {
  CHECK_THROWS_AS(bounded_term_universe(10, 10, false, 100), LimitError);
}

TEST_CASE("presented quotient of the one-generator universe by 2g ~ 0 is Z2") {
  const auto u = bounded_term_universe(1, 4, false);
  const Elem g = u.generator(0);
  const Elem gg = u.monoid.add(g, g);
  const auto pq = presented_quotient(u.monoid, {{gg, 0}}, /*universe_truncated=*/false);
  CHECK(pq.status == BuildStatus::Complete);
  CHECK(pq.quotient.size == 2);
  CHECK(pq.quotient.complete());
  CHECK(pq.quotient.table == cyclic_monoid(2).table);
}

TEST_CASE("presented quotient reports bound-exceeded when addition stays partial") {
  const auto u = bounded_term_universe(1, 2, false);
  const auto pq = presented_quotient(u.monoid, {}, /*universe_truncated=*/false);
  CHECK(pq.status == BuildStatus::BoundExceeded);
  CHECK(pq.stats.undefined_cells > 0);
}

TEST_CASE("product monoid multiplies carriers and validates") {
  const auto p = product_monoid(boolean_or_monoid(), cyclic_monoid(3));
  CHECK(p.size == 6);
  CHECK(validate_comm_monoid(p).ok);
  CHECK(p.complete());
}

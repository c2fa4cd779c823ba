#include <algorithm>
#include <set>
#include <vector>

#include "catalog.hpp"
#include "doctest.h"
#include "gammalab/module.hpp"
#include "oracle.hpp"

using namespace gammalab;

namespace {

ScanOptions fast_opts() {
  ScanOptions o;
  o.threads = 4;
  return o;
}

ModulePtr mutate(const ModulePtr& M, Word targs, Elem m, Word params, Elem val) {
  auto C = std::make_shared<PositionalModule>(*M);
  C->actions[0].table[std::size_t(C->act_index(targs, m, params))] = val;
  return C;
}

void check_axioms_against_oracle(const PositionalModule& M) {
  const auto report = validate_module(M, fast_opts());
  const auto naive = oracle::naive_module_axioms(M);
  CHECK(report.law_failed("M1") == !naive.m1);
  CHECK(report.law_failed("M2") == !naive.m2);
  CHECK(report.law_failed("M3") == !naive.m3);
  CHECK(report.law_failed("M4") == !naive.m4);
}

bool any_note_contains(const ValidationReport& r, const std::string& needle) {
  return std::any_of(r.notes.begin(), r.notes.end(), [&](const std::string& s) {
    return s.find(needle) != std::string::npos;
  });
}

}  // namespace

TEST_CASE("regular modules validate at every slot of the boolean parent") {
  const auto S = cat::b3();
  for (int slot = 1; slot <= 3; ++slot) {
    const auto M = regular_module(S, slot);
    const auto report = validate_module(*M, fast_opts());
    CHECK(report.ok);
    check_axioms_against_oracle(*M);
  }
}

TEST_CASE("zero and null-action modules validate") {
  const auto S = cat::b3();
  for (const auto& M : {zero_module(S, {2}), null_action_module(S, boolean_or_monoid(), {2}),
                        null_action_module(S, cyclic_monoid(3), {2})}) {
    const auto report = validate_module(*M);
    CHECK(report.ok);
    check_axioms_against_oracle(*M);
  }
}

TEST_CASE("regular modules validate across the built parents") {
  std::vector<GammaSemiring> parents;
  parents.push_back(b3_semiring());
  parents.push_back(b3_trivial_gamma_semiring());
  parents.push_back(build_matrix_realization(base_z2(), 1, 3));
  parents.push_back(build_matrix_realization(base_trunc_tropical(2), 1, 2));
  for (auto& P : parents) {
    auto S = std::make_shared<GammaSemiring>(std::move(P));
    for (int slot = 1; slot <= S->arity; ++slot) {
      const auto report = validate_module(*regular_module(S, slot), fast_opts());
      CHECK_MESSAGE(report.ok, S->provenance, " slot ", slot, ": ", report.summary());
    }
  }
}

TEST_CASE("interior-slot coherence rests on the deep word family") {
  const auto S = cat::b3();
  const auto M = regular_module(S, 2);

  // At slot 2 no five-letter word admits two evaluation orders, so the
  // seven-letter family carries the whole law.
  const auto report = validate_module(*M, fast_opts());
  CHECK(report.ok);
  CHECK(any_note_contains(report, "length-5 family: 0 constrained positions"));
  CHECK_FALSE(any_note_contains(report, "skipped"));

  // A corrupted cell invisible to the additivity and absorption laws...
  const auto bad = mutate(M, {1, 1}, 1, {0, 1}, 1);
  const auto naive = oracle::naive_module_axioms(*bad);
  CHECK(naive.m1);
  CHECK(naive.m3);
  CHECK(naive.m4);
  CHECK_FALSE(naive.m2);

  // ...is caught by the deep family...
  const auto bad_report = validate_module(*bad, fast_opts());
  CHECK(bad_report.law_failed("M2"));
  const auto* w = bad_report.witness_for("M2");
  REQUIRE(w != nullptr);
  CHECK(w->at[0] == 7);  // length of the offending word

  // ...and slips through when the budget forces the deep family out.
  ScanOptions starved = fast_opts();
  starved.coherence_budget = 0;
  const auto starved_report = validate_module(*bad, starved);
  CHECK(starved_report.ok);
  CHECK(any_note_contains(starved_report, "skipped"));
}

TEST_CASE("single-cell corruptions are caught, witnessed, and replayed") {
  const auto S = cat::b3();
  const auto M = regular_module(S, 2);

  SUBCASE("module additivity") {
    const auto bad = mutate(M, {1, 1}, 0, {1, 0}, 1);
    const auto report = validate_module(*bad, fast_opts());
    CHECK(report.law_failed("M1"));
    const auto* w = report.witness_for("M1/module");
    if (w) {
      // layout: targs, x, y, params
      const Word targs{w->at[0], w->at[1]};
      const Elem x = w->at[2], y = w->at[3];
      const Word params{w->at[4], w->at[5]};
      const Elem sum = bad->carrier.add(x, y);
      CHECK(bad->act(0, targs, sum, params) !=
            bad->carrier.add(bad->act(0, targs, x, params), bad->act(0, targs, y, params)));
    }
    check_axioms_against_oracle(*bad);
  }

  SUBCASE("deep coherence") {
    const auto bad = mutate(M, {1, 1}, 1, {0, 1}, 1);
    const auto report = validate_module(*bad, fast_opts());
    CHECK(report.law_failed("M2"));
    const auto* w = report.witness_for("M2");
    REQUIRE(w != nullptr);
    // layout: L, t, ring letters, m, params — replay through the recursive
    // all-paths evaluator.
    const int L = w->at[0], t = w->at[1];
    std::vector<Elem> letters(std::size_t(L), 0);
    int k = 2;
    for (int i = 0; i < L; ++i) {
      if (i != t) letters[std::size_t(i)] = w->at[std::size_t(k++)];
    }
    const Elem m = w->at[std::size_t(k++)];
    std::vector<Elem> params(w->at.begin() + k, w->at.end());
    REQUIRE(int(params.size()) == L - 1);
    const auto vals = oracle::module_word_values(*bad, 0, letters, t, m, params);
    CHECK(std::set<Elem>(vals.begin(), vals.end()).size() >= 2);
    check_axioms_against_oracle(*bad);
  }

  SUBCASE("zero absorption") {
    const auto bad = mutate(M, {0, 1}, 1, {1, 1}, 1);
    const auto report = validate_module(*bad, fast_opts());
    CHECK(report.law_failed("M3"));
    const auto* w = report.witness_for("M3/ring");
    if (w) {
      // layout: r, targs, m, params
      const Word targs{w->at[1], w->at[2]};
      const Elem m = w->at[3];
      const Word params{w->at[4], w->at[5]};
      CHECK(targs[std::size_t(w->at[0])] == S->T.zero);
      CHECK(bad->act(0, targs, m, params) != bad->carrier.zero);
    }
    check_axioms_against_oracle(*bad);
  }

  SUBCASE("parameter additivity") {
    const auto bad = mutate(M, {1, 1}, 1, {0, 0}, 1);
    const auto report = validate_module(*bad, fast_opts());
    CHECK(report.law_failed("M4"));
    const auto* w = report.witness_for("M4");
    if (w) {
      // layout: c, targs, m, alpha, beta, params
      const int c = w->at[0];
      const Word targs{w->at[1], w->at[2]};
      const Elem m = w->at[3], alpha = w->at[4], beta = w->at[5];
      Word params{w->at[6], w->at[7]};
      REQUIRE(params[std::size_t(c)] == S->Gamma.add(alpha, beta));
      const Elem lhs = bad->act(0, targs, m, params);
      params[std::size_t(c)] = alpha;
      const Elem aa = bad->act(0, targs, m, params);
      params[std::size_t(c)] = beta;
      const Elem ab = bad->act(0, targs, m, params);
      CHECK(lhs != bad->carrier.add(aa, ab));
    }
    check_axioms_against_oracle(*bad);
  }
}

TEST_CASE("the regular bimodule of the boolean parent is compatible") {
  const auto S = cat::b3();
  const auto B = regular_bimodule(S);
  REQUIRE(B->actions.size() == 2);
  CHECK(B->actions[0].slot == 2);
  CHECK(B->actions[1].slot == 3);
  const auto report = validate_bimodule(*B, fast_opts());
  CHECK(report.ok);
}

TEST_CASE("interior/outer regular actions over 2x2 boolean matrices are incompatible") {
  auto S = std::make_shared<GammaSemiring>(build_matrix_realization(base_boolean(), 2, 3));
  const auto B = regular_bimodule(S, 2, 3);
  const auto report = validate_bimodule(*B, fast_opts());
  CHECK(report.law_failed("compat"));
  CHECK_FALSE(report.law_failed("left/M1"));
  CHECK_FALSE(report.law_failed("right/M1"));
  const auto* w = report.witness_for("compat");
  REQUIRE(w != nullptr);
  // layout: a_targs, a_params, b_targs, b_params, m
  const Word at{w->at[0], w->at[1]}, ap{w->at[2], w->at[3]};
  const Word bt{w->at[4], w->at[5]}, bp{w->at[6], w->at[7]};
  const Elem m = w->at[8];
  const Elem lhs = B->act(0, at, B->act(1, bt, m, bp), ap);
  const Elem rhs = B->act(1, bt, B->act(0, at, m, ap), bp);
  CHECK(lhs != rhs);
}

TEST_CASE("morphism validation accepts the structure maps and rejects an impostor") {
  for (const auto& c : {cat::over_b3(), cat::over_z2()}) {
    for (std::size_t i = 0; i < c.morphisms.size(); ++i) {
      const auto report = validate_morphism(c.morphisms[i]);
      CHECK_MESSAGE(report.ok, c.morphism_names[i], ": ", report.summary());
    }
  }
  // swapping the boolean regular module is not even zero-preserving
  const auto c = cat::over_b3();
  const auto swap = table_morphism(c.reg, c.reg, {1, 0});
  const auto report = validate_morphism(swap);
  CHECK(report.law_failed("zero"));
}

TEST_CASE("the regular module has exactly two endomorphisms") {
  for (const auto& c : {cat::over_b3(), cat::over_z2()}) {
    const auto homs = enumerate_morphisms(c.reg, c.reg);
    REQUIRE(homs.size() == 2);
    CHECK(is_zero_morphism(homs[0]));
    CHECK(homs[1].map == identity_morphism(c.reg).map);
  }
  CHECK_THROWS_AS((void)enumerate_morphisms(cat::over_b3().reg, cat::over_b3().reg, 1),
                  LimitError);
}

TEST_CASE("kernels carve out the preimage of zero") {
  const auto c = cat::over_z2();

  const auto k_id = kernel(identity_morphism(c.reg));
  CHECK(k_id.module->msize() == 1);

  const auto k_zero = kernel(zero_morphism(c.reg, c.reg));
  CHECK(k_zero.module->msize() == c.reg->msize());

  // first-coordinate projection: kernel is the second parity line
  const auto k_p1 = kernel(c.morphisms[5]);
  REQUIRE(k_p1.module->msize() == 2);
  CHECK(k_p1.module->carrier.add(1, 1) == k_p1.module->carrier.zero);
  CHECK(k_p1.inclusion.map == std::vector<Elem>{0, 1});
  CHECK(validate_morphism(k_p1.inclusion).ok);
  CHECK(validate_module(*k_p1.module).ok);

  // folding: kernel is the diagonal
  const auto k_fold = kernel(c.morphisms[4]);
  REQUIRE(k_fold.module->msize() == 2);
  CHECK(k_fold.inclusion.map == std::vector<Elem>{0, 3});
  CHECK(k_fold.module->carrier.add(1, 1) == k_fold.module->carrier.zero);

  // over the boolean parent the fold kernel collapses to a point
  const auto b = cat::over_b3();
  CHECK(kernel(b.morphisms[4]).module->msize() == 1);

  // a map whose zero-preimage is not closed under addition is rejected
  const auto junk = table_morphism(c.reg2, c.reg, {0, 0, 1, 0});
  CHECK_THROWS_AS((void)kernel(junk), std::logic_error);
}

TEST_CASE("cokernels quotient by the smallest additive congruence of the image") {
  const auto c = cat::over_z2();

  CHECK(cokernel(identity_morphism(c.reg)).module->msize() == 1);
  CHECK(cokernel(zero_morphism(c.reg, c.reg)).module->msize() == c.reg->msize());

  // diagonal: two classes, the diagonal and the antidiagonal
  const auto co = cokernel(c.morphisms[3]);
  REQUIRE(co.module->msize() == 2);
  CHECK(co.congruence.class_of[0] == co.congruence.class_of[3]);
  CHECK(co.congruence.class_of[1] == co.congruence.class_of[2]);
  CHECK(co.congruence.class_of[0] != co.congruence.class_of[1]);
  CHECK(co.action_check.ok);
  CHECK(validate_morphism(co.projection).ok);
  CHECK(validate_module(*co.module).ok);

  // first-axis inclusion over the boolean parent: quotient sees the second axis
  const auto b = cat::over_b3();
  const auto co_i1 = cokernel(b.morphisms[6]);
  CHECK(co_i1.module->msize() == 2);
  CHECK(co_i1.congruence.class_of[0] == co_i1.congruence.class_of[2]);
  CHECK(co_i1.congruence.class_of[1] == co_i1.congruence.class_of[3]);
}

TEST_CASE("cokernel congruences match both brute-force constructions") {
  for (const auto& c : {cat::over_b3(), cat::over_z2()}) {
    for (std::size_t i = 0; i < c.morphisms.size(); ++i) {
      const auto& f = c.morphisms[i];
      const auto co = cokernel(f);
      std::vector<std::pair<Elem, Elem>> pairs;
      for (Elem v : f.map) pairs.emplace_back(v, f.target->carrier.zero);
      const auto dense = oracle::naive_congruence(f.target->carrier, pairs);
      const auto finest = oracle::finest_congruence_by_enumeration(f.target->carrier, pairs);
      const auto got = oracle::partition_of(co.congruence);
      CHECK_MESSAGE(got == dense, c.morphism_names[i]);
      CHECK_MESSAGE(got == finest, c.morphism_names[i]);
      CHECK(co.action_check.ok);
    }
  }
}

TEST_CASE("biproducts satisfy the splitting identities") {
  for (const auto& c : {cat::over_b3(), cat::over_z2()}) {
    const auto rr = biproduct(c.reg, c.reg);
    CHECK(rr.module->msize() == c.reg->msize() * c.reg->msize());
    CHECK(check_biproduct(rr, fast_opts()).ok);
    const auto rz = biproduct(c.reg, c.zero);
    CHECK(rz.module->msize() == c.reg->msize());
    CHECK(check_biproduct(rz, fast_opts()).ok);
    const auto rn = biproduct(c.reg, c.null_bool);
    CHECK(check_biproduct(rn, fast_opts()).ok);
    CHECK(validate_module(*rn.module, fast_opts()).ok);
  }
}

TEST_CASE("kernels and cokernels factor test maps uniquely") {
  for (const auto& c : {cat::over_b3(), cat::over_z2()}) {
    const auto probes = c.probes();
    for (std::size_t i = 0; i < c.morphisms.size(); ++i) {
      const auto& f = c.morphisms[i];
      const auto kr = check_kernel_universal(f, kernel(f), probes);
      CHECK_MESSAGE(kr.ok, c.morphism_names[i], ": ", kr.summary());
      const auto cr = check_cokernel_universal(f, cokernel(f), probes);
      CHECK_MESSAGE(cr.ok, c.morphism_names[i], ": ", cr.summary());
    }
  }
}

TEST_CASE("a corrupted target surfaces the representative obstruction") {
  const auto c = cat::over_b3();
  auto bad = std::make_shared<PositionalModule>(*c.reg2);
  // force (1,1) . 1 to leave the class of its fellow representative
  bad->actions[0].table[std::size_t(bad->act_index({1, 1}, 1, {1, 1}))] = 2;
  const auto f = table_morphism(c.reg, bad, {0, 1});
  const auto co = cokernel(f);
  CHECK_FALSE(co.action_check.ok);
  CHECK(co.action_check.law_failed("action-classes"));
}

TEST_CASE("partial actions validate weakly and say so") {
  const auto S = cat::b3();
  auto M = std::make_shared<PositionalModule>(*regular_module(S, 2));
  M->actions[0].table[std::size_t(M->act_index({1, 1}, 1, {1, 1}))] = -1;
  const auto report = validate_module(*M, fast_opts());
  CHECK(report.ok);
  CHECK(any_note_contains(report, "partial structure"));
}

TEST_CASE("malformed module data is rejected up front") {
  const auto S = cat::b3();
  CHECK_THROWS_AS((void)regular_module(S, 4), std::invalid_argument);
  CHECK_THROWS_AS((void)regular_bimodule(S, 3, 2), std::invalid_argument);
  CHECK_THROWS_AS((void)table_module(S, boolean_or_monoid(), {ActionSlot{2, {0, 1}}}, "junk"),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)table_morphism(cat::over_b3().reg, cat::over_b3().reg, {0, 0, 0}),
                  std::invalid_argument);
}

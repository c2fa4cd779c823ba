#include <algorithm>

#include "catalog.hpp"
#include "doctest.h"
#include "gammalab/tensor_hom.hpp"
#include "oracle.hpp"

using namespace gammalab;

namespace {

bool same_table(const FiniteCommMonoid& a, const FiniteCommMonoid& b) {
  return a.size == b.size && a.zero == b.zero && a.table == b.table;
}

ModulePtr reg3(const cat::ParentCatalog& c) { return regular_module(c.parent, 3); }
ModulePtr zero3(const cat::ParentCatalog& c) { return zero_module(c.parent, {3}); }
ModulePtr null3(const cat::ParentCatalog& c) {
  return null_action_module(c.parent, boolean_or_monoid(), {3});
}

// Engine partition vs the independently regenerated one, over the same term
// universe; also ties the generator map back to the congruence.
void check_against_oracle(const TensorResult& T) {
  oracle::Partition engine = oracle::partition_of(T.congruence);
  oracle::Partition naive =
      oracle::naive_tensor_partition(T.factors, T.universe.monoid, T.universe.degrees);
  CHECK(engine == naive);
  std::uint64_t grid = 1;
  for (int s : T.sizes) grid *= std::uint64_t(s);
  for (std::uint64_t g = 0; g < grid; ++g) {
    REQUIRE(T.factor[std::size_t(g)] ==
            T.congruence.class_of[std::size_t(T.universe.generator(int(g)))]);
  }
}

// Induced map between two-factor tensors from a morphism on the first
// coordinate, read off the generator classes.
ModuleMorphism induced_on_first(const TensorResult& src, const TensorResult& dst,
                                const ModuleMorphism& f) {
  std::vector<Elem> map(std::size_t(src.module->msize()), -1);
  for (Elem a = 0; a < src.sizes[0]; ++a) {
    for (Elem nn = 0; nn < src.sizes[1]; ++nn) {
      const Elem q = src.cls({a, nn});
      const Elem v = dst.cls({f.map[std::size_t(a)], nn});
      if (map[std::size_t(q)] < 0) {
        map[std::size_t(q)] = v;
      } else {
        REQUIRE(map[std::size_t(q)] == v);
      }
    }
  }
  for (Elem v : map) REQUIRE(v >= 0);
  return table_morphism(plain_module(src.module), plain_module(dst.module), std::move(map));
}

// Precomposition table Hom(M,P) -> Hom(M',P) along f: M' -> M.
std::vector<Elem> hom_precompose(const HomModule& from, const HomModule& to,
                                 const ModuleMorphism& f) {
  std::vector<Elem> out;
  for (const ModuleMorphism& g : from.elements) {
    const ModuleMorphism gf = compose(g, f);
    const auto it = std::find_if(to.elements.begin(), to.elements.end(),
                                 [&](const ModuleMorphism& h) { return h.map == gf.map; });
    REQUIRE(it != to.elements.end());
    out.push_back(Elem(it - to.elements.begin()));
  }
  return out;
}

}  // namespace

TEST_CASE("tensor of regulars collapses to the parent carrier") {
  cat::ParentCatalog b = cat::over_b3();
  TensorResult T = positional_tensor(b.reg, reg3(b));
  REQUIRE(T.status == BuildStatus::Complete);
  CHECK(T.module->msize() == 2);
  CHECK(same_table(T.module->carrier, boolean_or_monoid()));
  CHECK(T.left_slot == 2);
  CHECK(T.right_slot == 3);
  CHECK(T.module->actions.size() == 2);
  CHECK(T.action_check.ok);
  // 4 generator tuples, multiset terms of degree <= 4
  CHECK(T.universe.monoid.size == 70);
  CHECK(T.zero_relations == 3);
  CHECK(T.additivity_relations == 12);
  CHECK(T.balancing_relations == 64);
  const Elem z = T.module->carrier.zero;
  CHECK(T.cls({0, 0}) == z);
  CHECK(T.cls({0, 1}) == z);
  CHECK(T.cls({1, 0}) == z);
  CHECK(T.cls({1, 1}) != z);

  cat::ParentCatalog zc = cat::over_z2();
  TensorResult Tz = positional_tensor(zc.reg, reg3(zc));
  REQUIRE(Tz.status == BuildStatus::Complete);
  CHECK(Tz.module->msize() == 2);
  CHECK(same_table(Tz.module->carrier, zc.parent->T));
  CHECK(Tz.cls({1, 1}) != Tz.module->carrier.zero);
  CHECK(Tz.action_check.ok);
}

TEST_CASE("tensor congruences match the regenerated partition oracle") {
  cat::ParentCatalog b = cat::over_b3();
  cat::ParentCatalog z = cat::over_z2();
  check_against_oracle(positional_tensor(b.reg, reg3(b)));
  check_against_oracle(positional_tensor(b.reg2, reg3(b)));
  check_against_oracle(positional_tensor(b.null_bool, reg3(b)));
  check_against_oracle(positional_tensor(z.reg, reg3(z)));
  check_against_oracle(positional_tensor(z.reg2, reg3(z)));
  check_against_oracle(
      multi_tensor({regular_module(b.parent, 1), regular_module(b.parent, 2)}, reg3(b)));
}

TEST_CASE("a zero or null factor collapses the tensor") {
  cat::ParentCatalog b = cat::over_b3();
  for (TensorResult T : {positional_tensor(b.reg, zero3(b)),
                         positional_tensor(b.zero, reg3(b)),
                         positional_tensor(b.null_bool, reg3(b))}) {
    REQUIRE(T.status == BuildStatus::Complete);
    CHECK(T.module->msize() == 1);
  }
}

TEST_CASE("biproduct factors distribute over the tensor") {
  for (const cat::ParentCatalog& c : {cat::over_b3(), cat::over_z2()}) {
    TensorResult T = positional_tensor(c.reg2, reg3(c));
    REQUIRE(T.status == BuildStatus::Complete);
    CHECK(T.module->msize() == 4);
    CHECK(T.universe.monoid.size == 495);  // 8 generator tuples, degree <= 4
    // p |-> p (x) 1 is an additive bijection from the left factor
    std::vector<char> hit(4, 0);
    for (Elem p = 0; p < 4; ++p) hit[std::size_t(T.cls({p, 1}))] = 1;
    CHECK(std::count(hit.begin(), hit.end(), 1) == 4);
    for (Elem p = 0; p < 4; ++p) {
      for (Elem q = 0; q < 4; ++q) {
        const Elem s = c.reg2->carrier.add(p, q);
        REQUIRE(T.cls({s, 1}) ==
                T.module->carrier.add(T.cls({p, 1}), T.cls({q, 1})));
      }
    }
    CHECK(find_isomorphism(plain_module(T.module), plain_module(c.reg2)).has_value());
  }
}

TEST_CASE("every balanced additive grid map factors uniquely") {
  cat::ParentCatalog b = cat::over_b3();
  TensorResult T = positional_tensor(b.reg, reg3(b));
  for (const cat::Entry& e : b.modules) {
    ValidationReport r = check_tensor_universal(T, e.module);
    CAPTURE(e.name);
    CHECK(r.ok);
    if (e.name == "reg") CHECK(r.instances == 2);
    if (e.name == "null-3") CHECK(r.instances == 3);
  }

  cat::ParentCatalog z = cat::over_z2();
  TensorResult Tz = positional_tensor(z.reg, reg3(z));
  for (const cat::Entry& e : z.modules) {
    ValidationReport r = check_tensor_universal(Tz, e.module);
    CAPTURE(e.name);
    CHECK(r.ok);
    if (e.name == "reg") CHECK(r.instances == 2);
    if (e.name == "null-3") CHECK(r.instances == 1);  // 2x = 0 forces x = 0 in Z/3
  }

  TensorResult T2 = positional_tensor(b.reg2, reg3(b));
  CHECK(check_tensor_universal(T2, b.reg).ok);
  CHECK(check_tensor_universal(T2, b.reg2).ok);
}

TEST_CASE("three factors balance across the full arity") {
  cat::ParentCatalog b = cat::over_b3();
  std::vector<ModulePtr> lefts = {regular_module(b.parent, 1), regular_module(b.parent, 2)};
  TensorResult T = multi_tensor(lefts, reg3(b));
  REQUIRE(T.status == BuildStatus::Complete);
  CHECK(T.module->msize() == 2);
  CHECK(T.left_slot == 1);
  CHECK(T.right_slot == 3);
  CHECK(T.action_check.ok);
  CHECK(T.cls({1, 1, 1}) != T.module->carrier.zero);
  CHECK(T.cls({1, 0, 1}) == T.module->carrier.zero);

  TensorResult T0 = multi_tensor(lefts, zero3(b));
  CHECK(T0.module->msize() == 1);
}

TEST_CASE("a single left factor reduces to the two-factor tensor") {
  auto S = std::make_shared<GammaSemiring>(build_matrix_realization(base_boolean(), 1, 2));
  ModulePtr A = regular_module(S, 1);
  ModulePtr B = regular_module(S, 2);
  TensorResult multi = multi_tensor({A}, B);
  TensorResult two = positional_tensor(A, B);
  CHECK(multi.factor == two.factor);
  CHECK(multi.congruence.class_of == two.congruence.class_of);
  CHECK(multi.module->carrier.table == two.module->carrier.table);
  CHECK(multi.status == two.status);
  CHECK(two.module->msize() == 2);
  check_against_oracle(two);
}

TEST_CASE("hom carrier is the closed set of validated morphisms") {
  cat::ParentCatalog b = cat::over_b3();
  HomModule H = internal_hom(b.reg, b.reg, 3);
  CHECK(H.report.ok);
  REQUIRE(H.elements.size() == 2);  // zero and the identity survive of the 4 maps
  CHECK(H.module->msize() == 2);
  CHECK(same_table(H.module->carrier, boolean_or_monoid()));
  CHECK(H.left_slot == 2);
  CHECK(H.right_slot == 3);
  CHECK(is_zero_morphism(H.elements[std::size_t(H.module->carrier.zero)]));

  CHECK(internal_hom(b.zero, b.reg, 3).elements.size() == 1);
  CHECK(internal_hom(b.reg, b.zero, 3).elements.size() == 1);
  HomModule H24 = internal_hom(b.reg2, b.reg, 3);
  CHECK(H24.elements.size() == 4);
  CHECK(same_table(H24.module->carrier, b.reg2->carrier));
  CHECK(H24.report.ok);
}

TEST_CASE("hom actions postcompose left and precompose rotated right") {
  cat::ParentCatalog b = cat::over_b3();
  HomModule H = internal_hom(b.reg, b.reg, 3);
  Elem id = -1;
  for (std::size_t i = 0; i < H.elements.size(); ++i) {
    if (H.elements[i].map == std::vector<Elem>{0, 1}) id = Elem(i);
  }
  REQUIRE(id >= 0);
  const Elem z = H.module->carrier.zero;
  // all-ones context fixes the identity on either side; any zero kills it
  CHECK(H.module->act(0, {1, 1}, id, {1, 1}) == id);
  CHECK(H.module->act(1, {1, 1}, id, {1, 1}) == id);
  CHECK(H.module->act(0, {0, 1}, id, {1, 1}) == z);
  CHECK(H.module->act(1, {1, 0}, id, {1, 1}) == z);
  CHECK(H.module->act(0, {1, 1}, z, {1, 1}) == z);
}

TEST_CASE("currying is a bijection on every catalog triple") {
  cat::ParentCatalog b = cat::over_b3();
  cat::ParentCatalog z = cat::over_z2();
  struct Triple {
    ModulePtr M, N, P;
    std::uint64_t lhs;
  };
  const std::vector<Triple> triples = {
      {b.reg, reg3(b), b.reg, 2},        {b.reg, reg3(b), b.reg2, 4},
      {b.reg, reg3(b), b.regz, 2},       {b.reg, reg3(b), b.null_bool, 1},
      {b.reg, reg3(b), b.null_three, 1}, {b.reg2, reg3(b), b.reg, 4},
      {b.reg, zero3(b), b.reg, 1},       {b.null_bool, reg3(b), b.reg, 1},
      {z.reg, reg3(z), z.reg, 2},        {z.reg, reg3(z), z.reg2, 4},
      {z.reg2, reg3(z), z.reg2, 16},     {z.reg, zero3(z), z.reg, 1},
  };
  for (std::size_t i = 0; i < triples.size(); ++i) {
    const Triple& t = triples[i];
    const auto& probes = same_parent(*t.M->parent, *b.parent) ? b.morphisms : z.morphisms;
    AdjunctionReport ar = check_adjunction(t.M, t.N, t.P, probes);
    CAPTURE(i);
    REQUIRE(ar.available);
    CHECK(ar.report.ok);
    CHECK(ar.bijective);
    CHECK(ar.lhs == t.lhs);
    CHECK(ar.rhs == t.lhs);
  }
}

TEST_CASE("hom is left exact across the conflation catalog") {
  cat::ParentCatalog b = cat::over_b3();
  cat::ParentCatalog z = cat::over_z2();
  std::vector<Conflation> cs;
  cs.push_back(split_conflation(b.reg, b.reg).conflation);
  cs.push_back(split_conflation(b.reg, b.zero).conflation);
  cs.push_back(split_conflation(b.null_bool, b.null_three).conflation);
  cs.push_back(make_conflation(table_morphism(b.null_bool, b.null_three, {0, 1}),
                               table_morphism(b.null_three, b.null_bool, {0, 0, 1}))
                   .conflation);  // sectioned but non-split
  const std::size_t b3_count = cs.size();
  cs.push_back(split_conflation(z.reg, z.reg).conflation);
  cs.push_back(make_conflation(z.morphisms[3], z.morphisms[4]).conflation);  // diag, fold

  for (std::size_t ci = 0; ci < cs.size(); ++ci) {
    const cat::ParentCatalog& c = ci < b3_count ? b : z;
    for (const cat::Entry& e : c.modules) {
      ExactnessReport er = check_hom_left_exact(e.module, cs[ci]);
      CAPTURE(ci);
      CAPTURE(e.name);
      REQUIRE(er.available);
      CHECK(er.report.ok);
    }
  }
}

TEST_CASE("tensoring is right exact across the conflation catalog") {
  cat::ParentCatalog b = cat::over_b3();
  cat::ParentCatalog z = cat::over_z2();
  std::vector<Conflation> bs = {
      split_conflation(b.reg, b.reg).conflation,
      split_conflation(b.reg, b.zero).conflation,
      split_conflation(b.null_bool, b.null_three).conflation,
      make_conflation(table_morphism(b.null_bool, b.null_three, {0, 1}),
                      table_morphism(b.null_three, b.null_bool, {0, 0, 1}))
          .conflation,
  };
  std::vector<Conflation> zs = {
      split_conflation(z.reg, z.reg).conflation,
      make_conflation(z.morphisms[3], z.morphisms[4]).conflation,
  };
  for (const Conflation& c : bs) {
    for (const ModulePtr& N : {reg3(b), zero3(b), null3(b)}) {
      ExactnessReport er = check_tensor_right_exact(N, c);
      REQUIRE(er.available);
      CHECK(er.report.ok);
    }
  }
  for (const Conflation& c : zs) {
    for (const ModulePtr& N : {reg3(z), zero3(z)}) {
      ExactnessReport er = check_tensor_right_exact(N, c);
      REQUIRE(er.available);
      CHECK(er.report.ok);
    }
  }
}

TEST_CASE("hom-set sizes multiply over biproducts") {
  for (const cat::ParentCatalog& c : {cat::over_b3(), cat::over_z2()}) {
    const std::size_t into_reg = internal_hom(c.reg, c.reg, 3).elements.size();
    const std::size_t into_zero = internal_hom(c.reg, c.zero, 3).elements.size();
    CHECK(internal_hom(c.reg, c.reg2, 3).elements.size() == into_reg * into_reg);
    CHECK(internal_hom(c.reg, c.regz, 3).elements.size() == into_reg * into_zero);
  }
}

TEST_CASE("induced maps respect composition") {
  cat::ParentCatalog b = cat::over_b3();
  cat::ParentCatalog z = cat::over_z2();

  for (const cat::ParentCatalog& c : {b, z}) {
    const ModuleMorphism& diag = c.morphisms[3];
    const ModuleMorphism& fold = c.morphisms[4];
    TensorResult TR = positional_tensor(c.reg, reg3(c));
    TensorResult T2 = positional_tensor(c.reg2, reg3(c));
    ModuleMorphism d = induced_on_first(TR, T2, diag);
    ModuleMorphism f = induced_on_first(T2, TR, fold);
    CHECK(validate_morphism(d).ok);
    CHECK(validate_morphism(f).ok);
    ModuleMorphism both = induced_on_first(TR, TR, compose(fold, diag));
    CHECK(compose(f, d).map == both.map);
  }

  // Contravariant hom: precomposition along diag after precomposition along
  // fold equals precomposition along the composite.
  HomModule HR = internal_hom(b.reg, b.reg, 3);
  HomModule H2 = internal_hom(b.reg2, b.reg, 3);
  const std::vector<Elem> pre_fold = hom_precompose(HR, H2, b.morphisms[4]);
  const std::vector<Elem> pre_diag = hom_precompose(H2, HR, b.morphisms[3]);
  const std::vector<Elem> pre_both =
      hom_precompose(HR, HR, compose(b.morphisms[4], b.morphisms[3]));
  for (std::size_t g = 0; g < HR.elements.size(); ++g) {
    CHECK(pre_diag[std::size_t(pre_fold[g])] == pre_both[g]);
  }
  // precomposition is additive
  const ModuleMorphism pf = table_morphism(plain_module(HR.module), plain_module(H2.module),
                                           pre_fold);
  CHECK(validate_morphism(pf).ok);
}

TEST_CASE("malformed tensor and hom inputs are rejected") {
  cat::ParentCatalog b = cat::over_b3();
  cat::ParentCatalog z = cat::over_z2();
  CHECK_THROWS_AS((void)positional_tensor(b.reg, reg3(z)), std::invalid_argument);
  CHECK_THROWS_AS((void)multi_tensor({b.reg}, reg3(b)), std::invalid_argument);
  CHECK_THROWS_AS((void)positional_tensor(b.reg2, reg3(b), 1), LimitError);
  TensorResult T = positional_tensor(b.reg, reg3(b));
  CHECK_THROWS_AS((void)check_tensor_universal(T, z.reg), std::invalid_argument);
  CHECK_THROWS_AS((void)internal_hom(b.reg, b.reg, 2), std::invalid_argument);
  CHECK_THROWS_AS((void)internal_hom(b.reg, b.reg, 9), std::invalid_argument);
  CHECK_THROWS_AS((void)internal_hom(b.reg, reg3(b), 1), std::invalid_argument);
}

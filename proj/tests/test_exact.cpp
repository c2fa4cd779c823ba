#include <algorithm>

#include "catalog.hpp"
#include "doctest.h"
#include "gammalab/exact.hpp"

using namespace gammalab;

namespace {

bool failed_at(const ValidationReport& r, const std::string& law_prefix) {
  return !r.ok && r.law_failed(law_prefix);
}

bool bijective(const ModuleMorphism& f) {
  if (f.source->msize() != f.target->msize()) return false;
  std::vector<char> hit(std::size_t(f.target->msize()), 0);
  for (Elem v : f.map) {
    if (hit[std::size_t(v)]) return false;
    hit[std::size_t(v)] = 1;
  }
  return true;
}

// or-carrier >-> max-chain carrier ->> or-carrier: the middle has three
// elements while the outer biproduct would have four, so no splitting exists
// even though the deflation admits a section.
ConflationResult chain_conflation(const cat::ParentCatalog& c) {
  ModuleMorphism i = table_morphism(c.null_bool, c.null_three, {0, 1});
  ModuleMorphism p = table_morphism(c.null_three, c.null_bool, {0, 0, 1});
  return make_conflation(i, p);
}

}  // namespace

TEST_CASE("split conflations certify over both parents") {
  for (const cat::ParentCatalog& c : {cat::over_b3(), cat::over_z2()}) {
    for (const auto& [a, b] : std::vector<std::pair<ModulePtr, ModulePtr>>{
             {c.reg, c.reg}, {c.reg, c.zero}, {c.null_bool, c.null_three}}) {
      ConflationResult r = split_conflation(a, b);
      CAPTURE(c.parent->provenance);
      CHECK(r.report.ok);
      REQUIRE(!r.report.notes.empty());
      CHECK(r.report.notes.back().find("image congruence classes") != std::string::npos);
    }
  }
}

TEST_CASE("identity conflations certify at both ends") {
  cat::ParentCatalog c = cat::over_b3();
  for (const ModulePtr& M : {c.reg, c.null_three}) {
    ConflationResult onto = make_conflation(zero_morphism(c.zero, M), identity_morphism(M));
    CHECK(onto.report.ok);
    ConflationResult from = make_conflation(identity_morphism(M), zero_morphism(M, c.zero));
    CHECK(from.report.ok);
  }
}

TEST_CASE("rejected pairs name the first broken condition") {
  cat::ParentCatalog b = cat::over_b3();
  cat::ParentCatalog z = cat::over_z2();

  // identity twice: the composite is not zero
  ConflationResult ii = make_conflation(identity_morphism(b.reg), identity_morphism(b.reg));
  CHECK(failed_at(ii.report, "compose-zero"));

  // zero map into a projection: the kernel is strictly larger than the image
  const ModuleMorphism& p1 = z.morphisms[5];
  ConflationResult zk = make_conflation(zero_morphism(z.reg, z.reg2), p1);
  CHECK(failed_at(zk.report, "kernel-image"));

  // kernel matches but the quotient has two classes against four elements
  const ModuleMorphism& diag = z.morphisms[3];
  const ModuleMorphism& fold = z.morphisms[4];
  const ModuleMorphism& i1 = z.morphisms[6];
  ConflationResult ck = make_conflation(diag, compose(i1, fold));
  CHECK(failed_at(ck.report, "cokernel-iso"));
}

TEST_CASE("a sectioned conflation with no splitting certifies over the idempotent parent") {
  cat::ParentCatalog c = cat::over_b3();
  ConflationResult r = chain_conflation(c);
  REQUIRE(r.report.ok);

  // the deflation has a section (top of the chain), yet the middle cannot be
  // the biproduct of the ends: three elements against four
  const auto sections = enumerate_morphisms(c.null_bool, c.null_three);
  bool sectioned = false;
  for (const ModuleMorphism& s : sections) {
    if (same_map(compose(r.conflation.deflation, s), identity_morphism(c.null_bool))) {
      sectioned = true;
    }
  }
  CHECK(sectioned);
  BiproductResult ends = biproduct(c.null_bool, c.null_bool);
  CHECK(!find_isomorphism(c.null_three, ends.module).has_value());
}

TEST_CASE("admissibility of the same formula flips with the parent") {
  cat::ParentCatalog b = cat::over_b3();
  cat::ParentCatalog z = cat::over_z2();

  // doubling map as an inflation candidate
  AdmissibilityVerdict bd = certify_inflation(b.morphisms[3]);
  CHECK(!bd.admissible);
  CHECK(bd.report.law_failed("kernel-image"));
  AdmissibilityVerdict zd = certify_inflation(z.morphisms[3]);
  CHECK(zd.admissible);

  // fold as a deflation candidate
  AdmissibilityVerdict bf = certify_deflation(b.morphisms[4]);
  CHECK(!bf.admissible);
  AdmissibilityVerdict zf = certify_deflation(z.morphisms[4]);
  CHECK(zf.admissible);
}

TEST_CASE("pushout along the identity reproduces the far corner") {
  cat::ParentCatalog c = cat::over_b3();
  const ModuleMorphism& i1 = c.morphisms[6];
  PushoutResult po = pushout(i1, identity_morphism(c.reg));
  CHECK(po.action_check.ok);
  CHECK(po.congruence.classes == c.reg2->msize());
  CHECK(bijective(po.from_b));
  CHECK(validate_morphism(po.from_b).ok);
  CHECK(po.inflation_verdict.admissible);
}

TEST_CASE("pushout along the zero map is the cokernel quotient") {
  cat::ParentCatalog c = cat::over_b3();
  const ModuleMorphism& i1 = c.morphisms[6];
  PushoutResult po = pushout(i1, zero_morphism(c.reg, c.zero));
  CokernelResult ck = cokernel(i1);
  CHECK(po.congruence.classes == ck.congruence.classes);
  auto h = find_isomorphism(po.module, ck.module);
  REQUIRE(h.has_value());
  CHECK(same_map(compose(*h, po.from_b), ck.projection));
}

TEST_CASE("a split inflation pushes out to a split inflation") {
  cat::ParentCatalog c = cat::over_b3();
  ConflationResult split = split_conflation(c.reg, c.reg);
  const ModuleMorphism& diag = c.morphisms[3];
  PushoutResult po = pushout(split.conflation.inflation, diag);
  CHECK(po.action_check.ok);
  CHECK(po.inflation_verdict.admissible);
  BiproductResult expect = biproduct(c.reg2, c.reg);
  CHECK(find_isomorphism(po.module, expect.module).has_value());
}

TEST_CASE("pullback along the identity reproduces the near corner") {
  cat::ParentCatalog c = cat::over_b3();
  const ModuleMorphism& p1 = c.morphisms[5];
  PullbackResult pb = pullback(p1, identity_morphism(c.reg));
  CHECK(Elem(pb.members.size()) == c.reg2->msize());
  CHECK(bijective(pb.to_b));
  CHECK(validate_morphism(pb.to_b).ok);
  CHECK(pb.deflation_verdict.admissible);
}

TEST_CASE("pullback along the zero morphism is the kernel beside the other corner") {
  cat::ParentCatalog c = cat::over_b3();
  const ModuleMorphism& p1 = c.morphisms[5];
  PullbackResult pb = pullback(p1, zero_morphism(c.reg, c.reg));
  KernelResult k = kernel(p1);
  BiproductResult expect = biproduct(k.module, c.reg);
  CHECK(find_isomorphism(pb.module, expect.module).has_value());
  CHECK(pb.deflation_verdict.admissible);
}

TEST_CASE("a split deflation pulls back to a split deflation") {
  cat::ParentCatalog c = cat::over_b3();
  ConflationResult split = split_conflation(c.reg, c.reg);
  const ModuleMorphism& fold = c.morphisms[4];
  PullbackResult pb = pullback(split.conflation.deflation, fold);
  CHECK(pb.deflation_verdict.admissible);
  BiproductResult expect = biproduct(c.reg, c.reg2);
  CHECK(find_isomorphism(pb.module, expect.module).has_value());
}

TEST_CASE("pushout and pullback universal properties hold against the module zoo") {
  cat::ParentCatalog c = cat::over_b3();
  BiproductResult rz = biproduct(c.reg, c.zero);

  PushoutResult po = pushout(rz.inject_first, zero_morphism(c.reg, c.reg));
  ValidationReport up = check_pushout_universal(po, rz.inject_first,
                                                zero_morphism(c.reg, c.reg), c.probes());
  CHECK(up.ok);
  CHECK(up.instances > 0);

  PullbackResult pb = pullback(rz.project_first, identity_morphism(c.reg));
  ValidationReport down = check_pullback_universal(pb, rz.project_first,
                                                   identity_morphism(c.reg), c.probes());
  CHECK(down.ok);
  CHECK(down.instances > 0);
}

TEST_CASE("the exact-category axioms pass over the idempotent conflation catalog") {
  cat::ParentCatalog c = cat::over_b3();
  std::vector<Conflation> conflations;
  for (ConflationResult r : {split_conflation(c.reg, c.reg), split_conflation(c.reg, c.zero),
                             split_conflation(c.zero, c.reg),
                             split_conflation(c.null_bool, c.null_three), chain_conflation(c)}) {
    REQUIRE(r.report.ok);
    conflations.push_back(r.conflation);
  }
  QuillenReport qr = check_quillen_instance(conflations, c.morphisms);
  CHECK(qr.report.ok);
  CHECK(qr.identities_checked == 12);
  CHECK(qr.inflation_compositions == 4);
  CHECK(qr.deflation_compositions == 5);
  CHECK(qr.pushouts_checked == 10);
  CHECK(qr.pullbacks_checked == 12);
}

TEST_CASE("the exact-category axioms pass over the parity conflation catalog") {
  cat::ParentCatalog c = cat::over_z2();
  std::vector<Conflation> conflations;
  for (ConflationResult r :
       {split_conflation(c.reg, c.reg), split_conflation(c.reg2, c.reg),
        make_conflation(c.morphisms[3], c.morphisms[4])}) {
    REQUIRE(r.report.ok);
    conflations.push_back(r.conflation);
  }
  QuillenReport qr = check_quillen_instance(conflations, c.morphisms);
  CHECK(qr.report.ok);
  CHECK(qr.identities_checked == 6);
  CHECK(qr.inflation_compositions == 2);
  CHECK(qr.deflation_compositions == 0);
  CHECK(qr.pushouts_checked == 13);
  CHECK(qr.pullbacks_checked == 18);
}

TEST_CASE("malformed corner requests throw and incompatible shapes have no isomorphism") {
  cat::ParentCatalog c = cat::over_b3();
  const ModuleMorphism& p1 = c.morphisms[5];
  const ModuleMorphism& i1 = c.morphisms[6];
  CHECK_THROWS_AS(pushout(p1, identity_morphism(c.reg)), std::invalid_argument);
  CHECK_THROWS_AS(pullback(i1, identity_morphism(c.reg)), std::invalid_argument);
  CHECK(!find_isomorphism(c.reg, c.null_three).has_value());
  CHECK(!find_isomorphism(c.reg, cat::over_z2().reg).has_value());
  CHECK_THROWS_AS(find_isomorphism(c.reg2, c.reg2, 1), LimitError);
}

#include "catalog.hpp"

namespace gammalab::cat {

SemiringPtr b3() { return std::make_shared<GammaSemiring>(b3_semiring()); }

SemiringPtr z2() {
  return std::make_shared<GammaSemiring>(build_matrix_realization(base_z2(), 1, 3));
}

std::vector<ModulePtr> ParentCatalog::probes() const {
  std::vector<ModulePtr> out;
  for (const Entry& e : modules) out.push_back(e.module);
  return out;
}

namespace {

ParentCatalog build(SemiringPtr S) {
  ParentCatalog c;
  c.parent = S;
  c.zero = zero_module(S, {2});
  c.reg = regular_module(S, 2);
  BiproductResult rr = biproduct(c.reg, c.reg);
  BiproductResult rz = biproduct(c.reg, c.zero);
  c.reg2 = rr.module;
  c.regz = rz.module;
  c.null_bool = null_action_module(S, boolean_or_monoid(), {2});
  if (S->T.idempotent() && S->Gamma.idempotent()) {
    c.null_three = null_action_module(S, max_chain_monoid(3), {2});
  } else {
    c.null_three = null_action_module(S, cyclic_monoid(3), {2});
  }
  c.modules = {{"zero", c.zero},     {"reg", c.reg},
               {"reg+reg", c.reg2},  {"reg+zero", c.regz},
               {"null-or", c.null_bool}, {"null-3", c.null_three}};

  const int m = c.reg->msize();
  std::vector<Elem> diag(std::size_t(m), 0);
  std::vector<Elem> fold(std::size_t(c.reg2->msize()), 0);
  for (Elem x = 0; x < m; ++x) diag[std::size_t(x)] = x * m + x;
  for (Elem p = 0; p < c.reg2->msize(); ++p) {
    fold[std::size_t(p)] = c.reg->carrier.add(p / m, p % m);
  }
  c.morphisms = {identity_morphism(c.reg),
                 zero_morphism(c.reg, c.reg),
                 zero_morphism(c.reg2, c.reg),
                 table_morphism(c.reg, c.reg2, diag),
                 table_morphism(c.reg2, c.reg, fold),
                 rr.project_first,
                 rr.inject_first,
                 rz.project_first};
  c.morphism_names = {"id(reg)", "0(reg,reg)", "0(reg+reg,reg)", "diag", "fold",
                      "p1",      "i1",         "p1(reg+zero)"};
  return c;
}

}  // namespace

ParentCatalog over_b3() { return build(b3()); }
ParentCatalog over_z2() { return build(z2()); }

}  // namespace gammalab::cat

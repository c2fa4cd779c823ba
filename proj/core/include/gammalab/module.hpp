#pragma once

#include <memory>

#include "gammalab/semiring.hpp"

namespace gammalab {

using SemiringPtr = std::shared_ptr<const GammaSemiring>;

// One positional action: the module element occupies `slot` (1-based) of the
// parent's n-ary product, the n-1 ring arguments fill the remaining slots in
// written order.  Table cells may be -1 (undefined) when the carrier is a
// bounded term universe; axiom scans skip instances that touch an undefined
// cell and say so in a note.
struct ActionSlot {
  int slot = 2;
  std::vector<Elem> table;
};

// Commutative monoid acted on by the parent semiring through one positional
// action (plain module) or two (bimodule; actions[0] is the left one and must
// sit at the strictly smaller slot).  Laws, per action:
//   M1  additivity in the module slot and in every ring slot,
//   M2  all complete evaluations of a flattened module word agree; words of
//       lengths 2n-1 and 3n-2 are scanned (the longer family is the first
//       non-vacuous one for interior slots and is guarded by the coherence
//       budget),
//   M3  absorption by the additive zeros of the carrier and of T,
//   M4  additivity in each Gamma-parameter separately.
struct PositionalModule {
  SemiringPtr parent;
  FiniteCommMonoid carrier;
  std::vector<ActionSlot> actions;
  std::string provenance;

  int msize() const { return carrier.size; }
  std::uint64_t act_cells() const;
  // Layout: ring arguments (most significant), then m, then parameters.
  std::uint64_t act_index(const Word& targs, Elem m, const Word& params) const;
  Elem act(int action, const Word& targs, Elem m, const Word& params) const;
  bool total() const;  // carrier and every action table fully defined
};

using BiModule = PositionalModule;
using ModulePtr = std::shared_ptr<const PositionalModule>;

// --- builders ----------------------------------------------------------------

// The parent acting on itself with the module element in `slot`.
ModulePtr regular_module(SemiringPtr S, int slot);
// Left action at `left_slot`, right action at `right_slot` (defaults 2 and n).
ModulePtr regular_bimodule(SemiringPtr S, int left_slot = 2, int right_slot = -1);
// One-element carrier, every action lands on it.
ModulePtr zero_module(SemiringPtr S, std::vector<int> slots);
// Arbitrary carrier with every action constantly zero.
ModulePtr null_action_module(SemiringPtr S, FiniteCommMonoid carrier, std::vector<int> slots);
// Escape hatch for hand-built tables.
ModulePtr table_module(SemiringPtr S, FiniteCommMonoid carrier, std::vector<ActionSlot> actions,
                       std::string provenance);

// --- validation --------------------------------------------------------------

// Laws "M1/module", "M1/ring", "M2", "M3/module", "M3/ring", "M4", plus
// structural "shape/..." and carrier laws.  With two actions every law name
// is prefixed "left/" or "right/".  Witness layouts are documented next to
// each scan in the implementation.
ValidationReport validate_module(const PositionalModule& M, const ScanOptions& opts = {});

// validate_module plus the law "compat": acting on the left commutes with
// acting on the right, for all contexts and all module elements.
ValidationReport validate_bimodule(const BiModule& M, const ScanOptions& opts = {});

// --- morphisms ---------------------------------------------------------------

struct ModuleMorphism {
  ModulePtr source;
  ModulePtr target;
  std::vector<Elem> map;

  Elem operator()(Elem m) const { return map[std::size_t(m)]; }
};

// Structural identity of carriers, actions, and parents (by table contents,
// so independently built copies compare equal).
bool same_parent(const GammaSemiring& a, const GammaSemiring& b);
bool same_module(const PositionalModule& a, const PositionalModule& b);

ModuleMorphism identity_morphism(ModulePtr M);
ModuleMorphism zero_morphism(ModulePtr src, ModulePtr dst);
ModuleMorphism table_morphism(ModulePtr src, ModulePtr dst, std::vector<Elem> map);
// g after f; endpoint mismatch throws std::invalid_argument.
ModuleMorphism compose(const ModuleMorphism& g, const ModuleMorphism& f);
// Pointwise target addition; nullopt when some pointwise sum is undefined.
std::optional<ModuleMorphism> add_morphisms(const ModuleMorphism& f, const ModuleMorphism& g);
bool same_map(const ModuleMorphism& f, const ModuleMorphism& g);
bool is_zero_morphism(const ModuleMorphism& f);

// Laws "zero", "additive", "action" (intertwining, per paired action), plus
// endpoint compatibility under "shape/...".
ValidationReport validate_morphism(const ModuleMorphism& f, const ScanOptions& opts = {});

// Every map source -> target that validates, ordered lexicographically by
// value table.  Throws LimitError when |target|^|source| exceeds max_maps.
std::vector<ModuleMorphism> enumerate_morphisms(ModulePtr src, ModulePtr dst,
                                                std::uint64_t max_maps = std::uint64_t(1) << 20);

// --- kernels, cokernels, biproducts -------------------------------------------

// Carrier = preimage of zero, re-indexed in ascending source order.  Closure
// under addition and under every action is re-checked; a violation throws
// std::logic_error (it would contradict a validated input morphism).
struct KernelResult {
  ModulePtr module;
  ModuleMorphism inclusion;  // kernel -> source of f
};

KernelResult kernel(const ModuleMorphism& f);

// Target modulo the smallest additive congruence collapsing the image of f
// to zero.  The induced action is checked for representative independence;
// disagreements are mathematical obstructions reported in action_check, not
// exceptions.  The naive coset relation is compared against the congruence
// and the verdict recorded in log.
struct CokernelResult {
  ModulePtr module;
  ModuleMorphism projection;  // target of f -> quotient
  CongruenceRelation congruence;
  QuotientStats stats;
  ValidationReport action_check;
  std::vector<std::string> log;
};

CokernelResult cokernel(const ModuleMorphism& f);

// Product carrier (index = m * |N| + n) with componentwise actions.
struct BiproductResult {
  ModulePtr module;
  ModuleMorphism inject_first, inject_second;
  ModuleMorphism project_first, project_second;
};

BiproductResult biproduct(ModulePtr M, ModulePtr N);

// The four structural morphisms validate; projection-of-injection identities
// and the split identity i1 p1 + i2 p2 = id hold pointwise.
ValidationReport check_biproduct(const BiproductResult& B, const ScanOptions& opts = {});

// --- universal properties ------------------------------------------------------

// For every probe W and every validated g: W -> source(f) with f.g = 0,
// exactly one h: W -> kernel satisfies inclusion.h = g.  Dually for the
// cokernel: every g: target(f) -> W with g.f = 0 factors uniquely through the
// projection.  Factorisation candidates are found by full enumeration.
ValidationReport check_kernel_universal(const ModuleMorphism& f, const KernelResult& k,
                                        const std::vector<ModulePtr>& probes,
                                        std::uint64_t max_maps = std::uint64_t(1) << 20);
ValidationReport check_cokernel_universal(const ModuleMorphism& f, const CokernelResult& c,
                                          const std::vector<ModulePtr>& probes,
                                          std::uint64_t max_maps = std::uint64_t(1) << 20);

}  // namespace gammalab

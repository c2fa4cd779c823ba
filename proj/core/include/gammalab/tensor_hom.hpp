#pragma once

#include "gammalab/exact.hpp"

namespace gammalab {

// Same carrier, no actions.  Used wherever a construction needs the additive
// shadow of a module (hom-sets between differently shaped objects, induced
// maps between tensor quotients).
ModulePtr plain_module(ModulePtr M);

// Tensor product of positional modules, presented as a bounded term universe
// over generator tuples modulo the congruence generated by
//   (i)   zero relations: a tuple with a zero coordinate collapses to zero,
//   (ii)  additivity in every coordinate,
//   (iii) balancing of adjacent factors: with ring context u = (a, w...) and
//         all parameters shared, acting on the left factor with a moved last
//         equals acting on the right factor with a first.
// The candidate induced actions (the first factor's leftmost action on the
// first coordinate, the last factor's rightmost action on the last) are
// attached only when every class acts representative-independently; an
// obstruction leaves a plain monoid result and a warning in the log, with the
// evidence in action_check.  Status is Complete exactly when the quotient
// addition is total and no relation instance fell outside the universe.
struct TensorResult {
  ModulePtr module;
  std::vector<ModulePtr> factors;
  std::vector<int> sizes;    // factor carrier sizes; factor uses this layout
  std::vector<Elem> factor;  // generator tuple (mixed radix, first factor most
                             // significant) -> quotient class
  CongruenceRelation congruence;  // on the term universe
  TermUniverse universe;
  BuildStatus status = BuildStatus::Complete;
  QuotientStats stats;
  ValidationReport action_check;
  std::uint64_t zero_relations = 0;
  std::uint64_t additivity_relations = 0;
  std::uint64_t balancing_relations = 0;
  int left_slot = 0;  // slot of the attached action; 0 when omitted
  int right_slot = 0;
  std::vector<std::string> log;

  Elem cls(const Word& coords) const;
};

// Two factors; M contributes its rightmost action to the balancing, N its
// leftmost.  max_classes caps the term universe; the additive degree bound
// starts at 4 and is lowered (never below 2) until the universe fits.
TensorResult positional_tensor(ModulePtr M, ModulePtr N, std::uint64_t max_classes = 4096);

// One factor per parent slot: lefts.size() + 1 must equal the parent arity.
// Adjacent factors are balanced pairwise; two factors reduce to
// positional_tensor exactly.
TensorResult multi_tensor(const std::vector<ModulePtr>& lefts, ModulePtr N,
                          std::uint64_t max_classes = 4096);

// Coequalizer universal property, instance form: every map from the
// generator grid to P that kills zeros, is additive in each coordinate, and
// respects the balancing relations factors through the tensor by exactly one
// additive map.  Enumerates all |P|^grid maps; throws LimitError past
// max_maps, std::invalid_argument when the tensor is not Complete.
ValidationReport check_tensor_universal(const TensorResult& T, ModulePtr P,
                                        std::uint64_t max_maps = std::uint64_t(1) << 20);

// The set of validated morphisms M -> P under pointwise addition, acted on
// the left (slot of the endpoints' own action) by postcomposition through P
// and on the right (at right_slot) by precomposition through M with the ring
// context rotated one place (first argument moved last), matching the tensor
// balancing convention.  Either action is dropped, with a report entry, if it
// fails to land back in the carrier.
struct HomModule {
  ModulePtr module;
  std::vector<ModuleMorphism> elements;  // carrier order
  int left_slot = 0;   // 0 when the action was dropped
  int right_slot = 0;
  ValidationReport report;  // closure, action preservation, module laws
  std::vector<std::string> log;
};

HomModule internal_hom(ModulePtr M, ModulePtr P, int right_slot,
                       std::uint64_t max_maps = std::uint64_t(1) << 20);

// Currying bijection: Hom(M (x) N, P) matched against Hom(N, Hom(M, P)).
// The left side is the morphism set out of the tensor carrying only its left
// action; the right side maps into the hom-module carrying only its right
// action.  Naturality squares are checked against the supplied probes with
// source P (postcomposition variable) and coverage is logged.
struct AdjunctionReport {
  bool available = true;  // false: tensor incomplete or an action was dropped
  bool bijective = false;
  std::uint64_t lhs = 0, rhs = 0;  // hom-set cardinalities
  ValidationReport report;
  std::vector<std::string> log;
};

AdjunctionReport check_adjunction(ModulePtr M, ModulePtr N, ModulePtr P,
                                  const std::vector<ModuleMorphism>& naturality_probes = {},
                                  std::uint64_t max_classes = 4096,
                                  std::uint64_t max_maps = std::uint64_t(1) << 20);

// Exactness verdicts.  available flips to false (nothing asserted) when an
// enumeration limit or an incomplete tensor blocks the computation.
struct ExactnessReport {
  bool available = true;
  ValidationReport report;
  std::vector<std::string> log;
};

// 0 -> Hom(M,A) -> Hom(M,B) -> Hom(M,C): postcomposition with the inflation
// is injective, and the maps hitting zero under the deflation are exactly the
// postcomposition image.  Laws "injective", "kernel-image".
ExactnessReport check_hom_left_exact(ModulePtr M, const Conflation& c,
                                     std::uint64_t max_maps = std::uint64_t(1) << 20);

// A(x)N -> B(x)N -> C(x)N -> 0: the composite is zero, the second map is
// surjective, and the comparison from coker(A(x)N -> B(x)N) to C(x)N (class
// -> common image) is a bijective additive map.  Laws "compose-zero",
// "surjective", "cokernel-iso".
ExactnessReport check_tensor_right_exact(ModulePtr N, const Conflation& c,
                                         std::uint64_t max_classes = 4096,
                                         std::uint64_t max_maps = std::uint64_t(1) << 20);

}  // namespace gammalab

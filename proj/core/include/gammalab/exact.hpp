#pragma once

#include "gammalab/module.hpp"

namespace gammalab {

// Kernel-cokernel pair: an inflation i: A -> B and a deflation p: B -> C.
// Certified instances satisfy
//   - p after i is the zero morphism,
//   - the preimage of zero under p is exactly the image of i, with i injective,
//   - the comparison from cokernel(i) to C (class -> common p-value) is a
//     well-defined bijective morphism (so B has exactly |C| classes under the
//     congruence collapsing the image of i).
struct Conflation {
  ModuleMorphism inflation;
  ModuleMorphism deflation;
};

// Laws, scanned in order with an early return after the first failed one
// (later laws are meaningless once an earlier one is broken):
//   "shape/..."      endpoints composable, both maps validate
//   "compose-zero"   witness = {a} with p(i(a)) != 0
//   "kernel-image"   witness = {b} in exactly one of ker(p), im(i), or
//                    {a, a'} an injectivity violation of i
//   "cokernel-iso"   witness pins the class or pair where the comparison
//                    fails to be well defined, bijective, or a morphism
ValidationReport check_conflation(const Conflation& c, const ScanOptions& opts = {});

struct ConflationResult {
  Conflation conflation;
  ValidationReport report;
};

// Pairs i and p and certifies; failures live in the report, never in thrown
// errors (only structural impossibilities throw).
ConflationResult make_conflation(const ModuleMorphism& i, const ModuleMorphism& p,
                                 const ScanOptions& opts = {});

// A >-> A(+)B ->> B through the biproduct's structural maps.
ConflationResult split_conflation(ModulePtr A, ModulePtr B, const ScanOptions& opts = {});

// Admissibility is extensional: a map is an inflation iff pairing it with its
// cokernel projection certifies, a deflation iff pairing its kernel inclusion
// with it does.
struct AdmissibilityVerdict {
  bool admissible = false;
  Conflation conflation;  // the attempted pair, kept for replay either way
  ValidationReport report;
};

AdmissibilityVerdict certify_inflation(const ModuleMorphism& i, const ScanOptions& opts = {});
AdmissibilityVerdict certify_deflation(const ModuleMorphism& p, const ScanOptions& opts = {});

// Backtracking search for a bijective morphism src -> dst whose inverse is
// also a morphism.  Carrier sizes, action shapes, and parents are pre-filtered;
// the search assigns zero -> zero and prunes on addition and action cells over
// the assigned part.  Throws LimitError when the node budget runs out.
std::optional<ModuleMorphism> find_isomorphism(ModulePtr src, ModulePtr dst,
                                               std::uint64_t max_nodes = std::uint64_t(1) << 22);

// Pushout of an inflation i: A >-> B along f: A -> A': the quotient of the
// biproduct A'(+)B by the smallest congruence with (f(a),0) ~ (0,i(a)).
// Induced actions are checked for representative independence; disagreement is
// an obstruction recorded in action_check (the verdict is then skipped).
struct PushoutResult {
  ModulePtr module;               // B'
  ModuleMorphism from_prime;      // A' -> B'
  ModuleMorphism from_b;          // B  -> B'
  CongruenceRelation congruence;  // on the biproduct carrier, index = a' * |B| + b
  QuotientStats stats;
  ValidationReport action_check;
  AdmissibilityVerdict inflation_verdict;  // does from_prime certify as an inflation?
  std::vector<std::string> log;
};

PushoutResult pushout(const ModuleMorphism& i, const ModuleMorphism& f);

// Pullback of a deflation p: B ->> C along g: C' -> C: the sub-biproduct on
// {(b,c') : p(b) = g(c')}.  Closure of the member set under addition and
// actions follows from p and g being morphisms; a violation throws.
struct PullbackResult {
  ModulePtr module;           // B'
  ModuleMorphism to_b;        // B' -> B
  ModuleMorphism to_prime;    // B' -> C'
  std::vector<Elem> members;  // biproduct indices b * |C'| + c', ascending
  AdmissibilityVerdict deflation_verdict;  // does to_prime certify as a deflation?
  std::vector<std::string> log;
};

PullbackResult pullback(const ModuleMorphism& p, const ModuleMorphism& g);

// Universal properties by exhaustive factorisation search.  For every probe W
// and every commuting cocone (u: A' -> W, v: B -> W with u.f = v.i), exactly
// one w: B' -> W has w.from_prime = u and w.from_b = v; dually for cones over
// a pullback.  Throws LimitError when a hom-set enumeration would exceed
// max_maps.
ValidationReport check_pushout_universal(const PushoutResult& po, const ModuleMorphism& i,
                                         const ModuleMorphism& f,
                                         const std::vector<ModulePtr>& probes,
                                         std::uint64_t max_maps = std::uint64_t(1) << 20);
ValidationReport check_pullback_universal(const PullbackResult& pb, const ModuleMorphism& p,
                                          const ModuleMorphism& g,
                                          const std::vector<ModulePtr>& probes,
                                          std::uint64_t max_maps = std::uint64_t(1) << 20);

// Per-instance exact-category axioms over a finite catalog.
//   E1  for every module appearing as a conflation endpoint, the identity
//       conflations 0 >-> M ->> M and M >-> M ->> 0 certify,
//   E2  every composable pair of catalog inflations composes to an inflation,
//       dually for deflations,
//   E3  every pushout of a catalog inflation along a catalog morphism with
//       matching source is again an inflation, and every pullback of a catalog
//       deflation along a catalog morphism with matching target is again a
//       deflation.
// Everything is established by explicit construction plus re-certification;
// counterexamples land in report with laws "E1", "E2/inflations",
// "E2/deflations", "E3/pushout", "E3/pullback" and are results, not errors.
struct QuillenReport {
  ValidationReport report;
  int identities_checked = 0;
  int inflation_compositions = 0;
  int deflation_compositions = 0;
  int pushouts_checked = 0;
  int pullbacks_checked = 0;
  std::vector<std::string> log;
};

QuillenReport check_quillen_instance(const std::vector<Conflation>& conflations,
                                     const std::vector<ModuleMorphism>& morphisms,
                                     const ScanOptions& opts = {});

}  // namespace gammalab

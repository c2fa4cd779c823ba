#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gammalab/module.hpp"

namespace gammalab {

// Normal-form generator term: one generator letter inside a flattened word of
// ring letters, with no contractible all-ring window and no zero ring letter.
// letters[gpos] is a placeholder (-1); params[i] sits on the boundary between
// letters i and i+1.
struct FreeTerm {
  int gen = 0;
  int gpos = 0;
  Word letters{-1};
  Word params;
};

std::string render_free_term(const GammaSemiring& S, int slot, const FreeTerm& t,
                             const std::vector<std::string>& generators);

// Depth-bounded free module on a generator set.  Depth counts term height: at
// depth 1 the carrier holds formal sums of bare generators only, and each
// extra level admits one more wrapping context.  The carrier is the bounded
// formal-sum universe over normal-form terms, quotiented by the congruence the
// module laws force: additivity in each ring slot and each parameter
// coordinate, agreement of all evaluation paths of a wrapped term, and x+x = x
// exactly when both parent additions are idempotent.  The action wraps every
// term of a class in the acting context and renormalizes; cells whose result
// leaves the bounded universe stay undefined, and addition may be partial when
// the sum bound bites (the status is then BoundExceeded and undefined cells
// behave like any bounded carrier).
struct FreeModuleBounded {
  ModulePtr module;
  std::vector<std::string> generators;
  int slot = 2;
  int depth = 0;
  int sum_bound = 0;  // bound actually used; demoted when the universe cap bites
  std::vector<FreeTerm> primitives;
  TermUniverse universe;          // formal sums of primitives
  CongruenceRelation congruence;  // on the universe
  std::vector<Elem> insertion;    // generator -> carrier class of its bare term
  BuildStatus status = BuildStatus::Complete;
  QuotientStats stats;
  std::vector<std::string> log;
};

FreeModuleBounded free_module(const std::vector<std::string>& generators, SemiringPtr parent,
                              int slot, int depth, int sum_bound = 4,
                              std::uint64_t max_universe = std::uint64_t(1) << 12);

// The morphism extending phi: generators -> target, evaluating each term's
// context word at phi(gen) and summing member values.  target must be a plain
// module over the same parent at the same slot.  Members of one class must
// agree on their value; a disagreement would contradict the compatibility
// closure and throws std::logic_error.
ModuleMorphism extend_morphism(const FreeModuleBounded& F, const std::vector<Elem>& phi,
                               ModulePtr target);

// Certifies that restriction to generators is a bijection
//   {validated morphisms F -> target}  ->  Maps(generators, target)
// on the bounded carrier: every assignment extends to a validated morphism
// restricting correctly (surjectivity, law "extend/..."), and every carrier
// class is reachable from zero and the insertions under defined additions and
// actions, which pins any morphism to its generator values (injectivity, law
// "generation").  When |target|^|F| fits max_maps the hom-set is enumerated
// outright and its size compared (law "hom-count").
ValidationReport check_representability(const FreeModuleBounded& F, ModulePtr target,
                                        const ScanOptions& opts = {},
                                        std::uint64_t max_maps = std::uint64_t(1) << 20);

}  // namespace gammalab

#pragma once

#include <utility>

#include "gammalab/common.hpp"

namespace gammalab {

// Finite commutative monoid given by a dense addition table.  Entries may be
// -1 (undefined) when the carrier is a bounded term universe; complete()
// reports whether the table is total.  Laws on partial tables are checked in
// their weak form: every instance whose cells are all defined must hold.
struct FiniteCommMonoid {
  int size = 0;
  Elem zero = 0;
  std::vector<Elem> table;          // size*size, row-major; -1 = undefined
  std::vector<std::string> labels;  // optional display names, size or empty

  static FiniteCommMonoid from_rows(const std::vector<std::vector<Elem>>& rows, Elem zero);

  Elem add(Elem a, Elem b) const { return table[std::size_t(a) * std::size_t(size) + std::size_t(b)]; }
  bool defined(Elem a, Elem b) const { return add(a, b) >= 0; }
  bool complete() const;
  bool idempotent() const;  // a+a defined and equal to a for every a
  std::string label(Elem a) const;
};

FiniteCommMonoid boolean_or_monoid();
FiniteCommMonoid cyclic_monoid(int k);     // Z_k under addition mod k
FiniteCommMonoid max_chain_monoid(int k);  // {0..k-1} under max (idempotent)
FiniteCommMonoid product_monoid(const FiniteCommMonoid& a, const FiniteCommMonoid& b);

// Laws: table shape, entry range, commutativity (including definedness),
// zero identity, weak associativity.
ValidationReport validate_comm_monoid(const FiniteCommMonoid& m, const ScanOptions& opts = {});

// A partition of the carrier compatible with addition wherever it is
// defined: whenever a ~ c, b ~ d and both a+b and c+d are defined, the sums
// are related.  Classes are numbered by smallest member.
struct CongruenceRelation {
  int universe = 0;
  int classes = 0;
  std::vector<Elem> class_of;
  std::vector<Elem> representative;  // class -> smallest member
};

// Smallest congruence containing `pairs`.  Union-find with a cell-map
// saturation loop: defined cells with equal argument classes force their
// results together, repeated to a fixpoint.
CongruenceRelation congruence_closure(const FiniteCommMonoid& m,
                                      const std::vector<std::pair<Elem, Elem>>& pairs);

struct QuotientStats {
  std::uint64_t undefined_cells = 0;  // class pairs with no defined member sum
  std::uint64_t mixed_cells = 0;      // class pairs defined on some member pairs only
};

// Quotient table: a class-pair sum is defined iff some member pair has a
// defined sum.  Throws std::logic_error if two defined member sums land in
// different classes (impossible for a genuine congruence).
FiniteCommMonoid quotient_monoid(const FiniteCommMonoid& m, const CongruenceRelation& cong,
                                 QuotientStats* stats = nullptr);

enum class BuildStatus { Complete, BoundExceeded };

std::string to_string(BuildStatus s);

// A monoid presented as a bounded universe modulo generated relations.
// Status is Complete exactly when the universe was not truncated and the
// quotient addition came out total.
struct PresentedQuotient {
  FiniteCommMonoid quotient;
  CongruenceRelation congruence;
  BuildStatus status = BuildStatus::Complete;
  QuotientStats stats;
  std::vector<std::string> log;
};

PresentedQuotient presented_quotient(const FiniteCommMonoid& universe,
                                     const std::vector<std::pair<Elem, Elem>>& relations,
                                     bool universe_truncated = false);

// Free commutative additive terms over `generators`, truncated at total
// degree `bound` (multisets), or the full set of supports when `idempotent`
// (a+a = a keeps every sum square-free).  Element 0 is the empty term.
struct TermUniverse {
  FiniteCommMonoid monoid;
  int generators = 0;
  int bound = 0;       // ignored in idempotent mode
  bool idempotent = false;
  bool truncated = false;                  // true iff some sum overflowed the bound
  std::vector<std::vector<int>> degrees;   // element -> generator multiplicities
  Elem generator(int i) const;
};

TermUniverse bounded_term_universe(int generators, int bound, bool idempotent,
                                   std::uint64_t max_elements = std::uint64_t(1) << 20);

}  // namespace gammalab

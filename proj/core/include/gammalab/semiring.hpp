#pragma once

#include <optional>

#include "gammalab/monoid.hpp"

namespace gammalab {

// An n-ary multiplication over a pair of commutative monoids (T, Gamma),
// given as a dense total table: one T-result per n T-arguments and n-1
// Gamma-parameters.  Laws:
//   A1  additivity in every T-slot,
//   A2  absorption by the additive zero of T in every T-slot,
//   A3  every window placement of a nested application over a flattened
//       (2n-1)-argument word evaluates equally,
//   A4  (informational) symmetry is not required; a witness is searched for.
struct GammaSemiring {
  FiniteCommMonoid T;
  FiniteCommMonoid Gamma;
  int arity = 2;
  std::vector<Elem> mu_table;
  std::string provenance;  // how the instance was built, for reports

  int tsize() const { return T.size; }
  int gsize() const { return Gamma.size; }
  std::uint64_t table_cells() const {
    return ipow(std::uint64_t(T.size), arity) * ipow(std::uint64_t(Gamma.size), arity - 1);
  }
  std::uint64_t mu_index(const Word& args, const Word& params) const {
    return encode_mixed(args, T.size) * ipow(std::uint64_t(Gamma.size), arity - 1) +
           encode_mixed(params, Gamma.size);
  }
  Elem mu(const Word& args, const Word& params) const {
    return mu_table[std::size_t(mu_index(args, params))];
  }
};

// Inner application at `window_start`, its result substituted into the outer
// application.  The inner window consumes the parameters between its own
// arguments; the remaining parameters feed the outer application in order.
Elem two_level_eval(const GammaSemiring& S, const Word& w, const Word& g, int window_start);

ValidationReport validate_gamma_semiring(const GammaSemiring& S, const ScanOptions& opts = {});

// Lexicographically first (args, params, i<j) whose argument transposition
// changes the product; nullopt when the multiplication is fully symmetric.
std::optional<Witness> find_asymmetry_witness(const GammaSemiring& S);

struct SemiringHom {
  std::vector<Elem> t_map;
  std::vector<Elem> gamma_map;
};

ValidationReport validate_homomorphism(const GammaSemiring& from, const GammaSemiring& to,
                                       const SemiringHom& h, const ScanOptions& opts = {});

// --- named instances and realizations ---------------------------------------

// Ordinary commutative binary semiring used as matrix scalars.
struct BaseSemiring {
  FiniteCommMonoid add;
  std::vector<Elem> mul_table;
  Elem one = 0;
  std::string name;

  Elem mul(Elem a, Elem b) const { return mul_table[std::size_t(a) * std::size_t(add.size) + std::size_t(b)]; }
};

BaseSemiring base_boolean();
BaseSemiring base_z2();
// Carrier {0..k, infinity}: addition is min (zero = infinity, the last
// index), multiplication is saturating +, one is 0.
BaseSemiring base_trunc_tropical(int k);

ValidationReport validate_base_semiring(const BaseSemiring& b);

// T = dim x dim matrices over the base (row-major mixed-radix index),
// Gamma = base scalars.  The product interleaves scalars as gamma*I factors:
// leading placement by default, between-factor placement with gamma_inner.
GammaSemiring build_matrix_realization(const BaseSemiring& base, int dim, int arity,
                                       bool gamma_inner = false,
                                       std::uint64_t max_carrier = 16);

// T = all additive zero-preserving self-maps of V (lex-indexed by value
// table), Gamma = the pointwise-addition closure of the given maps plus the
// zero map.  The product is alternating composition.
GammaSemiring build_endomorphism_realization(const FiniteCommMonoid& V,
                                             const std::vector<std::vector<Elem>>& gamma_maps,
                                             std::uint64_t max_maps = std::uint64_t(1) << 20,
                                             std::uint64_t max_carrier = 16);

// OR on {0,1} for both carriers, arity 3, product = conjunction of all five
// inputs.  Coincides cell-for-cell with the 1x1 boolean matrix realization.
GammaSemiring b3_semiring();
// Same T and product family, but Gamma shrunk to its zero alone.
GammaSemiring b3_trivial_gamma_semiring();

// --- ideals ------------------------------------------------------------------

struct GammaIdeal {
  std::vector<bool> member;

  bool contains(Elem a) const { return member[std::size_t(a)]; }
  std::vector<Elem> elements() const;
};

// Contains zero, closed under addition, and absorbing: a product lands in the
// ideal whenever any T-argument does.
ValidationReport check_gamma_ideal(const GammaSemiring& S, const GammaIdeal& I);
bool is_gamma_ideal(const GammaSemiring& S, const GammaIdeal& I);

std::vector<GammaIdeal> enumerate_ideals(const GammaSemiring& S, std::uint64_t max_carrier = 16);

// Proper ideals P with: product in P implies some T-argument in P.
std::vector<GammaIdeal> prime_spectrum(const GammaSemiring& S, std::uint64_t max_carrier = 16);

// T modulo the smallest congruence collapsing the ideal to zero and
// compatible with addition and every product slot; Gamma is untouched.
struct QuotientSemiring {
  GammaSemiring semiring;
  CongruenceRelation congruence;  // over the original T
};

QuotientSemiring quotient_semiring(const GammaSemiring& S, const GammaIdeal& I);

}  // namespace gammalab

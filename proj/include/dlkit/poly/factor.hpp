#pragma once

#include <optional>
#include <vector>

#include "dlkit/ff/rng.hpp"
#include "dlkit/poly/polynomial.hpp"

namespace dlkit::poly {

struct Factor {
  Polynomial poly;  // monic irreducible
  unsigned exponent;
};

struct Factorization {
  FieldSpec field;
  u64 unit = 1;
  std::vector<Factor> factors;  // sorted by (degree, coefficients)

  Polynomial expand() const;
  int max_degree() const;  // 0 for an empty factorization
};

// Squarefree decomposition: pairs (squarefree monic part, multiplicity).
std::vector<Factor> squarefree_decomposition(const Polynomial& f);

// Distinct-degree split of a squarefree monic polynomial: pairs (product of
// all irreducible factors of degree d, d). Stops after degree `max_degree`
// and reports the unsplit remainder, if any, in `rest`.
struct DistinctDegree {
  std::vector<std::pair<Polynomial, unsigned>> parts;
  Polynomial rest;
};
DistinctDegree distinct_degree(const Polynomial& f, unsigned max_degree);

// Splits a product of distinct irreducibles of degree d.
std::vector<Polynomial> equal_degree(const Polynomial& f, unsigned d, ff::Rng& rng);

// Throws ZeroPolynomial for f == 0.
Factorization factor(const Polynomial& f, ff::Rng& rng);

bool is_irreducible(const Polynomial& f);

// All monic irreducibles of degree <= max_degree, sorted by (degree, lex).
// Throws BoundTooLarge when the number of candidates exceeds `cap`.
std::vector<Polynomial> enumerate_irreducibles(const FieldSpec& field, unsigned max_degree,
                                               u64 cap = 50'000'000);

// Factorization if every irreducible factor has degree <= bound; the
// distinct-degree ladder aborts as soon as a larger factor is certain.
std::optional<Factorization> smooth_part(const Polynomial& f, unsigned bound, ff::Rng& rng);

// Cheaper check without splitting into irreducibles.
bool is_smooth(const Polynomial& f, unsigned bound);

// Distinct roots in the base field.
std::vector<u64> roots(const Polynomial& f, ff::Rng& rng);

}  // namespace dlkit::poly

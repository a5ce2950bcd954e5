#pragma once

#include <optional>
#include <vector>

#include "dlkit/ff/residue.hpp"

namespace dlkit::linalg {

using ff::BigInt;
using IntMatrix = std::vector<std::vector<BigInt>>;

IntMatrix identity_matrix(std::size_t n);
IntMatrix multiply(const IntMatrix& a, const IntMatrix& b);

// Fraction-free Gaussian elimination; square input.
BigInt determinant(IntMatrix m);

// Row-style Hermite form: U * M = H with U unimodular, H in row echelon form,
// positive pivots and entries above each pivot reduced into [0, pivot).
struct HermiteResult {
  IntMatrix H;
  IntMatrix U;
  std::size_t rank = 0;
};
HermiteResult hermite_normal_form(const IntMatrix& m, std::size_t cap = 2000);

// True iff v reduces to zero against the Hermite form (v is in the row lattice).
bool in_row_lattice(const IntMatrix& H, std::vector<BigInt> v);

// Smith form: U * M * V = diag(d_1, ..., d_k) with d_i | d_{i+1}, k = min(rows, cols).
// When `modulus` is given (a multiple of the index of the row lattice in Z^cols),
// work is done modulo it and each d_i is replaced by gcd(d_i, modulus); U and V
// are then not tracked.
struct SmithResult {
  std::vector<BigInt> invariants;
  std::optional<IntMatrix> U, V;
};
SmithResult smith_normal_form(const IntMatrix& m, const BigInt* modulus = nullptr, bool track = false,
                              std::size_t cap = 2000);

}  // namespace dlkit::linalg

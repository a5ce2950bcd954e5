#pragma once

#include <utility>
#include <vector>

#include "dlkit/linalg/sparse.hpp"

namespace dlkit::linalg {

// Unique solution of an overdetermined system A y = b mod a prime ell.
// Structured elimination first; the remaining core is solved densely when
// small, otherwise by Wiedemann on a random square combination of its rows.
// Every original row is re-checked. Throws RankDeficient when some unknown is
// not determined.
Vec solve_full_rank(const SparseMatrix& A, const Vec& b, u64 ell, u64 seed = 1);

// Same over Z/N for composite N < 2^63 given its factorization: per prime
// power by solving mod ell and Hensel lifting, then CRT. A holds plain
// integer entries (modulus 0).
Vec solve_mod(const SparseMatrix& A, const std::vector<i64>& b, u64 N,
              const std::vector<std::pair<u64, unsigned>>& factorization, u64 seed = 1);

}  // namespace dlkit::linalg

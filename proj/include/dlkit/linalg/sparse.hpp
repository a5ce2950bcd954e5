#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "dlkit/error.hpp"

namespace dlkit::linalg {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using Vec = std::vector<u64>;

// Row-major sparse matrix. With a modulus set, values live in [0, modulus);
// with modulus 0 they are plain signed integers (relation exponents).
class SparseMatrix {
 public:
  using Entry = std::pair<std::uint32_t, i64>;
  using Row = std::vector<Entry>;

  SparseMatrix() = default;
  SparseMatrix(std::size_t nrows, std::size_t ncols, u64 modulus = 0)
      : ncols_(ncols), modulus_(modulus), rows_(nrows) {}

  std::size_t nrows() const { return rows_.size(); }
  std::size_t ncols() const { return ncols_; }
  u64 modulus() const { return modulus_; }
  const Row& row(std::size_t i) const { return rows_[i]; }
  const std::vector<Row>& rows() const { return rows_; }
  std::size_t nnz() const;

  // Adds v to entry (i, j).
  void add(std::size_t i, std::size_t j, i64 v);
  void add_row(Row r);  // appends a row (normalized)
  void set_row(std::size_t i, Row r);
  void resize(std::size_t nrows, std::size_t ncols);

  // Same pattern reduced modulo m.
  SparseMatrix reduced(u64 m) const;
  SparseMatrix transpose() const;

  // y = A x mod modulus (requires a modulus).
  Vec multiply(const Vec& x) const;
  // y = A^T x mod modulus.
  Vec multiply_transpose(const Vec& x) const;

  std::vector<Vec> to_dense() const;

  // "nrows ncols modulus" then "row col value" lines.
  void write(std::ostream& os) const;
  static SparseMatrix read(std::istream& is);

  friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;

 private:
  void normalize_row(Row& r) const;
  i64 reduce(i64 v) const;

  std::size_t ncols_ = 0;
  u64 modulus_ = 0;
  std::vector<Row> rows_;
};

// Modular helpers for prime moduli below 2^63.
u64 add_mod(u64 a, u64 b, u64 m);
u64 sub_mod(u64 a, u64 b, u64 m);
u64 mul_mod(u64 a, u64 b, u64 m);
u64 inv_mod(u64 a, u64 m);  // throws DivisionByZero
u64 to_mod(i64 v, u64 m);

// Raised when the system matrix is singular; carries a nonzero kernel vector
// when one was found (empty otherwise).
class SingularSystemError : public Error {
 public:
  explicit SingularSystemError(Vec kernel)
      : Error(ErrorCode::SingularSystem, "matrix is singular"), kernel_(std::move(kernel)) {}
  const Vec& kernel() const { return kernel_; }

 private:
  Vec kernel_;
};

// Dense Gaussian elimination mod a prime, for oracles and small systems.
struct DenseSolution {
  Vec x;                  // one solution (free variables zero)
  std::vector<Vec> kernel;  // basis of the right kernel
  std::size_t rank = 0;
};
std::optional<DenseSolution> dense_solve(std::vector<Vec> A, Vec b, u64 ell);
std::size_t dense_rank(std::vector<Vec> A, u64 ell);

// Minimal polynomial of a linearly recurrent sequence over F_ell; returns
// coefficients c_0..c_L with c_L = 1 and sum c_i s_{j+i} = 0.
Vec berlekamp_massey(const Vec& s, u64 ell);

struct WiedemannParams {
  u64 seed = 1;
  unsigned max_attempts = 8;
};

// Solves A y = b mod ell for square A; the residual is checked before
// returning. Throws SingularSystemError (with a kernel vector when found).
Vec wiedemann_solve(const SparseMatrix& A, const Vec& b, u64 ell, const WiedemannParams& params = {});

// Nonzero vector w with A w = 0 mod ell for a singular square A, or nullopt.
std::optional<Vec> wiedemann_kernel(const SparseMatrix& A, u64 ell, const WiedemannParams& params = {});

// Structured Gaussian elimination. Pivots on columns of weight one and two,
// drops empty columns and, when rows exceed columns by more than `excess`,
// the heaviest surplus rows. extend() maps a solution of the reduced system
// back to the original columns.
struct GaussParams {
  std::size_t excess = 20;
  std::size_t max_pivot_weight = 2;
};
class GaussReduction {
 public:
  SparseMatrix reduced;
  Vec rhs;
  std::vector<std::uint32_t> kept_cols;  // reduced column -> original column

  Vec extend(const Vec& y_reduced) const;

  struct Step {
    std::uint32_t pivot_col;
    SparseMatrix::Row row;  // original column indices
    u64 rhs;
  };
  std::vector<Step> log;
  std::size_t original_cols = 0;
  u64 ell = 0;
};
GaussReduction structured_gauss(const SparseMatrix& A, const Vec& b, const GaussParams& params = {});

}  // namespace dlkit::linalg

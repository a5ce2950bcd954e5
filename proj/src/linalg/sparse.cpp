#include "dlkit/linalg/sparse.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "dlkit/ff/numtheory.hpp"
#include "dlkit/ff/rng.hpp"

namespace dlkit::linalg {

u64 add_mod(u64 a, u64 b, u64 m) {
  u64 s = a + b;
  return (s >= m || s < a) ? s - m : s;
}
u64 sub_mod(u64 a, u64 b, u64 m) { return a >= b ? a - b : a + (m - b); }
u64 mul_mod(u64 a, u64 b, u64 m) { return ff::mulmod(a, b, m); }
u64 inv_mod(u64 a, u64 m) {
  auto r = ff::invmod(a % m, m);
  if (!r) throw Error(ErrorCode::DivisionByZero, "no inverse modulo " + std::to_string(m));
  return *r;
}
u64 to_mod(i64 v, u64 m) {
  if (v >= 0) return static_cast<u64>(v) % m;
  u64 r = static_cast<u64>(-(v + 1)) % m;  // avoids overflow at INT64_MIN
  return sub_mod(m - 1, r, m);
}

std::size_t SparseMatrix::nnz() const {
  std::size_t n = 0;
  for (const auto& r : rows_) n += r.size();
  return n;
}

i64 SparseMatrix::reduce(i64 v) const {
  return modulus_ ? static_cast<i64>(to_mod(v, modulus_)) : v;
}

void SparseMatrix::normalize_row(Row& r) const {
  for (auto& [c, v] : r) {
    if (c >= ncols_) throw Error(ErrorCode::DomainError, "column index out of range");
    v = reduce(v);
  }
  std::sort(r.begin(), r.end(), [](const Entry& a, const Entry& b) { return a.first < b.first; });
  Row out;
  for (const auto& e : r) {
    if (!out.empty() && out.back().first == e.first) {
      out.back().second = modulus_ ? static_cast<i64>(add_mod(out.back().second, e.second, modulus_))
                                   : out.back().second + e.second;
    } else {
      out.push_back(e);
    }
  }
  std::erase_if(out, [](const Entry& e) { return e.second == 0; });
  r = std::move(out);
}

void SparseMatrix::add(std::size_t i, std::size_t j, i64 v) {
  if (i >= rows_.size()) throw Error(ErrorCode::DomainError, "row index out of range");
  rows_[i].emplace_back(static_cast<std::uint32_t>(j), v);
  normalize_row(rows_[i]);
}

void SparseMatrix::add_row(Row r) {
  normalize_row(r);
  rows_.push_back(std::move(r));
}

void SparseMatrix::set_row(std::size_t i, Row r) {
  normalize_row(r);
  rows_.at(i) = std::move(r);
}

void SparseMatrix::resize(std::size_t nrows, std::size_t ncols) {
  if (ncols < ncols_) {
    for (auto& r : rows_) std::erase_if(r, [&](const Entry& e) { return e.first >= ncols; });
  }
  ncols_ = ncols;
  rows_.resize(nrows);
}

SparseMatrix SparseMatrix::reduced(u64 m) const {
  SparseMatrix out(0, ncols_, m);
  for (const auto& r : rows_) out.add_row(r);
  return out;
}

SparseMatrix SparseMatrix::transpose() const {
  SparseMatrix t(ncols_, rows_.size(), modulus_);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    for (const auto& [c, v] : rows_[i]) t.rows_[c].emplace_back(static_cast<std::uint32_t>(i), v);
  }
  return t;
}

Vec SparseMatrix::multiply(const Vec& x) const {
  if (!modulus_) throw Error(ErrorCode::DomainError, "multiply needs a modulus");
  Vec y(rows_.size(), 0);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    u64 s = 0;
    for (const auto& [c, v] : rows_[i]) s = add_mod(s, mul_mod(static_cast<u64>(v), x[c], modulus_), modulus_);
    y[i] = s;
  }
  return y;
}

Vec SparseMatrix::multiply_transpose(const Vec& x) const {
  if (!modulus_) throw Error(ErrorCode::DomainError, "multiply needs a modulus");
  Vec y(ncols_, 0);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (x[i] == 0) continue;
    for (const auto& [c, v] : rows_[i]) y[c] = add_mod(y[c], mul_mod(static_cast<u64>(v), x[i], modulus_), modulus_);
  }
  return y;
}

std::vector<Vec> SparseMatrix::to_dense() const {
  std::vector<Vec> d(rows_.size(), Vec(ncols_, 0));
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    for (const auto& [c, v] : rows_[i]) d[i][c] = modulus_ ? static_cast<u64>(v) : static_cast<u64>(v);
  }
  return d;
}

void SparseMatrix::write(std::ostream& os) const {
  os << rows_.size() << ' ' << ncols_ << ' ' << modulus_ << '\n';
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    for (const auto& [c, v] : rows_[i]) os << i << ' ' << c << ' ' << v << '\n';
  }
}

SparseMatrix SparseMatrix::read(std::istream& is) {
  std::string line;
  bool have_header = false;
  SparseMatrix m;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    if (!have_header) {
      std::size_t r, c;
      u64 mod;
      if (!(ls >> r)) continue;
      if (!(ls >> c >> mod)) throw Error(ErrorCode::ParseError, "bad header on line " + std::to_string(lineno));
      m = SparseMatrix(r, c, mod);
      have_header = true;
      continue;
    }
    std::size_t r, c;
    i64 v;
    if (!(ls >> r)) continue;
    if (!(ls >> c >> v) || r >= m.nrows() || c >= m.ncols()) {
      throw Error(ErrorCode::ParseError, "bad entry on line " + std::to_string(lineno));
    }
    m.rows_[r].emplace_back(static_cast<std::uint32_t>(c), v);
  }
  if (!have_header) throw Error(ErrorCode::ParseError, "missing header");
  for (auto& r : m.rows_) m.normalize_row(r);
  return m;
}

std::optional<DenseSolution> dense_solve(std::vector<Vec> A, Vec b, u64 ell) {
  const std::size_t n = A.size(), m = n ? A[0].size() : 0;
  for (auto& row : A) for (auto& v : row) v %= ell;
  for (auto& v : b) v %= ell;
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m && r < n; ++c) {
    std::size_t p = r;
    while (p < n && A[p][c] == 0) ++p;
    if (p == n) continue;
    std::swap(A[p], A[r]);
    std::swap(b[p], b[r]);
    const u64 inv = inv_mod(A[r][c], ell);
    for (std::size_t k = c; k < m; ++k) A[r][k] = mul_mod(A[r][k], inv, ell);
    b[r] = mul_mod(b[r], inv, ell);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == r || A[i][c] == 0) continue;
      const u64 f = A[i][c];
      for (std::size_t k = c; k < m; ++k) A[i][k] = sub_mod(A[i][k], mul_mod(f, A[r][k], ell), ell);
      b[i] = sub_mod(b[i], mul_mod(f, b[r], ell), ell);
    }
    pivots.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < n; ++i) {
    if (b[i] != 0) return std::nullopt;
  }
  DenseSolution sol;
  sol.rank = r;
  sol.x.assign(m, 0);
  for (std::size_t i = 0; i < r; ++i) sol.x[pivots[i]] = b[i];
  std::vector<bool> is_pivot(m, false);
  for (auto c : pivots) is_pivot[c] = true;
  for (std::size_t f = 0; f < m; ++f) {
    if (is_pivot[f]) continue;
    Vec k(m, 0);
    k[f] = 1;
    for (std::size_t i = 0; i < r; ++i) k[pivots[i]] = sub_mod(0, A[i][f], ell);
    sol.kernel.push_back(std::move(k));
  }
  return sol;
}

std::size_t dense_rank(std::vector<Vec> A, u64 ell) {
  Vec b(A.size(), 0);
  return dense_solve(std::move(A), std::move(b), ell)->rank;
}

Vec berlekamp_massey(const Vec& s, u64 ell) {
  // connection polynomial C(x) = 1 + c_1 x + ... + c_L x^L
  Vec C{1}, Bp{1};
  std::size_t L = 0, shift = 1;
  u64 bd = 1;
  for (std::size_t n = 0; n < s.size(); ++n) {
    u64 d = s[n];
    for (std::size_t i = 1; i <= L && i < C.size(); ++i) d = add_mod(d, mul_mod(C[i], s[n - i], ell), ell);
    if (d == 0) {
      ++shift;
      continue;
    }
    const u64 coef = mul_mod(d, inv_mod(bd, ell), ell);
    Vec T = C;
    if (C.size() < Bp.size() + shift) C.resize(Bp.size() + shift, 0);
    for (std::size_t i = 0; i < Bp.size(); ++i) C[i + shift] = sub_mod(C[i + shift], mul_mod(coef, Bp[i], ell), ell);
    if (2 * L <= n) {
      L = n + 1 - L;
      Bp = std::move(T);
      bd = d;
      shift = 1;
    } else {
      ++shift;
    }
  }
  C.resize(L + 1, 0);
  // reverse: m(z) = z^L C(1/z)
  Vec m(L + 1);
  for (std::size_t i = 0; i <= L; ++i) m[L - i] = C[i];
  return m;
}

namespace {

bool is_zero(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](u64 x) { return x == 0; });
}

// Krylov projection sequence u . A^i r for i < len.
Vec krylov(const SparseMatrix& A, const Vec& r, const Vec& u, std::size_t len, u64 ell) {
  Vec s(len);
  Vec w = r;
  for (std::size_t i = 0; i < len; ++i) {
    u64 dot = 0;
    for (std::size_t k = 0; k < w.size(); ++k) dot = add_mod(dot, mul_mod(u[k], w[k], ell), ell);
    s[i] = dot;
    if (i + 1 < len) w = A.multiply(w);
  }
  return s;
}

// sum_{i >= from} c_i A^{i - from} r by Horner.
Vec poly_apply(const SparseMatrix& A, const Vec& c, std::size_t from, const Vec& r, u64 ell) {
  Vec z(r.size(), 0);
  for (std::size_t i = c.size(); i-- > from;) {
    z = A.multiply(z);
    for (std::size_t k = 0; k < z.size(); ++k) z[k] = add_mod(z[k], mul_mod(c[i], r[k], ell), ell);
  }
  return z;
}

Vec random_vec(std::size_t n, u64 ell, ff::Rng& rng) {
  Vec v(n);
  for (auto& x : v) x = rng.below(ell);
  return v;
}

// Given min poly m = z^k g of the sequence from x, try to find a kernel vector.
std::optional<Vec> kernel_from(const SparseMatrix& A, const Vec& m, const Vec& x, u64 ell) {
  std::size_t k = 0;
  while (k < m.size() && m[k] == 0) ++k;
  if (k == 0 || k == m.size()) return std::nullopt;
  Vec w = poly_apply(A, m, k, x, ell);
  for (std::size_t j = 0; j <= k && !is_zero(w); ++j) {
    Vec Aw = A.multiply(w);
    if (is_zero(Aw)) return w;
    w = std::move(Aw);
  }
  return std::nullopt;
}

SparseMatrix with_modulus(const SparseMatrix& A, u64 ell) {
  return A.modulus() == ell ? A : A.reduced(ell);
}

}  // namespace

Vec wiedemann_solve(const SparseMatrix& A_in, const Vec& b_in, u64 ell, const WiedemannParams& params) {
  if (A_in.nrows() != A_in.ncols()) throw Error(ErrorCode::DomainError, "Wiedemann needs a square matrix");
  if (b_in.size() != A_in.nrows()) throw Error(ErrorCode::DomainError, "right-hand side has wrong length");
  const SparseMatrix A = with_modulus(A_in, ell);
  const std::size_t n = A.ncols();
  Vec b = b_in;
  for (auto& v : b) v %= ell;
  Vec y(n, 0);
  if (n == 0 || is_zero(b)) return y;
  ff::Rng rng(params.seed);
  Vec r = b;
  std::optional<Vec> kernel;
  for (unsigned attempt = 0; attempt < params.max_attempts; ++attempt) {
    Vec u = random_vec(n, ell, rng);
    Vec m = berlekamp_massey(krylov(A, r, u, 2 * n, ell), ell);
    if (m.size() <= 1) continue;
    if (m[0] == 0) {
      if (!kernel) kernel = kernel_from(A, m, r, ell);
      continue;
    }
    Vec z = poly_apply(A, m, 1, r, ell);
    const u64 scale = sub_mod(0, inv_mod(m[0], ell), ell);
    for (std::size_t k = 0; k < n; ++k) y[k] = add_mod(y[k], mul_mod(z[k], scale, ell), ell);
    Vec Ay = A.multiply(y);
    for (std::size_t k = 0; k < n; ++k) r[k] = sub_mod(b[k], Ay[k], ell);
    if (is_zero(r)) return y;
  }
  if (!kernel) kernel = wiedemann_kernel(A, ell, {params.seed ^ 0x5bd1e995, params.max_attempts});
  throw SingularSystemError(kernel.value_or(Vec{}));
}

std::optional<Vec> wiedemann_kernel(const SparseMatrix& A_in, u64 ell, const WiedemannParams& params) {
  if (A_in.nrows() != A_in.ncols()) throw Error(ErrorCode::DomainError, "Wiedemann needs a square matrix");
  const SparseMatrix A = with_modulus(A_in, ell);
  const std::size_t n = A.ncols();
  if (n == 0) return std::nullopt;
  ff::Rng rng(params.seed);
  for (unsigned attempt = 0; attempt < params.max_attempts; ++attempt) {
    Vec x = random_vec(n, ell, rng);
    Vec u = random_vec(n, ell, rng);
    Vec m = berlekamp_massey(krylov(A, x, u, 2 * n, ell), ell);
    if (auto k = kernel_from(A, m, x, ell)) return k;
  }
  return std::nullopt;
}

Vec GaussReduction::extend(const Vec& y_reduced) const {
  Vec y(original_cols, 0);
  for (std::size_t i = 0; i < kept_cols.size(); ++i) y[kept_cols[i]] = y_reduced.at(i) % ell;
  for (auto it = log.rbegin(); it != log.rend(); ++it) {
    u64 acc = it->rhs;
    u64 a = 0;
    for (const auto& [c, v] : it->row) {
      if (c == it->pivot_col) {
        a = static_cast<u64>(v);
      } else {
        acc = sub_mod(acc, mul_mod(static_cast<u64>(v), y[c], ell), ell);
      }
    }
    y[it->pivot_col] = mul_mod(acc, inv_mod(a, ell), ell);
  }
  return y;
}

GaussReduction structured_gauss(const SparseMatrix& A_in, const Vec& b_in, const GaussParams& params) {
  if (!A_in.modulus()) throw Error(ErrorCode::DomainError, "structured elimination needs a modulus");
  const u64 ell = A_in.modulus();
  const std::size_t nr = A_in.nrows(), nc = A_in.ncols();
  GaussReduction out;
  out.original_cols = nc;
  out.ell = ell;
  std::vector<SparseMatrix::Row> rows = A_in.rows();
  Vec rhs(nr, 0);
  for (std::size_t i = 0; i < nr && i < b_in.size(); ++i) rhs[i] = b_in[i] % ell;
  std::vector<bool> row_alive(nr, true), col_alive(nc, true);

  auto coeff = [](const SparseMatrix::Row& r, std::uint32_t c) -> u64 {
    auto it = std::lower_bound(r.begin(), r.end(), c, [](const auto& e, std::uint32_t k) { return e.first < k; });
    return (it != r.end() && it->first == c) ? static_cast<u64>(it->second) : 0;
  };
  // target -= f * src
  auto axpy = [&](SparseMatrix::Row& target, const SparseMatrix::Row& src, u64 f) {
    SparseMatrix::Row res;
    std::size_t i = 0, j = 0;
    while (i < target.size() || j < src.size()) {
      if (j == src.size() || (i < target.size() && target[i].first < src[j].first)) {
        res.push_back(target[i++]);
      } else if (i == target.size() || src[j].first < target[i].first) {
        res.emplace_back(src[j].first, static_cast<i64>(sub_mod(0, mul_mod(f, src[j].second, ell), ell)));
        ++j;
      } else {
        u64 v = sub_mod(target[i].second, mul_mod(f, src[j].second, ell), ell);
        if (v) res.emplace_back(target[i].first, static_cast<i64>(v));
        ++i;
        ++j;
      }
    }
    target = std::move(res);
  };

  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<std::vector<std::uint32_t>> occ(nc);
    for (std::size_t i = 0; i < nr; ++i) {
      if (!row_alive[i]) continue;
      for (const auto& [c, v] : rows[i]) occ[c].push_back(static_cast<std::uint32_t>(i));
    }
    std::vector<bool> touched(nr, false), dirty(nc, false);
    for (std::uint32_t c = 0; c < nc; ++c) {
      if (!col_alive[c] || dirty[c]) continue;
      const auto& o = occ[c];
      if (o.empty()) {
        col_alive[c] = false;
        changed = true;
        continue;
      }
      if (o.size() > params.max_pivot_weight) continue;
      if (std::any_of(o.begin(), o.end(), [&](std::uint32_t i) { return touched[i]; })) continue;
      // pivot row: the lightest occurrence
      std::uint32_t p = o[0];
      for (auto i : o) if (rows[i].size() < rows[p].size()) p = i;
      for (const auto& e : rows[p]) dirty[e.first] = true;
      const u64 a = coeff(rows[p], c);
      const u64 ainv = inv_mod(a, ell);
      for (auto i : o) {
        touched[i] = true;
        if (i == p) continue;
        const u64 f = mul_mod(coeff(rows[i], c), ainv, ell);
        axpy(rows[i], rows[p], f);
        rhs[i] = sub_mod(rhs[i], mul_mod(f, rhs[p], ell), ell);
      }
      out.log.push_back({c, rows[p], rhs[p]});
      row_alive[p] = false;
      col_alive[c] = false;
      changed = true;
    }
    for (std::size_t i = 0; i < nr; ++i) {
      if (row_alive[i] && rows[i].empty() && rhs[i] == 0) row_alive[i] = false;
    }
  }

  std::vector<std::uint32_t> live_rows;
  for (std::size_t i = 0; i < nr; ++i) if (row_alive[i]) live_rows.push_back(static_cast<std::uint32_t>(i));
  std::vector<std::int64_t> remap(nc, -1);
  for (std::uint32_t c = 0; c < nc; ++c) {
    if (col_alive[c]) {
      remap[c] = static_cast<std::int64_t>(out.kept_cols.size());
      out.kept_cols.push_back(c);
    }
  }
  if (live_rows.size() > out.kept_cols.size() + params.excess) {
    std::stable_sort(live_rows.begin(), live_rows.end(),
                     [&](std::uint32_t x, std::uint32_t y) { return rows[x].size() < rows[y].size(); });
    live_rows.resize(out.kept_cols.size() + params.excess);
    std::sort(live_rows.begin(), live_rows.end());
  }
  out.reduced = SparseMatrix(0, out.kept_cols.size(), ell);
  for (auto i : live_rows) {
    SparseMatrix::Row r;
    for (const auto& [c, v] : rows[i]) r.emplace_back(static_cast<std::uint32_t>(remap[c]), v);
    out.reduced.add_row(std::move(r));
    out.rhs.push_back(rhs[i]);
  }
  return out;
}

}  // namespace dlkit::linalg

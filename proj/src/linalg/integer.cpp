#include "dlkit/linalg/integer.hpp"

#include <algorithm>
#include <utility>

#include "dlkit/error.hpp"

namespace dlkit::linalg {

namespace {

BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

BigInt abs_big(const BigInt& a) { return a < 0 ? BigInt(-a) : a; }

// Symmetric residue in (-m/2, m/2].
BigInt sym_mod(const BigInt& a, const BigInt& m) {
  BigInt r = ff::mod_floor(a, m);
  if (2 * r > m) r -= m;
  return r;
}

void check_cap(const IntMatrix& m, std::size_t cap) {
  if (m.size() > cap || (!m.empty() && m[0].size() > cap)) {
    throw Error(ErrorCode::CapExceeded, "matrix dimensions above cap");
  }
}

}  // namespace

IntMatrix identity_matrix(std::size_t n) {
  IntMatrix I(n, std::vector<BigInt>(n, 0));
  for (std::size_t i = 0; i < n; ++i) I[i][i] = 1;
  return I;
}

IntMatrix multiply(const IntMatrix& a, const IntMatrix& b) {
  const std::size_t n = a.size(), k = b.size(), m = k ? b[0].size() : 0;
  IntMatrix c(n, std::vector<BigInt>(m, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t t = 0; t < k; ++t) {
      if (a[i][t] == 0) continue;
      for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][t] * b[t][j];
    }
  }
  return c;
}

BigInt determinant(IntMatrix m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  for (const auto& r : m) {
    if (r.size() != n) throw Error(ErrorCode::DomainError, "determinant of a non-square matrix");
  }
  BigInt prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && m[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(m[p], m[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
      }
      m[i][k] = 0;
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

HermiteResult hermite_normal_form(const IntMatrix& m, std::size_t cap) {
  check_cap(m, cap);
  const std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
  HermiteResult res{m, identity_matrix(rows), 0};
  auto& H = res.H;
  auto& U = res.U;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    // gcd-combine every lower row into row r
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (H[i][c] == 0) continue;
      if (H[r][c] == 0) {
        std::swap(H[r], H[i]);
        std::swap(U[r], U[i]);
        continue;
      }
      const BigInt a = H[r][c], b = H[i][c];
      // extended gcd
      BigInt old_r = a, rr = b, old_s = 1, s = 0, old_t = 0, t = 1;
      while (rr != 0) {
        BigInt q = old_r / rr;
        BigInt tmp = old_r - q * rr;
        old_r = rr;
        rr = tmp;
        tmp = old_s - q * s;
        old_s = s;
        s = tmp;
        tmp = old_t - q * t;
        old_t = t;
        t = tmp;
      }
      const BigInt g = old_r, x = old_s, y = old_t;  // x a + y b = g
      const BigInt ag = a / g, bg = b / g;
      for (std::size_t k = 0; k < cols; ++k) {
        BigInt hr = H[r][k], hi = H[i][k];
        H[r][k] = x * hr + y * hi;
        H[i][k] = -bg * hr + ag * hi;
      }
      for (std::size_t k = 0; k < rows; ++k) {
        BigInt ur = U[r][k], ui = U[i][k];
        U[r][k] = x * ur + y * ui;
        U[i][k] = -bg * ur + ag * ui;
      }
    }
    if (H[r][c] == 0) continue;
    if (H[r][c] < 0) {
      for (auto& v : H[r]) v = -v;
      for (auto& v : U[r]) v = -v;
    }
    for (std::size_t i = 0; i < r; ++i) {
      BigInt q = floor_div(H[i][c], H[r][c]);
      if (q == 0) continue;
      for (std::size_t k = 0; k < cols; ++k) H[i][k] -= q * H[r][k];
      for (std::size_t k = 0; k < rows; ++k) U[i][k] -= q * U[r][k];
    }
    ++r;
  }
  res.rank = r;
  return res;
}

bool in_row_lattice(const IntMatrix& H, std::vector<BigInt> v) {
  for (const auto& row : H) {
    std::size_t c = 0;
    while (c < row.size() && row[c] == 0) ++c;
    if (c == row.size()) break;
    for (std::size_t k = 0; k < c; ++k) {
      if (v[k] != 0) return false;
    }
    if (v[c] % row[c] != 0) return false;
    BigInt q = v[c] / row[c];
    for (std::size_t k = c; k < row.size(); ++k) v[k] -= q * row[k];
  }
  for (const auto& x : v) {
    if (x != 0) return false;
  }
  return true;
}

SmithResult smith_normal_form(const IntMatrix& m_in, const BigInt* modulus, bool track, std::size_t cap) {
  check_cap(m_in, cap);
  IntMatrix A = m_in;
  const std::size_t rows = A.size(), cols = rows ? A[0].size() : 0;
  const std::size_t k = std::min(rows, cols);
  const bool use_mod = modulus && *modulus > 0;
  if (use_mod) track = false;
  IntMatrix U, V;
  if (track) {
    U = identity_matrix(rows);
    V = identity_matrix(cols);
  }
  auto red = [&](BigInt& x) {
    if (use_mod) x = sym_mod(x, *modulus);
  };
  for (auto& r : A) for (auto& x : r) red(x);

  auto row_op = [&](std::size_t dst, std::size_t src, const BigInt& q) {  // row dst -= q row src
    for (std::size_t j = 0; j < cols; ++j) {
      A[dst][j] -= q * A[src][j];
      red(A[dst][j]);
    }
    if (track) for (std::size_t j = 0; j < rows; ++j) U[dst][j] -= q * U[src][j];
  };
  auto col_op = [&](std::size_t dst, std::size_t src, const BigInt& q) {  // col dst -= q col src
    for (std::size_t i = 0; i < rows; ++i) {
      A[i][dst] -= q * A[i][src];
      red(A[i][dst]);
    }
    if (track) for (std::size_t i = 0; i < cols; ++i) V[i][dst] -= q * V[i][src];
  };
  auto swap_rows = [&](std::size_t a, std::size_t b) {
    std::swap(A[a], A[b]);
    if (track) std::swap(U[a], U[b]);
  };
  auto swap_cols = [&](std::size_t a, std::size_t b) {
    for (auto& r : A) std::swap(r[a], r[b]);
    if (track) for (auto& r : V) std::swap(r[a], r[b]);
  };

  for (std::size_t t = 0; t < k; ++t) {
    for (;;) {
      // smallest nonzero entry of the trailing block goes to (t, t)
      std::size_t pi = rows, pj = cols;
      BigInt best = 0;
      for (std::size_t i = t; i < rows; ++i) {
        for (std::size_t j = t; j < cols; ++j) {
          if (A[i][j] == 0) continue;
          BigInt a = abs_big(A[i][j]);
          if (pi == rows || a < best) {
            best = a;
            pi = i;
            pj = j;
          }
        }
      }
      if (pi == rows) break;
      if (pi != t) swap_rows(pi, t);
      if (pj != t) swap_cols(pj, t);
      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (A[i][t] == 0) continue;
        row_op(i, t, floor_div(A[i][t], A[t][t]));
        if (A[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (A[t][j] == 0) continue;
        col_op(j, t, floor_div(A[t][j], A[t][t]));
        if (A[t][j] != 0) clean = false;
      }
      if (!clean) continue;
      // divisibility of the remaining block
      std::size_t bad = rows;
      for (std::size_t i = t + 1; i < rows && bad == rows; ++i) {
        for (std::size_t j = t + 1; j < cols; ++j) {
          if (A[i][j] % A[t][t] != 0) {
            bad = i;
            break;
          }
        }
      }
      if (bad == rows) break;
      row_op(t, bad, BigInt(-1));  // row t += row bad
    }
    if (A[t][t] < 0) {
      for (auto& x : A[t]) x = -x;
      if (track) for (auto& x : U[t]) x = -x;
    }
  }
  SmithResult res;
  for (std::size_t t = 0; t < k; ++t) {
    BigInt d = A[t][t];
    if (use_mod) d = gcd(d, *modulus);
    res.invariants.push_back(d);
  }
  if (track) {
    res.U = std::move(U);
    res.V = std::move(V);
  }
  return res;
}

}  // namespace dlkit::linalg

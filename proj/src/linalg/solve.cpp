#include "dlkit/linalg/solve.hpp"

#include "dlkit/ff/numtheory.hpp"
#include "dlkit/ff/rng.hpp"

namespace dlkit::linalg {

namespace {

constexpr std::size_t kDenseLimit = 400;

Vec solve_core(const SparseMatrix& R, const Vec& rhs, u64 ell, u64 seed) {
  const std::size_t n = R.ncols();
  if (n == 0) return {};
  if (R.nrows() < n) throw Error(ErrorCode::RankDeficient, "fewer equations than unknowns");
  if (n <= kDenseLimit) {
    auto sol = dense_solve(R.to_dense(), rhs, ell);
    if (!sol) throw Error(ErrorCode::VerificationFailed, "inconsistent system");
    if (!sol->kernel.empty()) throw Error(ErrorCode::RankDeficient, "kernel of dimension " + std::to_string(sol->kernel.size()));
    return sol->x;
  }
  ff::Rng rng(seed);
  for (unsigned attempt = 0; attempt < 4; ++attempt) {
    SparseMatrix S(n, n, ell);
    Vec sb(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      for (int t = 0; t < 3; ++t) {
        std::size_t src = t == 0 ? i : rng.below(R.nrows());
        u64 c = 1 + rng.below(ell - 1);
        for (const auto& [col, v] : R.row(src)) S.add(i, col, static_cast<i64>(mul_mod(c, static_cast<u64>(v), ell)));
        sb[i] = add_mod(sb[i], mul_mod(c, rhs[src], ell), ell);
      }
    }
    try {
      return wiedemann_solve(S, sb, ell, {rng.next(), 8});
    } catch (const SingularSystemError&) {
    }
  }
  throw Error(ErrorCode::RankDeficient, "square combinations stay singular");
}

u64 mulm(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<unsigned __int128>(a) * b % m); }

}  // namespace

Vec solve_full_rank(const SparseMatrix& A_in, const Vec& b, u64 ell, u64 seed) {
  SparseMatrix A = A_in.modulus() == ell ? A_in : A_in.reduced(ell);
  std::vector<bool> seen(A.ncols(), false);
  for (const auto& r : A.rows())
    for (const auto& e : r) seen[e.first] = true;
  for (std::size_t j = 0; j < seen.size(); ++j)
    if (!seen[j]) throw Error(ErrorCode::RankDeficient, "unknown " + std::to_string(j) + " appears in no equation");
  if (A.nrows() < A.ncols()) throw Error(ErrorCode::RankDeficient, "fewer equations than unknowns");
  GaussReduction red = structured_gauss(A, b);
  if (red.kept_cols.size() + red.log.size() != A.ncols())
    throw Error(ErrorCode::RankDeficient, "elimination left undetermined unknowns");
  Vec y = red.extend(solve_core(red.reduced, red.rhs, ell, seed));
  Vec check = A.multiply(y);
  for (std::size_t i = 0; i < check.size(); ++i)
    if (check[i] != b[i] % ell) throw Error(ErrorCode::RankDeficient, "solution misses an equation");
  return y;
}

Vec solve_mod(const SparseMatrix& A, const std::vector<i64>& b, u64 N,
              const std::vector<std::pair<u64, unsigned>>& factorization, u64 seed) {
  const std::size_t n = A.ncols();
  Vec result(n, 0);
  u64 modulus_so_far = 1;
  for (const auto& [ell, e] : factorization) {
    u64 pe = 1;
    for (unsigned i = 0; i < e; ++i) pe *= ell;
    SparseMatrix Al = A.reduced(ell);
    Vec bl(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) bl[i] = to_mod(b[i], ell);
    Vec y = solve_full_rank(Al, bl, ell, seed);
    // Lift y from mod ell^k to mod ell^{k+1}.
    u64 pk = ell;
    for (unsigned k = 1; k < e; ++k) {
      Vec res(A.nrows());
      for (std::size_t i = 0; i < A.nrows(); ++i) {
        u64 acc = to_mod(b[i], pe);
        for (const auto& [c, v] : A.row(i)) acc = sub_mod(acc, mulm(to_mod(v, pe), y[c], pe), pe);
        if (acc % pk != 0) throw Error(ErrorCode::VerificationFailed, "lift residual not divisible");
        res[i] = (acc / pk) % ell;
      }
      Vec z = solve_full_rank(Al, res, ell, seed + k);
      for (std::size_t j = 0; j < n; ++j) y[j] = (y[j] + pk * z[j]) % (pk * ell);
      pk *= ell;
    }
    // CRT into the running result.
    if (modulus_so_far == 1) {
      result = y;
    } else {
      const u64 inv = *ff::invmod(modulus_so_far % pe, pe);
      const u64 M = modulus_so_far * pe;
      for (std::size_t j = 0; j < n; ++j) {
        u64 t = mulm(sub_mod(y[j], result[j] % pe, pe), inv, pe);
        result[j] = (result[j] + mulm(t, modulus_so_far, M)) % M;
      }
    }
    modulus_so_far *= pe;
  }
  if (modulus_so_far != N) throw Error(ErrorCode::BadFactorization, "factorization does not multiply to N");
  return result;
}

}  // namespace dlkit::linalg

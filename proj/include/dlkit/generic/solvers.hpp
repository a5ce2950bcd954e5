#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dlkit/error.hpp"
#include "dlkit/ff/numtheory.hpp"
#include "dlkit/ff/rng.hpp"
#include "dlkit/generic/group.hpp"

namespace dlkit::generic {

template <Group G>
struct DlogInstance {
  G group;
  typename G::Element P;
  typename G::Element Q;
  u64 N;  // order of P
};

struct SolveStats {
  u64 group_ops = 0;
  u64 iterations = 0;     // rho: tortoise steps until the collision; prho: total walk steps
  u64 stored_points = 0;  // bsgs table size or distinguished points stored
  u64 restarts = 0;
  u64 digits = 0;  // Pohlig-Hellman subgroup solves
};

// Raised when every retry ended in a collision whose b-difference shares a
// large factor with N. Carries x mod partial_modulus.
class DegenerateCollisionError : public Error {
 public:
  DegenerateCollisionError(u64 value, u64 modulus)
      : Error(ErrorCode::DegenerateCollision,
              "collision only determines x = " + std::to_string(value) + " mod " + std::to_string(modulus)),
        value_(value),
        modulus_(modulus) {}
  u64 partial_value() const { return value_; }
  u64 partial_modulus() const { return modulus_; }

 private:
  u64 value_, modulus_;
};

template <Group G>
bool verify(const DlogInstance<G>& inst, u64 x) {
  return scalar_mul(inst.group, inst.P, x) == inst.Q;
}

template <Group G>
u64 exhaustive(const DlogInstance<G>& inst, SolveStats* stats = nullptr, u64 cap = 10'000'000) {
  if (inst.N > cap) throw Error(ErrorCode::CapExceeded, "group order above exhaustive-search cap");
  SolveStats local;
  SolveStats& st = stats ? *stats : local;
  auto R = inst.group.identity();
  for (u64 x = 0; x < inst.N; ++x) {
    if (R == inst.Q) return x;
    R = inst.group.op(R, inst.P);
    ++st.group_ops;
  }
  throw Error(ErrorCode::NotInSubgroup, "no exponent below N maps P to Q");
}

// Baby steps jP for j < m = ceil(sqrt N), then giant steps Q - i*m*P.
// Uses at most 2m group operations.
template <Group G>
u64 bsgs(const DlogInstance<G>& inst, SolveStats* stats = nullptr, u64 memory_cap = u64{1} << 26) {
  SolveStats local;
  SolveStats& st = stats ? *stats : local;
  const auto& g = inst.group;
  const u64 m = std::max<u64>(1, ff::isqrt_ceil(inst.N));
  if (m > memory_cap) throw Error(ErrorCode::CapExceeded, "baby-step table above memory cap");
  std::unordered_map<std::string, u64> table;
  table.reserve(m);
  auto R = g.identity();
  for (u64 j = 0; j < m; ++j) {
    table.emplace(g.canonical_bytes(R), j);
    R = g.op(R, inst.P);
    ++st.group_ops;
  }
  st.stored_points = table.size();
  const auto giant = g.inverse(R);  // -(m P)
  ++st.group_ops;
  auto gamma = inst.Q;
  for (u64 i = 0; i < m; ++i) {
    auto it = table.find(g.canonical_bytes(gamma));
    if (it != table.end()) {
      u64 x = static_cast<u64>((static_cast<ff::u128>(i) * m + it->second) % inst.N);
      return x;
    }
    if (i + 1 < m) {
      gamma = g.op(gamma, giant);
      ++st.group_ops;
    }
  }
  throw Error(ErrorCode::NotInSubgroup, "giant steps exhausted without a match");
}

namespace detail {

// Mixing hash of canonical bytes. Walk partitions and the distinguished-point
// test read disjoint bits of it; the raw low bits of a representation follow
// the walk too closely (in Z/N the low byte evolves almost on its own).
inline u64 bytes_hash(const std::string& bytes) {
  u64 h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) h = (h ^ c) * 0x100000001b3ULL;
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdULL;
  h ^= h >> 33;
  h *= 0xc4ceb9fe1a85ec53ULL;
  h ^= h >> 33;
  return h;
}

// Candidates x with x*(b1 - b2) = a2 - a1 mod N, tested against Q when the
// gcd is small. Returns the verified solution, or sets the partial residue.
template <Group G>
std::optional<u64> resolve_collision(const DlogInstance<G>& inst, u64 a1, u64 b1, u64 a2, u64 b2,
                                     SolveStats& st, u64& partial_value, u64& partial_modulus,
                                     u64 max_candidates = 1024) {
  const u64 N = inst.N;
  const u64 db = (b1 + N - b2) % N;
  const u64 da = (a2 + N - a1) % N;
  u64 g = std::gcd(db, N);
  if (g == 0) g = N;
  if (g > max_candidates) {
    if (da % g == 0 && N / g > 1) {
      const u64 m2 = N / g;
      partial_modulus = m2;
      partial_value = ff::mulmod(da / g, *ff::invmod(db / g, m2), m2);
    }
    return std::nullopt;
  }
  for (u64 x : ff::solve_linear_congruence(db, da, N, max_candidates)) {
    ++st.group_ops;
    if (verify(inst, x)) return x;
  }
  return std::nullopt;
}

template <Group G>
struct AddingWalk {
  std::vector<typename G::Element> steps;
  std::vector<u64> da, db;

  AddingWalk(const DlogInstance<G>& inst, unsigned partitions, ff::Rng& rng) {
    for (unsigned k = 0; k < partitions; ++k) {
      u64 m = rng.below(inst.N), n = rng.below(inst.N);
      steps.push_back(inst.group.op(scalar_mul(inst.group, inst.P, m), scalar_mul(inst.group, inst.Q, n)));
      da.push_back(m);
      db.push_back(n);
    }
  }

  template <typename Elt>
  void step(const G& g, Elt& R, u64& a, u64& b, u64 N) const {
    const unsigned k = (bytes_hash(g.canonical_bytes(R)) >> 32) % steps.size();
    R = g.op(R, steps[k]);
    a += da[k];
    if (a >= N) a -= N;
    b += db[k];
    if (b >= N) b -= N;
  }
};

inline bool is_distinguished(const std::string& bytes, unsigned dp_bits) {
  if (dp_bits == 0) return true;
  if (dp_bits >= 64) return bytes_hash(bytes) == 0;
  return (bytes_hash(bytes) & ((u64{1} << dp_bits) - 1)) == 0;
}

}  // namespace detail

struct RhoParams {
  unsigned partitions = 20;
  u64 seed = 1;
  unsigned max_retries = 10;
};

// Floyd cycle finding on an adding walk; two walk states of storage.
template <Group G>
u64 pollard_rho(const DlogInstance<G>& inst, const RhoParams& params = {}, SolveStats* stats = nullptr) {
  if (inst.N <= 1) return 0;
  SolveStats local;
  SolveStats& st = stats ? *stats : local;
  const auto& g = inst.group;
  const u64 N = inst.N;
  if (inst.Q == g.identity()) return 0;
  ff::Rng rng(params.seed);
  u64 pv = 0, pm = 0;
  for (unsigned attempt = 0; attempt <= params.max_retries; ++attempt) {
    if (attempt) ++st.restarts;
    detail::AddingWalk<G> walk(inst, params.partitions, rng);
    u64 a = rng.below(N), b = rng.below(N);
    auto R = g.op(scalar_mul(g, inst.P, a), scalar_mul(g, inst.Q, b));
    auto R2 = R;
    u64 a2 = a, b2 = b;
    u64 i = 0;
    // the walk on a finite set must cycle within N + 1 steps
    const u64 limit = 4 * N + 16;
    do {
      walk.step(g, R, a, b, N);
      walk.step(g, R2, a2, b2, N);
      walk.step(g, R2, a2, b2, N);
      st.group_ops += 3;
      ++i;
    } while (!(R == R2) && i < limit);
    st.iterations = i;
    if (!(R == R2)) continue;
    if (auto x = detail::resolve_collision(inst, a, b, a2, b2, st, pv, pm)) return *x;
  }
  if (pm > 1) throw DegenerateCollisionError(pv, pm);
  throw Error(ErrorCode::NotInSubgroup, "no verifiable collision after retries");
}

// Store of distinguished points shared by all walkers. insert_or_get is the
// single synchronization point: the first walker to arrive stores its state,
// later arrivals receive the stored one.
template <typename Key>
class DistinguishedStore {
 public:
  struct Entry {
    u64 a, b;
    unsigned walker;
  };
  std::optional<Entry> insert_or_get(const Key& key, const Entry& e) {
    std::lock_guard lock(mu_);
    auto [it, inserted] = map_.emplace(key, e);
    if (inserted) return std::nullopt;
    return it->second;
  }
  std::size_t size() const {
    std::lock_guard lock(mu_);
    return map_.size();
  }

 private:
  mutable std::mutex mu_;
  std::unordered_map<Key, Entry> map_;
};

struct ParallelRhoParams {
  unsigned walkers = 4;
  int dp_bits = -1;  // negative: max(0, floor(log2 sqrt N) - 10)
  u64 seed = 1;
  unsigned partitions = 20;
  unsigned threads = 1;  // 1: walkers interleaved round-robin in this thread
  unsigned max_degenerate = 10;
  u64 max_steps = 0;  // 0: 64 * sqrt(N) + 10^4
};

inline unsigned default_dp_bits(u64 N) {
  const double l = std::floor(std::log2(std::sqrt(static_cast<double>(N))));
  return l > 10 ? static_cast<unsigned>(l - 10) : 0;
}

// van Oorschot-Wiener collision search: walkers report distinguished points
// to the store; a repeat from a different (a, b) gives the logarithm. Walkers
// that go too long without a distinguished point restart from a fresh point.
template <Group G>
u64 parallel_rho(const DlogInstance<G>& inst, const ParallelRhoParams& params = {},
                 SolveStats* stats = nullptr) {
  if (inst.N <= 1) return 0;
  SolveStats local;
  SolveStats& st = stats ? *stats : local;
  const auto& g = inst.group;
  const u64 N = inst.N;
  if (inst.Q == g.identity()) return 0;
  const unsigned dp = params.dp_bits < 0 ? default_dp_bits(N) : static_cast<unsigned>(params.dp_bits);
  const u64 stall = 20 * (u64{1} << dp) + 64;
  const u64 max_steps = params.max_steps
                            ? params.max_steps
                            : 64 * static_cast<u64>(std::sqrt(static_cast<double>(N))) + 10'000;
  ff::Rng master(params.seed);
  detail::AddingWalk<G> walk(inst, params.partitions, master);

  struct Walker {
    ff::Rng rng;
    typename G::Element R;
    u64 a = 0, b = 0, since_dp = 0;
  };
  const unsigned W = std::max(1u, params.walkers);
  std::vector<Walker> ws;
  for (unsigned w = 0; w < W; ++w) ws.push_back({master.fork(w), g.identity(), 0, 0, 0});
  auto restart = [&](Walker& w) {
    w.a = w.rng.below(N);
    w.b = w.rng.below(N);
    w.R = g.op(scalar_mul(g, inst.P, w.a), scalar_mul(g, inst.Q, w.b));
    w.since_dp = 0;
  };
  for (auto& w : ws) restart(w);

  DistinguishedStore<std::string> store;
  std::mutex result_mu;
  std::atomic<bool> done{false};
  std::atomic<u64> steps{0}, ops{0}, restarts{0}, degenerate{0};
  std::optional<u64> answer;
  u64 pv = 0, pm = 0;

  // One walk step for walker index w; returns true when the search is over.
  auto advance = [&](unsigned wi) {
    Walker& w = ws[wi];
    walk.step(g, w.R, w.a, w.b, N);
    ops.fetch_add(1, std::memory_order_relaxed);
    ++w.since_dp;
    const u64 total = steps.fetch_add(1, std::memory_order_relaxed) + 1;
    const std::string bytes = g.canonical_bytes(w.R);
    if (detail::is_distinguished(bytes, dp)) {
      w.since_dp = 0;
      auto prev = store.insert_or_get(bytes, {w.a, w.b, wi});
      if (prev && !(prev->a == w.a && prev->b == w.b)) {
        SolveStats tmp;
        u64 v = 0, m = 0;
        auto x = detail::resolve_collision(inst, prev->a, prev->b, w.a, w.b, tmp, v, m);
        ops.fetch_add(tmp.group_ops, std::memory_order_relaxed);
        std::lock_guard lock(result_mu);
        if (x) {
          if (!answer) answer = x;
          done = true;
          return true;
        }
        if (m > 1) {
          pv = v;
          pm = m;
        }
        if (degenerate.fetch_add(1) + 1 >= params.max_degenerate) {
          done = true;
          return true;
        }
        restart(w);
        restarts.fetch_add(1);
      } else if (prev) {
        // merged with its own earlier path: stuck in a cycle through a stored point
        restart(w);
        restarts.fetch_add(1);
      }
    } else if (w.since_dp > stall) {
      restart(w);
      restarts.fetch_add(1);
    }
    if (total >= max_steps) {
      done = true;
      return true;
    }
    return false;
  };

  const unsigned T = std::min(std::max(1u, params.threads), W);
  if (T == 1) {
    while (!done) {
      for (unsigned wi = 0; wi < W && !done; ++wi) advance(wi);
    }
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < T; ++t) {
      pool.emplace_back([&, t] {
        while (!done) {
          for (unsigned wi = t; wi < W && !done; wi += T) advance(wi);
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  st.iterations = steps.load();
  st.group_ops += ops.load();
  st.restarts += restarts.load();
  st.stored_points = store.size();
  if (answer) return *answer;
  if (pm > 1) throw DegenerateCollisionError(pv, pm);
  throw Error(ErrorCode::NotInSubgroup, "parallel collision search found no verifiable collision");
}

enum class SubgroupSolver { exhaustive, bsgs, rho, parallel_rho };

// Pohlig-Hellman: for each p^e || N, digits of x mod p^e are peeled off one
// at a time in the subgroup of order p, x_k = log(p^(e-1-k) (Q_i - x P_i)).
template <Group G>
u64 pohlig_hellman(const DlogInstance<G>& inst, const std::vector<std::pair<u64, unsigned>>& factorization,
                   SubgroupSolver solver = SubgroupSolver::bsgs, SolveStats* stats = nullptr, u64 seed = 1) {
  SolveStats local;
  SolveStats& st = stats ? *stats : local;
  const auto& g = inst.group;
  {
    ff::u128 prod = 1;
    for (auto [p, e] : factorization) {
      if (e == 0 || !ff::is_prime(p)) throw Error(ErrorCode::BadFactorization, "factor is not a prime power");
      for (unsigned i = 0; i < e; ++i) {
        prod *= p;
        if (prod > inst.N) throw Error(ErrorCode::BadFactorization, "product of factors exceeds N");
      }
    }
    if (prod != inst.N) throw Error(ErrorCode::BadFactorization, "factors do not multiply to N");
  }
  u64 x_total = 0, modulus = 1;
  for (auto [p, e] : factorization) {
    u64 pe = 1;
    for (unsigned i = 0; i < e; ++i) pe *= p;
    const u64 cof = inst.N / pe;
    const auto Pi = scalar_mul(g, inst.P, cof);
    const auto Qi = scalar_mul(g, inst.Q, cof);
    const auto gamma = scalar_mul(g, Pi, pe / p);  // order p
    u64 xi = 0, pk = 1;
    for (unsigned k = 0; k < e; ++k) {
      const auto H = scalar_mul(g, g.op(Qi, g.inverse(scalar_mul(g, Pi, xi))), pe / pk / p);
      DlogInstance<G> sub{g, gamma, H, p};
      u64 d = 0;
      SolveStats sst;
      switch (solver) {
        case SubgroupSolver::exhaustive: d = exhaustive(sub, &sst); break;
        case SubgroupSolver::bsgs: d = bsgs(sub, &sst); break;
        case SubgroupSolver::rho: d = pollard_rho(sub, RhoParams{20, seed + st.digits, 10}, &sst); break;
        case SubgroupSolver::parallel_rho: {
          ParallelRhoParams pp;
          pp.seed = seed + st.digits;
          d = parallel_rho(sub, pp, &sst);
          break;
        }
      }
      st.group_ops += sst.group_ops;
      ++st.digits;
      xi += d * pk;
      pk *= p;
    }
    // combine x = x_total mod modulus with xi mod pe
    const u64 inv = *ff::invmod(modulus % pe, pe);
    const u64 t = ff::mulmod((xi + pe - x_total % pe) % pe, inv, pe);
    x_total = x_total + modulus * t;
    modulus *= pe;
  }
  const u64 x = inst.N ? x_total % inst.N : 0;
  if (!verify(inst, x)) throw Error(ErrorCode::NotInSubgroup, "reconstructed exponent does not map P to Q");
  return x;
}

}  // namespace dlkit::generic

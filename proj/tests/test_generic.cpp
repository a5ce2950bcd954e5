#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "dlkit/generic/solvers.hpp"

using namespace dlkit;
using namespace dlkit::generic;
using dlkit::ff::Rng;

namespace {

DlogInstance<FieldMultGroup> f101(u64 q) {
  return {FieldMultGroup(ff::FieldSpec::prime(101)), 2, q, 100};
}

// Repeated-squaring oracle independent of scalar_mul.
u64 modpow_oracle(u64 b, u64 e, u64 m) {
  u64 r = 1;
  for (u64 i = 0; i < e; ++i) r = r * b % m;
  return r;
}

}  // namespace

TEST_CASE("examples over F_101") {
  CHECK(modpow_oracle(2, 37, 101) == 55);
  auto inst = f101(55);
  CHECK(exhaustive(inst) == 37);
  CHECK(bsgs(inst) == 37);
  CHECK(pollard_rho(inst) == 37);
  CHECK(parallel_rho(inst) == 37);
  SolveStats st;
  CHECK(pohlig_hellman(inst, {{2, 2}, {5, 2}}, SubgroupSolver::bsgs, &st) == 37);
  CHECK(st.digits == 4);
}

TEST_CASE("additive examples") {
  DlogInstance<AdditiveGroup> inst{AdditiveGroup(12), 1, 7, 12};
  CHECK(exhaustive(inst) == 7);
  CHECK(pohlig_hellman(inst, {{2, 2}, {3, 1}}) == 7);
  inst.Q = 0;
  CHECK(exhaustive(inst) == 0);
  CHECK(pollard_rho(inst) == 0);
  inst.Q = inst.P;
  CHECK(bsgs(inst) == 1);
}

TEST_CASE("prime N gives one digit") {
  DlogInstance<AdditiveGroup> inst{AdditiveGroup(10007), 3, 123, 10007};
  SolveStats st;
  u64 x = pohlig_hellman(inst, {{10007, 1}}, SubgroupSolver::bsgs, &st);
  CHECK(st.digits == 1);
  CHECK(x == bsgs(inst));
}

TEST_CASE("errors") {
  DlogInstance<AdditiveGroup> big{AdditiveGroup(20'000'000), 1, 5, 20'000'000};
  CHECK_THROWS_AS(exhaustive(big), Error);
  // 3 generates the index-2 subgroup of F_7^x... use 2 (order 3) and target 3
  DlogInstance<FieldMultGroup> out{FieldMultGroup(ff::FieldSpec::prime(7)), 2, 3, 3};
  CHECK_THROWS_AS(exhaustive(out), Error);
  CHECK_THROWS_AS(bsgs(out), Error);
  CHECK_THROWS_AS(pohlig_hellman(f101(55), {{2, 2}, {5, 1}}), Error);
  CHECK_THROWS_AS(pohlig_hellman(f101(55), {{4, 1}, {25, 1}}), Error);
}

TEST_CASE("all solvers agree with exhaustive on random instances") {
  Rng rng(2024);
  for (int t = 0; t < 200; ++t) {
    u64 N = 2 + rng.below(100'000 - 1);
    DlogInstance<AdditiveGroup> inst{AdditiveGroup(N), 0, 0, N};
    do {
      inst.P = rng.below(N);
    } while (std::gcd(inst.P, N) != 1);
    inst.Q = rng.below(N);
    u64 x = exhaustive(inst);
    SolveStats st;
    CHECK(bsgs(inst, &st) == x);
    CHECK(st.group_ops <= 2 * ff::isqrt_ceil(N) + 5);
    CHECK(pohlig_hellman(inst, ff::factorize(N), SubgroupSolver::rho, nullptr, t) == x);
    CHECK(pohlig_hellman(inst, ff::factorize(N), SubgroupSolver::exhaustive) == x);
    if (ff::is_prime(N)) {
      CHECK(pollard_rho(inst, {20, static_cast<u64>(t), 10}) == x);
      ParallelRhoParams pp;
      pp.seed = t;
      CHECK(parallel_rho(inst, pp) == x);
    }
  }
}

TEST_CASE("parallel rho single walker agrees with bsgs") {
  Rng rng(77);
  for (int t = 0; t < 50; ++t) {
    u64 N;
    do N = 1000 + rng.below(99'000);
    while (!ff::is_prime(N));
    DlogInstance<AdditiveGroup> inst{AdditiveGroup(N), 1 + rng.below(N - 1), rng.below(N), N};
    ParallelRhoParams pp;
    pp.walkers = 1;
    pp.dp_bits = 0;
    pp.seed = t;
    CHECK(parallel_rho(inst, pp) == bsgs(inst));
  }
}

TEST_CASE("parallel rho with threads") {
  auto F = ff::FieldSpec::binary(20);
  FieldMultGroup G(F);
  // order of X in F_{2^20}^x divides 2^20 - 1 = 3 * 5^2 * 11 * 31 * 41; use the 41*31 subgroup
  u64 N = 1271;
  u64 P = F.pow(2, (F.order() - 1) / N);
  DlogInstance<FieldMultGroup> inst{G, P, F.pow(P, 999), N};
  ParallelRhoParams pp;
  pp.walkers = 8;
  pp.threads = 2;
  pp.dp_bits = 2;
  u64 x = parallel_rho(inst, pp);
  CHECK(verify(inst, x));
}

TEST_CASE("distinguished fraction") {
  Rng rng(5);
  u64 N = 1'000'003;
  DlogInstance<AdditiveGroup> inst{AdditiveGroup(N), 1, 12345, N};
  detail::AddingWalk<AdditiveGroup> walk(inst, 20, rng);
  u64 R = 777, a = 777, b = 0, hits = 0;
  const int steps = 100'000;
  for (int i = 0; i < steps; ++i) {
    walk.step(inst.group, R, a, b, N);
    hits += detail::is_distinguished(inst.group.canonical_bytes(R), 4);
  }
  const double p = 1.0 / 16, sigma = std::sqrt(steps * p * (1 - p));
  CHECK(std::abs(hits - steps * p) < 5 * sigma);
}

TEST_CASE("degenerate collision carries a partial residue") {
  // N = 2 * 2003, b-differences are forced even so only x mod 2003 is found
  DlogInstance<AdditiveGroup> inst{AdditiveGroup(4006), 1, 1001, 4006};
  SolveStats st;
  u64 v = 0, m = 0;
  auto x = detail::resolve_collision(inst, 0, 2, 2002, 0, st, v, m, 1);
  CHECK(!x.has_value());
  CHECK(m == 2003);
  CHECK(v == 1001);
  // with enough candidates the same collision is resolved
  CHECK(detail::resolve_collision(inst, 0, 2, 2002, 0, st, v, m).value() == 1001);
}

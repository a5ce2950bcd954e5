#include "dlkit/field_ic/field_ic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <thread>

#include "dlkit/analysis/analysis.hpp"
#include "dlkit/error.hpp"
#include "dlkit/ff/numtheory.hpp"
#include "dlkit/linalg/solve.hpp"
#include "json.hpp"

namespace dlkit::field_ic {

namespace gf2x = ff::gf2x;

namespace {

unsigned deg(u64 a) { return a ? 63 - static_cast<unsigned>(__builtin_clzll(a)) : 0; }

// Remainder of a by b over F_2.
u64 rem2(u64 a, u64 b) {
  const unsigned db = deg(b);
  while (a && deg(a) >= db) a ^= b << (deg(a) - db);
  return a;
}

// Quotient, assuming b divides a.
u64 div2(u64 a, u64 b) {
  const unsigned db = deg(b);
  u64 q = 0;
  while (a && deg(a) >= db) {
    const unsigned s = deg(a) - db;
    q |= u64{1} << s;
    a ^= b << s;
  }
  return q;
}

u64 group_order(const FieldSpec& field) { return field.order() - 1; }

void require_binary(const FieldSpec& field) {
  if (!field.is_binary() || field.degree() < 2) throw Error(ErrorCode::DomainError, "binary field F_{2^m} with m >= 2 required");
}

// Number of monic irreducibles of degree d over F_2.
double irreducible_count(unsigned d) {
  double total = 0;
  for (unsigned e = 1; e <= d; ++e) {
    if (d % e) continue;
    unsigned k = e;
    int mu = 1;
    for (unsigned p = 2; p <= k; ++p) {
      if (k % p) continue;
      k /= p;
      if (k % p == 0) {
        mu = 0;
        break;
      }
      mu = -mu;
    }
    total += mu * std::ldexp(1.0, static_cast<int>(d / e));
  }
  return total / d;
}

}  // namespace

bool is_primitive(const FieldSpec& field, u64 g) {
  const u64 N = group_order(field);
  if (g == 0 || g >= field.order()) return false;
  if (N == 1) return g == 1;
  for (const auto& [r, e] : ff::factorize(N))
    if (field.pow(g, N / r) == 1) return false;
  return true;
}

u64 default_generator(const FieldSpec& field, unsigned bound) {
  require_binary(field);
  for (u64 g = 2; g < field.order() && deg(g) <= bound; ++g)
    if (gf2x::is_irreducible(g) && is_primitive(field, g)) return g;
  throw Error(ErrorCode::DomainError, "no primitive factor-base element");
}

FieldFactorBase make_factor_base(const FieldSpec& field, unsigned bound, u64 generator) {
  require_binary(field);
  if (bound == 0 || bound >= field.degree()) throw Error(ErrorCode::DomainError, "bound must be in [1, m)");
  if (deg(generator) == 0 || deg(generator) > bound || !gf2x::is_irreducible(generator))
    throw Error(ErrorCode::DomainError, "generator must be an irreducible of degree <= B");
  if (bound > 26) throw Error(ErrorCode::BoundTooLarge, "factor base too large");
  FieldFactorBase fb;
  fb.field = field;
  fb.bound = bound;
  fb.primes.push_back(generator);
  // Masks are ordered by degree first, so plain numeric order is (degree, value).
  for (u64 p = 2; p < (u64{1} << (bound + 1)); ++p)
    if (p != generator && gf2x::is_irreducible(p)) fb.primes.push_back(p);
  for (std::uint32_t j = 0; j < fb.primes.size(); ++j) fb.column[fb.primes[j]] = j;
  return fb;
}

double predicted_cost(unsigned m, unsigned bound) {
  double n = 0;
  for (unsigned d = 1; d <= bound; ++d) n += irreducible_count(d);
  const double u = static_cast<double>(m - 1) / bound;
  const double rho = static_cast<double>(analysis::dickman_rho(std::min<double>(u, 50.0)));
  const double per_trial = 16.0 * m + static_cast<double>(bound) * m * m;
  const double relations = (n + 20) / rho * per_trial;
  const double linear_algebra = n * n * (16.0 + static_cast<double>(m) / bound) * m;
  return relations + linear_algebra;
}

unsigned choose_B(const FieldSpec& field) {
  require_binary(field);
  const unsigned m = field.degree();
  unsigned best = 2;
  double best_cost = predicted_cost(m, 2);
  for (unsigned B = 3; B <= m / 2; ++B) {
    double c = predicted_cost(m, B);
    if (c < best_cost) {
      best_cost = c;
      best = B;
    }
  }
  return std::min(best, m - 1);
}

std::optional<std::vector<std::pair<std::uint32_t, unsigned>>> factor_over(const FieldFactorBase& fb, u64 a) {
  if (a == 0) return std::nullopt;
  std::vector<std::pair<std::uint32_t, unsigned>> out;
  // Primes after index 0 are sorted by degree; once the cofactor is below the
  // square of the current degree it is irreducible.
  for (std::uint32_t j = 0; j < fb.primes.size() && a != 1; ++j) {
    const u64 p = fb.primes[j];
    if (j > 0 && 2 * deg(p) > deg(a) && deg(a) > fb.bound) return std::nullopt;
    unsigned e = 0;
    while (deg(a) >= deg(p) && rem2(a, p) == 0) {
      a = div2(a, p);
      ++e;
    }
    if (e) out.emplace_back(j, e);
  }
  if (a != 1) return std::nullopt;
  std::sort(out.begin(), out.end());
  return out;
}

bool FieldRelation::verify(const FieldFactorBase& fb) const {
  const FieldSpec& k = fb.field;
  const u64 N = group_order(k);
  u64 acc = k.pow(fb.primes[0], linalg::to_mod(-rhs, N));
  for (const auto& [j, e] : a) acc = k.mul(acc, k.pow(fb.primes[j], linalg::to_mod(e, N)));
  return acc == 1;
}

namespace {

std::vector<FieldRelation> collect_worker(const FieldFactorBase& fb, const CollectParams& p, std::size_t quota,
                                          ff::Rng rng, CollectStats& st) {
  const FieldSpec& k = fb.field;
  const u64 N = group_order(k);
  const std::size_t n1 = fb.size();
  std::vector<FieldRelation> out;
  std::vector<std::uint32_t> idx;
  while (out.size() < quota) {
    if (st.trials >= p.max_trials) throw Error(ErrorCode::TimeBudgetExceeded, "relation collection trial budget exhausted");
    ++st.trials;
    idx.clear();
    if (p.dense || p.sparse_k >= n1) {
      for (std::uint32_t j = 0; j < n1; ++j) idx.push_back(j);
    } else {
      idx.push_back(0);
      while (idx.size() < p.sparse_k) {
        auto j = static_cast<std::uint32_t>(1 + rng.below(n1 - 1));
        if (std::find(idx.begin(), idx.end(), j) == idx.end()) idx.push_back(j);
      }
    }
    std::map<std::uint32_t, i64> exps;
    u64 value = 1;
    for (auto j : idx) {
      u64 e = rng.below(N);
      value = k.mul(value, k.pow(fb.primes[j], e));
      exps[j] -= static_cast<i64>(e);
    }
    auto f = factor_over(fb, value);
    if (!f) continue;
    ++st.smooth;
    for (const auto& [j, e] : *f) exps[j] += e;
    FieldRelation rel;
    for (const auto& [j, v] : exps) {
      if (v == 0) continue;
      if (j == 0)
        rel.rhs = -v;
      else
        rel.a.emplace_back(j, v);
    }
    if (rel.a.empty()) continue;
    out.push_back(std::move(rel));
  }
  return out;
}

}  // namespace

std::vector<FieldRelation> collect_relations(const FieldFactorBase& fb, const CollectParams& params,
                                             CollectStats* stats) {
  const std::size_t target = params.count ? params.count : fb.size() - 1 + 20;
  const unsigned workers = std::max(1u, params.workers);
  ff::Rng root(params.seed);
  std::vector<std::vector<FieldRelation>> parts(workers);
  std::vector<CollectStats> st(workers);
  std::vector<std::exception_ptr> errors(workers);
  auto run = [&](unsigned w) {
    try {
      std::size_t quota = target / workers + (w < target % workers ? 1 : 0);
      parts[w] = collect_worker(fb, params, quota, workers == 1 ? root : root.fork(w), st[w]);
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> threads;
    for (unsigned w = 0; w < workers; ++w) threads.emplace_back(run, w);
    for (auto& t : threads) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<FieldRelation> out;
  CollectStats total;
  for (unsigned w = 0; w < workers; ++w) {
    out.insert(out.end(), parts[w].begin(), parts[w].end());
    total.trials += st[w].trials;
    total.smooth += st[w].smooth;
  }
  if (stats) *stats = total;
  return out;
}

std::vector<u64> solve_logs(const std::vector<FieldRelation>& rels, const FieldFactorBase& fb, u64 seed) {
  const FieldSpec& k = fb.field;
  const u64 N = group_order(k);
  const std::size_t n = fb.size() - 1;
  linalg::SparseMatrix A(0, n);
  std::vector<i64> b;
  for (const auto& r : rels) {
    linalg::SparseMatrix::Row row;
    for (const auto& [j, v] : r.a) row.emplace_back(j - 1, v);
    A.add_row(std::move(row));
    b.push_back(r.rhs);
  }
  std::vector<u64> logs(fb.size());
  logs[0] = 1;
  if (n > 0) {
    auto y = linalg::solve_mod(A, b, N, ff::factorize(N), seed);
    for (std::size_t j = 0; j < n; ++j) logs[j + 1] = y[j];
  }
  for (std::size_t j = 0; j < fb.size(); ++j)
    if (k.pow(fb.primes[0], logs[j]) != fb.primes[j])
      throw Error(ErrorCode::VerificationFailed, "factor-base logarithm fails P^y = p");
  return logs;
}

u64 individual_log(u64 Q, const std::vector<u64>& logs, const FieldFactorBase& fb, u64 seed, u64 max_trials,
                   IndividualStats* stats) {
  const FieldSpec& k = fb.field;
  const u64 N = group_order(k);
  if (Q == 0 || Q >= k.order()) throw Error(ErrorCode::DomainError, "target must be a nonzero field element");
  const u64 P = fb.primes[0];
  if (auto it = fb.column.find(Q); it != fb.column.end()) return logs[it->second];
  ff::Rng rng(seed);
  for (u64 t = 1; t <= max_trials; ++t) {
    const u64 s = rng.below(N);
    auto f = factor_over(fb, k.mul(Q, k.pow(P, s)));
    if (!f) continue;
    if (stats) stats->trials = t;
    u64 x = 0;
    for (const auto& [j, e] : *f) x = linalg::add_mod(x, ff::mulmod(logs[j], e, N), N);
    x = linalg::sub_mod(x, s, N);
    if (k.pow(P, x) != Q) throw Error(ErrorCode::VerificationFailed, "individual logarithm does not verify");
    return x;
  }
  throw Error(ErrorCode::TimeBudgetExceeded, "no smooth Q P^s found");
}

FieldIndexCalculus::FieldIndexCalculus(const FieldSpec& field, const Options& opt) {
  require_binary(field);
  const unsigned B = opt.bound ? opt.bound : choose_B(field);
  const u64 P = opt.generator ? opt.generator : default_generator(field, B);
  fb_ = make_factor_base(field, B, P);
  CollectParams cp;
  cp.count = fb_.size() - 1 + opt.extra;
  cp.sparse_k = opt.sparse_k;
  cp.dense = opt.dense;
  cp.seed = opt.seed;
  cp.workers = opt.workers;
  CollectStats st;
  auto rels = collect_relations(fb_, cp, &st);
  report_.relation_trials = st.trials;
  for (unsigned round = 0;; ++round) {
    try {
      logs_ = solve_logs(rels, fb_, opt.seed);
      break;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::RankDeficient || round >= 8) throw;
      cp.count = 20;
      cp.seed = opt.seed + 1000 * (round + 1);
      auto more = collect_relations(fb_, cp, &st);
      report_.relation_trials += st.trials;
      rels.insert(rels.end(), more.begin(), more.end());
    }
  }
  report_.generator = P;
  report_.bound = B;
  report_.fb_size = fb_.size();
  report_.relations = rels.size();
}

u64 FieldIndexCalculus::log(u64 Q, u64 seed) {
  IndividualStats st;
  u64 x = individual_log(Q, logs_, fb_, seed, 10'000'000, &st);
  report_.individual_trials += st.trials;
  return x;
}

void write_relations(std::ostream& os, const FieldFactorBase& fb, const std::vector<FieldRelation>& rels) {
  nlohmann::json header{{"field", fb.field.to_string()}, {"B", fb.bound}, {"P", fb.primes[0]}};
  os << "# " << header.dump() << "\n";
  linalg::SparseMatrix M(0, fb.size());
  for (const auto& r : rels) {
    linalg::SparseMatrix::Row row;
    if (r.rhs) row.emplace_back(0, -r.rhs);
    for (const auto& [j, v] : r.a) row.emplace_back(j, v);
    M.add_row(std::move(row));
  }
  M.write(os);
}

std::vector<FieldRelation> read_relations(std::istream& is, FieldFactorBase* fb_out) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("# ", 0) != 0) throw Error(ErrorCode::ParseError, "missing relation header");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line.substr(2));
  } catch (const std::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("bad relation header: ") + e.what());
  }
  FieldFactorBase fb = make_factor_base(FieldSpec::parse(header.at("field").get<std::string>()),
                                        header.at("B").get<unsigned>(), header.at("P").get<u64>());
  auto M = linalg::SparseMatrix::read(is);
  if (M.ncols() != fb.size()) throw Error(ErrorCode::ParseError, "relation width does not match the factor base");
  std::vector<FieldRelation> rels;
  for (const auto& row : M.rows()) {
    FieldRelation r;
    for (const auto& [j, v] : row) {
      if (j == 0)
        r.rhs = -v;
      else
        r.a.emplace_back(j, v);
    }
    rels.push_back(std::move(r));
  }
  if (fb_out) *fb_out = std::move(fb);
  return rels;
}

}  // namespace dlkit::field_ic

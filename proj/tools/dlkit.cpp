#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dlkit/analysis/analysis.hpp"
#include "dlkit/curve/curve.hpp"
#include "dlkit/curve/zeta.hpp"
#include "dlkit/curve_ic/curve_ic.hpp"
#include "dlkit/error.hpp"
#include "dlkit/ff/numtheory.hpp"
#include "dlkit/field_ic/field_ic.hpp"
#include "dlkit/generic/group.hpp"
#include "dlkit/generic/solvers.hpp"
#include "dlkit/poly/factor.hpp"

namespace {

using namespace dlkit;
using u64 = std::uint64_t;
using Clock = std::chrono::steady_clock;

struct RunConfig {
  u64 seed = 0;
  bool seed_given = false;
  double budget_secs = 3600;
  double mem_cap_mb = 1024;
  std::string out;
};

// key=value record; wall_time goes to stdout only so that --out files are
// reproducible byte for byte.
class Record {
 public:
  template <typename T>
  void put(const std::string& key, const T& value) {
    std::ostringstream os;
    os << value;
    lines_.push_back(key + "=" + os.str());
  }
  void raw(std::string line) { lines_.push_back(std::move(line)); }

  void finish(const RunConfig& cfg, Clock::time_point start) const {
    std::string body;
    for (const auto& l : lines_) body += l + "\n";
    std::cout << body;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", std::chrono::duration<double>(Clock::now() - start).count());
    std::cout << "wall_time=" << buf << "\n";
    if (!cfg.out.empty()) {
      std::ofstream f(cfg.out, std::ios::binary);
      if (!f) throw Error(ErrorCode::ParseError, "cannot write " + cfg.out);
      f << body;
    }
  }

 private:
  std::vector<std::string> lines_;
};

u64 parse_u64(const std::string& s) {
  try {
    std::size_t used = 0;
    u64 v = std::stoull(s, &used, 0);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::ParseError, "bad integer '" + s + "'");
  }
}

std::string hex64(u64 v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

u64 fnv1a(const std::string& s) {
  u64 h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) h = (h ^ c) * 0x100000001b3ULL;
  return h;
}

// Order of a given its multiple of the group exponent M.
template <generic::Group G>
u64 element_order(const G& g, const typename G::Element& a, u64 M) {
  u64 n = M;
  for (const auto& [p, e] : ff::factorize(M)) {
    for (unsigned i = 0; i < e; ++i) {
      if (generic::scalar_mul(g, a, n / p) != g.identity()) break;
      n /= p;
    }
  }
  return n;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

curve::HyperellipticCurve load_curve(const std::string& path) { return curve::HyperellipticCurve::load(path); }

u64 curve_order(const curve::HyperellipticCurve& C) {
  curve::JacobianOrderOptions o;
  o.cap = 1'000'000'000'000'000'000ULL;
  return curve::jacobian_order(C, o);
}

// "u0,u1,...|v0,v1,..." low coefficient first; "0" alone is the identity.
curve::Divisor parse_divisor(const curve::HyperellipticCurve& C, const std::string& text) {
  if (text == "0") return curve::identity(C);
  auto parts = split(text, '|');
  if (parts.size() != 2) throw Error(ErrorCode::ParseError, "divisor must be 'u|v': " + text);
  return curve::make_divisor(C, poly::Polynomial::parse(C.field(), parts[0]),
                             poly::Polynomial::parse(C.field(), parts[1]));
}

std::string divisor_text(const curve::Divisor& D) {
  if (D.is_identity()) return "0";
  return D.u.to_string() + "|" + D.v.to_string();
}

// ---------------------------------------------------------------- dlog

struct DlogArgs {
  std::string group;
  std::string p, q;
  std::string alg = "auto";
  u64 order = 0;
  unsigned workers = 1;
};

const std::vector<std::string> kCurveStrategies{"full_b", "harley", "single_lp", "double_lp"};

bool is_curve_strategy(const std::string& a) {
  return std::find(kCurveStrategies.begin(), kCurveStrategies.end(), a) != kCurveStrategies.end();
}

// Lowest cost exponent among generic and the curve index-calculus variants;
// ties go to generic.
std::string auto_curve_alg(unsigned g) {
  analysis::CostModel m;
  m.g = static_cast<int>(g);
  m.family = analysis::Family::generic;
  analysis::real best = analysis::cost_exponent(m);
  std::string alg = "ph";
  for (const auto& s : kCurveStrategies) {
    m.family = analysis::parse_family(s == "full_b" ? "gaudry_full" : s);
    const auto e = analysis::cost_exponent(m);
    if (e < best - 1e-12) {
      best = e;
      alg = s;
    }
  }
  return alg;
}

template <generic::Group G>
u64 run_generic(const generic::DlogInstance<G>& inst, const std::string& alg, const RunConfig& cfg,
                generic::SolveStats& st) {
  const u64 table_cap = static_cast<u64>(cfg.mem_cap_mb * 1024 * 1024 / 64);
  if (alg == "exhaustive") return generic::exhaustive(inst, &st);
  if (alg == "bsgs") return generic::bsgs(inst, &st, table_cap);
  if (alg == "rho") return generic::pollard_rho(inst, generic::RhoParams{20, cfg.seed, 10}, &st);
  if (alg == "prho") {
    generic::ParallelRhoParams pp;
    pp.walkers = 1;
    pp.seed = cfg.seed;
    return generic::parallel_rho(inst, pp, &st);
  }
  if (alg == "ph") {
    return generic::pohlig_hellman(inst, ff::factorize(inst.N), generic::SubgroupSolver::rho, &st, cfg.seed);
  }
  throw Error(ErrorCode::ParseError, "algorithm '" + alg + "' does not apply to this group");
}

template <generic::Group G>
void finish_generic(Record& rec, const G& group, typename G::Element P, typename G::Element Q, u64 group_order,
                    std::string alg, const RunConfig& cfg, u64 N_override) {
  const u64 N = N_override ? N_override : element_order(group, P, group_order);
  if (alg == "auto") alg = "ph";
  generic::DlogInstance<G> inst{group, P, Q, N};
  generic::SolveStats st;
  const u64 x = Q == group.identity() ? 0 : run_generic(inst, alg, cfg, st);
  if (!generic::verify(inst, x)) throw Error(ErrorCode::VerificationFailed, "computed logarithm does not verify");
  rec.put("order", N);
  rec.put("algorithm", alg);
  rec.put("x", x);
  rec.put("op_count", st.group_ops);
  rec.put("verified", "true");
}

void dlog_binary_ic(Record& rec, const ff::FieldSpec& k, u64 P, u64 Q, const DlogArgs& a, const RunConfig& cfg) {
  generic::FieldMultGroup group(k);
  const u64 M = group.order();
  const u64 N = a.order ? a.order : element_order(group, P, M);
  u64 x = 0;
  field_ic::SolverReport report;
  if (Q != 1) {
    field_ic::FieldIndexCalculus::Options o;
    o.seed = cfg.seed;
    o.workers = a.workers;
    field_ic::FieldIndexCalculus ic(k, o);
    const u64 lp = ic.log(P, cfg.seed);
    const u64 lq = ic.log(Q, cfg.seed + 1);
    auto sols = ff::solve_linear_congruence(lp, lq, M, 1);
    if (sols.empty()) throw Error(ErrorCode::NotInSubgroup, "target is not a power of the base");
    x = sols[0] % N;
    report = ic.report();
  }
  if (generic::scalar_mul(group, P, x) != Q) throw Error(ErrorCode::VerificationFailed, "computed logarithm does not verify");
  rec.put("order", N);
  rec.put("algorithm", "index-calculus");
  rec.put("x", x);
  rec.put("op_count", report.relation_trials + report.individual_trials);
  rec.put("factor_base", report.fb_size);
  rec.put("relations", report.relations);
  rec.put("verified", "true");
}

// Generic or index calculus for F_{2^m}^*: compares sqrt of the largest prime
// factor with L(1/2, sqrt 2).
std::string auto_binary_alg(const ff::FieldSpec& k) {
  const u64 M = k.order() - 1;
  const u64 ell = ff::factorize(M).back().first;
  const analysis::real generic_log = 0.5L * std::log(static_cast<analysis::real>(ell));
  const analysis::real ic_log =
      analysis::subexp_log(analysis::SubexpParams::from_bits(0.5L, std::sqrt(2.0L), static_cast<analysis::real>(k.degree())));
  return ic_log < generic_log ? "index-calculus" : "ph";
}

void dlog_curve(Record& rec, const curve::HyperellipticCurve& C, const DlogArgs& a, const RunConfig& cfg) {
  curve::Jacobian J(C);
  ff::Rng rng(cfg.seed);
  const auto P = a.p == "random" ? curve::random_divisor(C, rng) : parse_divisor(C, a.p);
  const auto Q = a.q.rfind("mul:", 0) == 0 ? generic::scalar_mul(J, P, parse_u64(a.q.substr(4))) : parse_divisor(C, a.q);
  rec.put("P", divisor_text(P));
  rec.put("Q", divisor_text(Q));
  const u64 group_order = curve_order(C);
  const u64 N = a.order ? a.order : element_order(J, P, group_order);
  std::string alg = a.alg;
  if (alg == "auto") alg = auto_curve_alg(C.genus());
  if (alg == "index-calculus") alg = "harley";
  rec.put("genus", C.genus());
  rec.put("group_order", group_order);
  if (!is_curve_strategy(alg)) {
    finish_generic(rec, J, P, Q, group_order, alg, cfg, N);
    return;
  }
  curve_ic::DlogOptions o;
  o.strategy = curve_ic::parse_strategy(alg);
  o.seed = cfg.seed;
  o.workers = a.workers;
  o.budget_secs = cfg.budget_secs;
  curve_ic::DlogReport report;
  const u64 x = Q.is_identity() ? 0 : curve_ic::solve_jacobian_dlog(C, P, Q, N, o, &report);
  if (generic::scalar_mul(J, P, x) != Q) throw Error(ErrorCode::VerificationFailed, "computed logarithm does not verify");
  rec.put("order", N);
  rec.put("algorithm", alg);
  rec.put("x", x);
  rec.put("op_count", report.walk.steps);
  rec.put("relations", report.fulls + report.recombined);
  rec.put("ic_digits", report.ic_digits);
  rec.put("verified", "true");
}

void cmd_dlog(const DlogArgs& a, const RunConfig& cfg, Record& rec) {
  const auto colon = a.group.find(':');
  if (colon == std::string::npos) throw Error(ErrorCode::ParseError, "group spec must be kind:value");
  const std::string kind = a.group.substr(0, colon), arg = a.group.substr(colon + 1);
  rec.put("group", a.group);
  if (kind == "curve") {
    dlog_curve(rec, load_curve(arg), a, cfg);
    return;
  }
  const u64 P = parse_u64(a.p), Q = parse_u64(a.q);
  if (kind == "additive") {
    generic::AdditiveGroup g(parse_u64(arg));
    if (P >= g.modulus() || Q >= g.modulus()) throw Error(ErrorCode::DomainError, "element out of range");
    finish_generic(rec, g, P, Q, g.modulus(), a.alg, cfg, a.order);
    return;
  }
  ff::FieldSpec k = kind == "prime-field" ? ff::FieldSpec::prime(parse_u64(arg))
                    : kind == "binary-field" ? ff::FieldSpec::parse("binary:" + arg)
                                             : throw Error(ErrorCode::ParseError, "unknown group kind '" + kind + "'");
  if (P == 0 || Q == 0 || P >= k.order() || Q >= k.order()) throw Error(ErrorCode::DomainError, "element out of range");
  std::string alg = a.alg;
  if (alg == "auto" && k.is_binary()) alg = auto_binary_alg(k);
  if (alg == "index-calculus") {
    if (!k.is_binary()) throw Error(ErrorCode::ParseError, "index calculus is implemented for binary fields only");
    dlog_binary_ic(rec, k, P, Q, a, cfg);
    return;
  }
  generic::FieldMultGroup g(k);
  finish_generic(rec, g, P, Q, g.order(), alg, cfg, a.order);
}

// ---------------------------------------------------------------- group-order

struct GroupOrderArgs {
  std::string curve;
  bool snf = false;
  unsigned fb_degree = 1;
  std::size_t snf_columns = 300;
};

void cmd_group_order(const GroupOrderArgs& a, const RunConfig& cfg, Record& rec) {
  const auto C = load_curve(a.curve);
  curve::JacobianOrderOptions o;
  o.cap = 1'000'000'000'000'000'000ULL;
  o.seed = cfg.seed;
  const auto rep = curve::jacobian_order_report(C, o);
  const auto weil = curve::weil_interval(C.q(), C.genus());
  if (rep.order < weil.lo || rep.order > weil.hi) {
    throw Error(ErrorCode::VerificationFailed, "order outside the Weil interval");
  }
  rec.put("curve", hex64(fnv1a(C.to_text())));
  rec.put("q", C.q());
  rec.put("genus", C.genus());
  rec.put("order", rep.order);
  rec.put("weil_lo", weil.lo);
  rec.put("weil_hi", weil.hi);
  std::string counts;
  for (std::size_t i = 0; i < rep.counts.size(); ++i) counts += (i ? "," : "") + std::to_string(rep.counts[i]);
  rec.put("point_counts", counts);
  rec.put("method", rep.from_zeta_only ? "zeta" : "zeta+interval");
  if (!a.snf) return;
  const auto fb = curve_ic::build_factor_base(C, a.fb_degree);
  if (fb.columns.size() > a.snf_columns) {
    throw Error(ErrorCode::CapExceeded, "factor base has " + std::to_string(fb.columns.size()) + " columns, above --snf-columns");
  }
  curve_ic::AdhParams ap;
  ap.count = fb.columns.size() * 3;
  ap.seed = cfg.seed;
  ap.max_trials = 200'000'000;
  const auto gs = curve_ic::group_structure(curve_ic::adh_relations(C, fb, ap), fb);
  std::string inv;
  for (std::size_t i = 0; i < gs.invariants.size(); ++i) inv += (i ? "," : "") + gs.invariants[i].str();
  rec.put("invariants", inv.empty() ? "1" : inv);
  rec.put("snf_order", gs.order.str());
  rec.put("snf_agrees", gs.order == rep.order ? "true" : "false");
  if (gs.order != rep.order) throw Error(ErrorCode::VerificationFailed, "class-group order disagrees with the zeta order");
}

// ---------------------------------------------------------------- relations

struct RelationsArgs {
  std::string curve;
  std::string strategy = "double_lp";
  std::size_t count = 100;
  double r = -1;
  unsigned fb_degree = 1;
  unsigned workers = 1;
};

void cmd_relations(const RelationsArgs& a, const RunConfig& cfg) {
  const auto start = Clock::now();
  const auto C = load_curve(a.curve);
  const auto strategy = curve_ic::parse_strategy(a.strategy);
  const u64 N = curve_order(C);
  const u64 ell = ff::factorize(N).back().first;
  ff::Rng rng(cfg.seed);
  const auto P = curve_ic::random_subgroup_element(C, N, ell, rng);
  const auto Q = curve_ic::random_subgroup_element(C, N, ell, rng);
  const double r = a.r < 0 ? curve_ic::default_exponent(strategy, C.genus()) : a.r;
  const auto fb = curve_ic::build_factor_base(C, a.fb_degree, r);
  curve_ic::WalkParams wp;
  wp.ell = ell;
  wp.count = a.count;
  wp.max_lp = curve_ic::max_large_primes(strategy);
  wp.seed = cfg.seed;
  wp.budget_secs = cfg.budget_secs;
  wp.workers = a.workers;
  curve_ic::WalkStats st;
  auto rels = curve_ic::walk_relations(C, P, Q, fb, wp, &st);
  // worker threads append in arrival order
  std::sort(rels.begin(), rels.end(), [](const auto& x, const auto& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); });

  nlohmann::json header{{"curve", hex64(fnv1a(C.to_text()))},
                        {"field", C.field().to_string()},
                        {"genus", C.genus()},
                        {"fb", {{"B", fb.B}, {"r", r}, {"columns", fb.columns.size()}, {"large", fb.large_pairs.size()}}},
                        {"strategy", a.strategy},
                        {"seed", cfg.seed},
                        {"ell", ell},
                        {"P", divisor_text(P)},
                        {"Q", divisor_text(Q)}};
  std::ostringstream body;
  body << "# " << header.dump() << "\n";
  curve_ic::write_relations(body, rels);
  if (cfg.out.empty()) {
    std::cout << body.str();
  } else {
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) throw Error(ErrorCode::ParseError, "cannot write " + cfg.out);
    f << body.str();
  }
  // summary on stderr when the relations themselves go to stdout
  std::ostream& os = cfg.out.empty() ? std::cerr : std::cout;
  os << "seed=" << cfg.seed << "\nrelations=" << rels.size() << "\nsteps=" << st.steps << "\nfull=" << st.full
     << "\nsingle=" << st.single << "\ndouble=" << st.twice << "\nrejected=" << st.rejected << "\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", std::chrono::duration<double>(Clock::now() - start).count());
  os << "wall_time=" << buf << "\n";
}

// ---------------------------------------------------------------- smoothness

struct SmoothnessArgs {
  unsigned m = 40;
  unsigned bound = 10;
  u64 samples = 100000;
};

// Number of monic irreducibles of degree d over F_2.
long double irreducible_count(unsigned d) {
  long double s = 0;
  for (unsigned e = 1; e <= d; ++e) {
    if (d % e) continue;
    unsigned n = d / e;
    int mu = 1;
    for (unsigned p = 2; p <= n; ++p) {
      if (n % p) continue;
      n /= p;
      if (n % p == 0) {
        mu = 0;
        break;
      }
      mu = -mu;
    }
    if (n != 1) mu = -mu;
    s += mu * std::ldexp(1.0L, static_cast<int>(e));
  }
  return s / d;
}

// Fraction of degree-m polynomials over F_2 that are bound-smooth, from
// prod_{d <= bound} (1 - x^d)^(-I_d).
long double exact_smooth_fraction(unsigned m, unsigned bound) {
  std::vector<long double> c(m + 1, 0);
  c[0] = 1;
  for (unsigned d = 1; d <= std::min(bound, m); ++d) {
    const long double I = irreducible_count(d);
    // multiply by (1 - x^d)^(-I): coefficient of x^(kd) is C(I + k - 1, k)
    std::vector<long double> next(m + 1, 0);
    for (unsigned i = 0; i <= m; ++i) {
      if (c[i] == 0) continue;
      long double binom = 1;
      for (unsigned k = 0; i + k * d <= m; ++k) {
        if (k) binom *= (I + k - 1) / k;
        next[i + k * d] += c[i] * binom;
      }
    }
    c = std::move(next);
  }
  return c[m] / std::ldexp(1.0L, static_cast<int>(m));
}

void cmd_smoothness(const SmoothnessArgs& a, const RunConfig& cfg, Record& rec) {
  if (a.m == 0 || a.m > 62 || a.bound == 0) throw Error(ErrorCode::DomainError, "need 1 <= m <= 62 and bound >= 1");
  const auto pred = analysis::polynomial_smoothness_prediction(a.m, a.bound);
  const long double exact = exact_smooth_fraction(a.m, a.bound);
  const ff::FieldSpec f2 = ff::FieldSpec::prime(2);
  ff::Rng rng(cfg.seed);
  u64 hits = 0;
  for (u64 i = 0; i < a.samples; ++i) {
    const u64 bits = rng.next() & ((u64{1} << a.m) - 1);
    std::vector<u64> coeffs(a.m + 1);
    for (unsigned j = 0; j < a.m; ++j) coeffs[j] = (bits >> j) & 1;
    coeffs[a.m] = 1;
    hits += poly::is_smooth(poly::Polynomial(f2, coeffs), a.bound);
  }
  const long double observed = a.samples ? static_cast<long double>(hits) / a.samples : 0;
  const long double sigma = a.samples ? std::sqrt(exact * (1 - exact) / a.samples) : 0;
  char buf[64];
  auto fmt = [&](long double v) {
    std::snprintf(buf, sizeof buf, "%.6Le", v);
    return std::string(buf);
  };
  rec.put("m", a.m);
  rec.put("bound", a.bound);
  rec.put("samples", a.samples);
  rec.put("predicted", fmt(pred.probability));
  rec.put("exact", fmt(exact));
  rec.put("observed", fmt(observed));
  rec.put("hits", hits);
  rec.put("z_score", fmt(sigma > 0 ? (observed - exact) / sigma : 0));
  rec.put("log2_prediction_ratio", fmt(exact > 0 && pred.probability > 0 ? std::log2(pred.probability / exact) : 0));
}

// ---------------------------------------------------------------- complexity-table

struct TableArgs {
  std::vector<long long> qs{101, 1009, 10007, 1000003};
  std::vector<int> gs{1, 2, 3, 4, 5, 6};
};

void cmd_complexity_table(const TableArgs& a, const RunConfig& cfg) {
  std::ostringstream os;
  os << "q,g,best,exponent,generic_exponent,harley,single_lp,double_lp\n";
  char buf[64];
  auto fmt = [&](analysis::real v) {
    std::snprintf(buf, sizeof buf, "%.6Lf", v);
    return std::string(buf);
  };
  for (const auto& row : analysis::crossover_table(a.qs, a.gs)) {
    os << row.q << ',' << row.g << ',' << analysis::to_string(row.best) << ',' << fmt(row.exponent) << ','
       << fmt(row.generic_exponent);
    for (auto f : {analysis::Family::harley, analysis::Family::single_lp, analysis::Family::double_lp}) {
      analysis::CostModel m;
      m.family = f;
      m.g = row.g;
      os << ',' << fmt(analysis::cost_exponent(m));
    }
    os << '\n';
  }
  std::cout << os.str();
  if (!cfg.out.empty()) {
    std::ofstream f(cfg.out, std::ios::binary);
    f << os.str();
  }
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
  std::string suite = "rho";
  std::vector<u64> sizes;
  unsigned reps = 5;
  unsigned genus = 4;
  std::string strategy = "double_lp";
};

struct BenchRow {
  u64 size;
  std::string strategy;
  unsigned reps;
  double ops;  // mean group operations (curve_ic: walk steps)
  double seconds;
  bool ok;
};

// Least-squares slope of log ops against log size, two smallest sizes dropped.
std::optional<double> fit_slope(const std::vector<BenchRow>& rows, bool on_time) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : rows) {
    if (r.ok) pts.emplace_back(std::log(static_cast<double>(r.size)), std::log(on_time ? r.seconds : r.ops));
  }
  std::sort(pts.begin(), pts.end());
  if (pts.size() < 4) return std::nullopt;
  pts.erase(pts.begin(), pts.begin() + 2);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(pts.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

BenchRow bench_rho(u64 bits, unsigned reps, u64 seed) {
  u64 N = (u64{1} << bits) - 1;
  while (!ff::is_prime(N)) --N;
  generic::AdditiveGroup g(N);
  ff::Rng rng(seed ^ (bits * 0x9e3779b97f4a7c15ULL));
  BenchRow row{N, "rho", reps, 0, 0, true};
  const auto start = Clock::now();
  for (unsigned i = 0; i < reps; ++i) {
    const u64 P = 1 + rng.below(N - 1);
    const u64 x = rng.below(N);
    generic::DlogInstance<generic::AdditiveGroup> inst{g, P, generic::scalar_mul(g, P, x), N};
    generic::SolveStats st;
    const u64 got = generic::pollard_rho(inst, generic::RhoParams{20, rng.next(), 10}, &st);
    if (got != x) throw Error(ErrorCode::VerificationFailed, "benchmark logarithm does not verify");
    row.ops += static_cast<double>(st.group_ops) / reps;
  }
  row.seconds = std::chrono::duration<double>(Clock::now() - start).count() / reps;
  return row;
}

// A random curve over F_q of the given genus whose Jacobian order is
// cofactor * ell with ell prime and cofactor <= 1000.
struct BenchCurve {
  curve::HyperellipticCurve C;
  u64 N, ell;
};

BenchCurve bench_curve(unsigned g, u64 q, ff::Rng& rng) {
  const ff::FieldSpec k = ff::FieldSpec::prime(q);
  for (;;) {
    std::vector<u64> f(2 * g + 2);
    for (auto& c : f) c = rng.below(q);
    f.back() = 1;
    try {
      curve::HyperellipticCurve C(g, poly::Polynomial(k, f), poly::Polynomial(k));
      const u64 N = curve_order(C);
      const auto fac = ff::factorize(N);
      const auto [ell, e] = fac.back();
      if (e == 1 && N / ell <= 1000) return {C, N, ell};
    } catch (const Error& e) {
      if (e.code() != ErrorCode::InvalidCurve) throw;
    }
  }
}

BenchRow bench_curve_ic(u64 q, const BenchArgs& a, const RunConfig& cfg) {
  ff::Rng rng(cfg.seed ^ (q * 0x9e3779b97f4a7c15ULL));
  const auto inst = bench_curve(a.genus, q, rng);
  curve::Jacobian J(inst.C);
  BenchRow row{q, a.strategy, a.reps, 0, 0, true};
  curve_ic::DlogOptions o;
  o.strategy = curve_ic::parse_strategy(a.strategy);
  o.budget_secs = cfg.budget_secs;
  // small batches so the step count tracks the work actually needed
  o.first_batch = 2000;
  const auto fb = curve_ic::build_factor_base(inst.C, 1, curve_ic::default_exponent(o.strategy, a.genus));
  const auto start = Clock::now();
  for (unsigned i = 0; i < a.reps; ++i) {
    const auto P = curve_ic::random_subgroup_element(inst.C, inst.N, inst.ell, rng);
    const u64 x = 1 + rng.below(inst.ell - 1);
    const auto Q = generic::scalar_mul(J, P, x);
    o.seed = rng.next();
    curve_ic::DlogReport rep;
    try {
      if (curve_ic::subgroup_dlog(inst.C, P, Q, inst.ell, fb, o, &rep) != x) {
        throw Error(ErrorCode::VerificationFailed, "benchmark logarithm does not verify");
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::TimeBudgetExceeded) throw;
      row.ok = false;
      break;
    }
    row.ops += static_cast<double>(rep.walk.steps) / a.reps;
  }
  row.seconds = std::chrono::duration<double>(Clock::now() - start).count() / a.reps;
  return row;
}

void cmd_bench(const BenchArgs& a, const RunConfig& cfg) {
  std::vector<u64> sizes = a.sizes;
  if (sizes.empty() && a.suite == "rho") sizes = {20, 22, 24, 26, 28, 30, 32, 34};
  if (sizes.empty() && a.suite == "curve_ic") sizes = {211, 401, 809, 1601, 3001};
  if (a.suite != "rho" && a.suite != "curve_ic" && a.suite != "empty") {
    throw Error(ErrorCode::ParseError, "unknown suite '" + a.suite + "'");
  }
  if (a.suite == "empty") sizes.clear();
  if (a.reps == 0) throw Error(ErrorCode::DomainError, "reps must be positive");
  std::sort(sizes.begin(), sizes.end());
  std::vector<BenchRow> rows;
  std::ostringstream file;
  std::ostringstream screen;
  file << "size,strategy,reps,mean_ops,status\n";
  screen << "size,strategy,reps,mean_ops,status,wall_time\n";
  for (u64 s : sizes) {
    const auto row = a.suite == "rho" ? bench_rho(s, a.reps, cfg.seed) : bench_curve_ic(s, a, cfg);
    rows.push_back(row);
    char buf[160];
    std::snprintf(buf, sizeof buf, "%llu,%s,%u,%.1f,%s", static_cast<unsigned long long>(row.size),
                  row.strategy.c_str(), row.reps, row.ops, row.ok ? "ok" : "budget_exceeded");
    file << buf << "\n";
    screen << buf;
    std::snprintf(buf, sizeof buf, ",%.4f\n", row.seconds);
    screen << buf;
  }
  if (auto slope = fit_slope(rows, false)) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "# ops_exponent=%.4f\n", *slope);
    file << buf;
    screen << buf;
    std::snprintf(buf, sizeof buf, "# time_exponent=%.4f\n", *fit_slope(rows, true));
    screen << buf;
  }
  std::cout << screen.str();
  if (!cfg.out.empty()) {
    std::ofstream f(cfg.out, std::ios::binary);
    f << file.str();
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete logarithm toolkit for finite fields and hyperelliptic Jacobians"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig cfg;
  auto* seed_opt = app.add_option("--seed", cfg.seed, "RNG seed (default: random, always printed)");
  app.add_option("--budget-secs", cfg.budget_secs, "Time budget in seconds")->check(CLI::PositiveNumber);
  app.add_option("--mem-cap-mb", cfg.mem_cap_mb, "Memory cap in MiB for tables")->check(CLI::PositiveNumber);
  app.add_option("--out", cfg.out, "Write the result record (without wall_time) to this file");

  DlogArgs dl;
  auto* dlog = app.add_subcommand("dlog", "Solve x with x*P = Q");
  dlog->add_option("--group", dl.group,
                   "prime-field:p | binary-field:m[:modulus] | additive:N | curve:<file>")
      ->required();
  dlog->add_option("--p", dl.p, "Base element; curve: 'u0,u1,..|v0,..' or random")->required();
  dlog->add_option("--q", dl.q, "Target element; curve: 'u|v' or mul:<k> for k*P")->required();
  dlog->add_option("--alg", dl.alg, "Algorithm")
      ->check(CLI::IsMember({"exhaustive", "bsgs", "rho", "prho", "ph", "auto", "index-calculus", "full_b", "harley",
                             "single_lp", "double_lp"}));
  dlog->add_option("--order", dl.order, "Order of P if known");
  dlog->add_option("--workers", dl.workers, "Relation-collection threads")->check(CLI::PositiveNumber);

  GroupOrderArgs go;
  auto* gorder = app.add_subcommand("group-order", "Jacobian order and optional invariant factors");
  gorder->add_option("--curve", go.curve, "Curve file")->required();
  gorder->add_flag("--snf", go.snf, "Also compute the group structure from ADH relations");
  gorder->add_option("--fb-degree", go.fb_degree, "Factor-base degree bound for --snf");
  gorder->add_option("--snf-columns", go.snf_columns, "Largest relation lattice attempted by --snf");

  RelationsArgs ra;
  auto* rel = app.add_subcommand("relations", "Collect curve relations for a random P, Q");
  rel->add_option("--curve", ra.curve, "Curve file")->required();
  rel->add_option("--strategy", ra.strategy)->check(CLI::IsMember({"full_b", "harley", "single_lp", "double_lp"}));
  rel->add_option("--count", ra.count, "Relations to collect");
  rel->add_option("--r", ra.r, "Factor-base size exponent (default per strategy)");
  rel->add_option("--fb-degree", ra.fb_degree);
  rel->add_option("--workers", ra.workers)->check(CLI::PositiveNumber);

  SmoothnessArgs sa;
  auto* sm = app.add_subcommand("smoothness", "Smoothness of random F_2[X] polynomials: prediction, exact, sampled");
  sm->add_option("--m", sa.m, "Degree");
  sm->add_option("--bound", sa.bound, "Smoothness degree bound");
  sm->add_option("--samples", sa.samples);

  TableArgs ta;
  auto* table = app.add_subcommand("complexity-table", "Cost exponents and the best family per (q, g) as CSV");
  table->add_option("--qs", ta.qs)->delimiter(',');
  table->add_option("--gs", ta.gs)->delimiter(',');

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Scaling benchmark as CSV with a log-log exponent fit");
  bench->add_option("--suite", ba.suite, "rho | curve_ic | empty");
  bench->add_option("--sizes", ba.sizes, "rho: bit sizes; curve_ic: primes q")->delimiter(',');
  bench->add_option("--reps", ba.reps);
  bench->add_option("--genus", ba.genus);
  bench->add_option("--strategy", ba.strategy)->check(CLI::IsMember({"full_b", "harley", "single_lp", "double_lp"}));

  CLI11_PARSE(app, argc, argv);
  if (seed_opt->count() == 0) cfg.seed = std::random_device{}() | (u64{std::random_device{}()} << 32);
  const auto start = Clock::now();
  try {
    Record rec;
    rec.put("seed", cfg.seed);
    if (*dlog) {
      cmd_dlog(dl, cfg, rec);
      rec.finish(cfg, start);
    } else if (*gorder) {
      cmd_group_order(go, cfg, rec);
      rec.finish(cfg, start);
    } else if (*sm) {
      cmd_smoothness(sa, cfg, rec);
      rec.finish(cfg, start);
    } else if (*rel) {
      cmd_relations(ra, cfg);
    } else if (*table) {
      cmd_complexity_table(ta, cfg);
    } else if (*bench) {
      std::cerr << "seed=" << cfg.seed << "\n";
      cmd_bench(ba, cfg);
    }
  } catch (const Error& e) {
    std::cerr << "error=" << to_string(e.code()) << "\nmessage=" << e.what() << "\n";
    return 2;
  }
  return 0;
}

#include "dlkit/analysis/analysis.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <algorithm>

#include "dlkit/error.hpp"

namespace dlkit::analysis {

namespace {

void domain(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::DomainError, what);
}

real adaptive_simpson(const std::function<real(real)>& f, real a, real b, real fa, real fm, real fb, real whole,
                      real eps, int depth) {
  const real m = (a + b) / 2, lm = (a + m) / 2, rm = (m + b) / 2;
  const real flm = f(lm), frm = f(rm);
  const real left = (m - a) / 6 * (fa + 4 * flm + fm);
  const real right = (b - m) / 6 * (fm + 4 * frm + fb);
  const real diff = left + right - whole;
  if (depth <= 0 || std::fabs(diff) <= 15 * eps) return left + right + diff / 15;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, eps / 2, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, eps / 2, depth - 1);
}

// Tolerance relative to the first Simpson estimate; rho spans many orders of magnitude.
real integrate(const std::function<real(real)>& f, real a, real b, real rel = 1e-14L) {
  if (b <= a) return 0;
  const real fa = f(a), fb = f(b), fm = f((a + b) / 2);
  const real whole = (b - a) / 6 * (fa + 4 * fm + fb);
  const real eps = std::max(std::fabs(whole) * rel, std::numeric_limits<real>::min());
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, eps, 40);
}

}  // namespace

SubexpParams SubexpParams::from_bits(real alpha, real c, real bits) {
  return {alpha, c, bits * std::log(2.0L)};
}

SubexpParams SubexpParams::from_int(real alpha, real c, const ff::BigInt& n) {
  domain(n > 0, "N must be positive");
  // log via the top 64 bits and the bit length
  const unsigned bits = static_cast<unsigned>(boost::multiprecision::msb(n)) + 1;
  const unsigned shift = bits > 64 ? bits - 64 : 0;
  const ff::BigInt top = n >> shift;
  const real mant = static_cast<real>(static_cast<unsigned long long>(top));
  return {alpha, c, std::log(mant) + shift * std::log(2.0L)};
}

real subexp_log(const SubexpParams& p) {
  domain(p.alpha > 0 && p.alpha <= 1, "alpha must lie in (0, 1]");
  domain(p.c > 0, "c must be positive");
  domain(p.log_n >= std::log(16.0L), "N must be at least 16");
  const real ll = std::log(p.log_n);
  return p.c * std::pow(p.log_n, p.alpha) * std::pow(ll, 1 - p.alpha);
}

real subexp_eval(const SubexpParams& p) { return std::exp(subexp_log(p)); }

real subexp_eval_decomposed(const SubexpParams& p) {
  subexp_log(p);  // domain checks
  const real ll = std::log(p.log_n);
  const real lll = std::log(ll);
  return std::exp(p.c * std::exp(p.alpha * ll + (1 - p.alpha) * lll));
}

// Grid built from u rho(u) = integral of rho over [u-1, u], a sum of positive
// terms, so relative accuracy survives the super-exponential decay (the
// forward form rho(u) = rho(k) - integral loses digits to cancellation).
// Cell integrals use the Hermite rule h(y0+y1)/2 + h^2(d0-d1)/12 with
// derivatives from the delay equation; the newest cell is solved implicitly.
DickmanEvaluator::DickmanEvaluator(real u_max, unsigned steps_per_unit)
    : u_max_(u_max), per_unit_(steps_per_unit), h_(1.0L / steps_per_unit) {
  const std::size_t K = static_cast<std::size_t>(std::ceil(u_max * steps_per_unit)) + 1;
  grid_.assign(K + 1, 1.0L);
  std::vector<real> cell(K + 1, h_);  // integral over [t_j, t_j + h]; cells inside [0, 1] are h
  for (std::size_t k = per_unit_ + 1; k <= K; ++k) {
    const real u = k * h_;
    real window = 0;
    for (std::size_t j = k - 1; j-- > k - per_unit_;) window += cell[j];
    const real y0 = grid_[k - 1];
    const real d0 = -grid_[k - 1 - per_unit_] / ((k - 1) * h_);
    const real d1 = -grid_[k - per_unit_] / u;
    const real y1 = (window + h_ / 2 * y0 + h_ * h_ / 12 * (d0 - d1)) / (u - h_ / 2);
    grid_[k] = y1;
    cell[k - 1] = h_ / 2 * (y0 + y1) + h_ * h_ / 12 * (d0 - d1);
  }
}

real DickmanEvaluator::interpolate(real t) const {
  if (t <= 1) return 1;
  std::size_t j = static_cast<std::size_t>(t / h_);
  if (j + 1 >= grid_.size()) j = grid_.size() - 2;
  const real t0 = j * h_;
  const real y0 = grid_[j], y1 = grid_[j + 1];
  auto dr = [&](std::size_t node) { return -grid_[node - per_unit_] / (node * h_); };
  const real d0 = dr(j), d1 = dr(j + 1);
  const real x = (t - t0) / h_;
  const real h00 = (1 + 2 * x) * (1 - x) * (1 - x), h10 = x * (1 - x) * (1 - x);
  const real h01 = x * x * (3 - 2 * x), h11 = x * x * (x - 1);
  return h00 * y0 + h10 * h_ * d0 + h01 * y1 + h11 * h_ * d1;
}

real DickmanEvaluator::integrate_from_node(std::size_t node, real u) const {
  (void)node;
  // u rho(u) = integral over [u - 1, u], split at the integers where rho' jumps
  const real lo = u - 1;
  real acc = 0, a = lo;
  for (real b = std::floor(lo) + 1; a < u; b += 1) {
    const real e = std::min(b, u);
    acc += integrate([this](real t) { return interpolate(t); }, a, e);
    a = e;
  }
  return acc / u;
}

real DickmanEvaluator::operator()(real u) const {
  domain(u >= 0 && u <= u_max_, "u outside the tabulated range");
  if (u <= 1) return 1;
  const std::size_t node = static_cast<std::size_t>(u / h_);
  if (node * h_ == u) return grid_[node];
  return integrate_from_node(node, u);
}

real DickmanEvaluator::derivative(real u) const {
  if (u <= 1) return 0;
  return -(*this)(u - 1) / u;
}

real dickman_rho(real u) {
  static const DickmanEvaluator eval;
  return eval(u);
}

SmoothnessPrediction smoothness_probability(real alpha, real c, real beta, real d, real log_n) {
  domain(beta > 0 && beta < alpha && alpha <= 1, "need 0 < beta < alpha <= 1");
  domain(c > 0 && d > 0, "need c, d > 0");
  SmoothnessPrediction p;
  p.alpha = alpha - beta;
  p.c = (alpha - beta) * c / d;
  p.classical = alpha == 1 && c == 1 && beta == 0.5L;
  p.log_probability = -subexp_log({p.alpha, p.c, log_n});
  p.probability = std::exp(p.log_probability);
  return p;
}

SmoothnessPrediction polynomial_smoothness_prediction(unsigned m, unsigned B) {
  domain(m >= 4 && B >= 1, "need m >= 4 and B >= 1");
  const real log_n = m * std::log(2.0L);
  const real d = B * std::log(2.0L) / std::sqrt(log_n * std::log(log_n));
  return smoothness_probability(1, 1, 0.5L, d, log_n);
}

std::string_view to_string(Family f) {
  switch (f) {
    case Family::generic: return "generic";
    case Family::gaudry_full: return "gaudry_full";
    case Family::harley: return "harley";
    case Family::single_lp: return "single_lp";
    case Family::double_lp: return "double_lp";
    case Family::diem_lines: return "diem_lines";
    case Family::l12_framework: return "l12_framework";
    case Family::enge_adh: return "enge_adh";
    case Family::l13: return "l13";
  }
  return "unknown";
}

Family parse_family(std::string_view s) {
  for (Family f : {Family::generic, Family::gaudry_full, Family::harley, Family::single_lp, Family::double_lp,
                   Family::diem_lines, Family::l12_framework, Family::enge_adh, Family::l13}) {
    if (to_string(f) == s) return f;
  }
  throw Error(ErrorCode::ParseError, "unknown cost family '" + std::string(s) + "'");
}

real l13_c(real a0, real b0) {
  domain(a0 > 0 && b0 > 0, "need a0, b0 > 0");
  const real p = 4.0L / 9 * a0, q = 4.0L / 9 * b0;
  return (p + std::sqrt(p * p + 4 * q)) / 2;
}

real cost_exponent(const CostModel& m) {
  const real g = m.g;
  switch (m.family) {
    case Family::generic:
      domain(m.g >= 1, "genus must be at least 1");
      return g / 2;
    case Family::gaudry_full:
      domain(m.g >= 1, "genus must be at least 1");
      return 2;
    case Family::harley:
      domain(m.g >= 1, "genus must be at least 1");
      return 2 - 2 / (g + 1);
    case Family::single_lp:
      domain(m.g >= 1, "genus must be at least 1");
      return 2 - 4 / (2 * g + 1);
    case Family::double_lp:
      domain(m.g >= 2, "double large primes need genus at least 2");
      return 2 - 2 / g;
    case Family::diem_lines:
      domain(m.d >= 4, "plane degree must be at least 4");
      return 2 - 2.0L / (m.d - 2);
    case Family::l12_framework:
      domain(m.theta > 0, "theta must be positive");
      return std::sqrt(2.0L) + 2 / m.theta;
    case Family::enge_adh: {
      domain(m.theta > 0, "theta must be positive");
      const real t = 3 / (2 * m.theta);
      return 5 / std::sqrt(6.0L) * (std::sqrt(1 + t) + std::sqrt(t));
    }
    case Family::l13: {
      const real c = l13_c(m.a0, m.b0);
      return 4.0L / 3 * std::sqrt(m.a0 * c + m.b0);
    }
  }
  return 0;
}

std::vector<CrossoverRow> crossover_table(const std::vector<long long>& qs, const std::vector<int>& gs) {
  std::vector<CrossoverRow> out;
  for (long long q : qs) {
    for (int g : gs) {
      const real gen = cost_exponent({Family::generic, g});
      CrossoverRow row{q, g, Family::generic, gen, gen};
      for (Family f : {Family::gaudry_full, Family::harley, Family::single_lp, Family::double_lp}) {
        if (f == Family::double_lp && g < 2) continue;
        const real e = cost_exponent({f, g});
        if (e < row.exponent - 1e-12L) {
          row.exponent = e;
          row.best = f;
        }
      }
      out.push_back(row);
    }
  }
  return out;
}

real genus3_key_length_penalty() {
  return cost_exponent({Family::generic, 3}) / cost_exponent({Family::double_lp, 3}) - 1;
}

}  // namespace dlkit::analysis

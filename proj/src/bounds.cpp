#include "mcm/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace mcm {

namespace {

double alpha_root(double alpha) { return std::sqrt(alpha * (2 - alpha)); }

long round_up_multiple_of_7(double x) {
  if (x < 7) return 7;
  const long k = static_cast<long>(std::ceil(x / 7.0));
  return 7 * k;
}

}  // namespace

double q_value(double delta, double gamma, double alpha) {
  if (!(delta > 0 && 14 * delta < 1)) throw std::domain_error("q_value: delta must lie in (0, 1/14)");
  const double denom = 1 - 14 * alpha - 14 * delta;
  if (!(alpha > 0) || denom <= 0)
    throw std::domain_error("q_value: alpha must lie in (0, (1-14*delta)/14)");
  return (1 - gamma) / (2 * delta) - 7 * gamma / denom;
}

double inequality_rhs(double q, double K, double alpha, long N0) {
  const double n = static_cast<double>(N0);
  return 196.0 * K * K * K * K * (4.0 / n + 4.0 / (n * n)) +
         28.0 * q * K * K * alpha_root(alpha);
}

BoundWitness contradiction_holds(double delta, double gamma, double K, double alpha, long N0) {
  BoundWitness w;
  w.K = K;
  w.alpha = alpha;
  w.N0 = N0;
  if (!(K > 0)) throw std::domain_error("contradiction_holds: K must be positive");
  if (N0 < 7) throw std::domain_error("contradiction_holds: N0 must be >= 7");
  w.q = q_value(delta, gamma, alpha);
  w.Delta_per_h = w.q / K;
  w.Omega = w.q * static_cast<double>(N0) / (14 * K) -
                  K * static_cast<double>(N0) * alpha_root(alpha);
  if (w.q <= 0) {
    w.valid = false;
    w.contradiction = false;
    w.note = "q <= 0: no contradiction derivable";
    return w;
  }
  w.valid = true;
  w.lhs = w.q * w.q;
  w.rhs = inequality_rhs(w.q, K, alpha, N0);
  w.contradiction = w.lhs > w.rhs;
  return w;
}

std::optional<BoundWitness> find_witness(double delta, double gamma, double K,
                                         const WitnessSearchLimits& limits) {
  if (!(delta > 0 && 14 * delta < 1)) throw std::domain_error("find_witness: delta must lie in (0, 1/14)");
  if (!(gamma > 0 && gamma < 1 - 14 * delta))
    throw std::domain_error("find_witness: gamma must lie in (0, 1-14*delta)");
  if (!(K > 0)) throw std::domain_error("find_witness: K must be positive");

  std::optional<BoundWitness> best;
  double alpha = (1 - 14 * delta) / 28;
  for (int step = 0; step < limits.alpha_steps; ++step, alpha /= 2) {
    double q;
    try {
      q = q_value(delta, gamma, alpha);
    } catch (const std::domain_error&) {
      continue;
    }
    if (q <= 0) continue;
    const double tail = 28 * q * K * K * alpha_root(alpha);
    const double head = q * q - tail;
    if (head <= 0) continue;  // even N0 -> infinity cannot close the gap
    // 196*K^4*(4/N + 4/N^2) < head, i.e. 4u^2 + 4u < c with u = 1/N:
    // u < (sqrt(1+c) - 1)/2.
    const double c = head / (196 * K * K * K * K);
    const double u = (std::sqrt(1 + c) - 1) / 2;
    if (!(u > 0)) continue;
    long N0 = round_up_multiple_of_7(1.0 / u);
    BoundWitness w = contradiction_holds(delta, gamma, K, alpha, N0);
    // Guard the closed-form solve against rounding at the boundary.
    while (!w.contradiction && N0 <= limits.max_N0) {
      N0 += 7;
      w = contradiction_holds(delta, gamma, K, alpha, N0);
    }
    if (!w.contradiction || N0 > limits.max_N0) continue;
    if (!best || w.N0 < best->N0) best = w;
  }
  return best;
}

double excluded_stretch(double delta, double gamma, long N_available, int alpha_steps) {
  if (N_available < 7) throw std::domain_error("excluded_stretch: N_available must be >= 7");
  // The right hand side is strictly increasing in K, so a contradiction at K
  // implies one at every K' <= K; it suffices to test the top of the range.
  auto contradicts_at = [&](double K) {
    double alpha = (1 - 14 * delta) / 28;
    for (int step = 0; step < alpha_steps; ++step, alpha /= 2) {
      double q;
      try {
        q = q_value(delta, gamma, alpha);
      } catch (const std::domain_error&) {
        continue;
      }
      if (q <= 0) continue;
      if (q * q > inequality_rhs(q, K, alpha, N_available)) return true;
    }
    return false;
  };

  double lo = 1e-9;
  if (!contradicts_at(lo)) return 0;
  double hi = lo;
  while (contradicts_at(hi) && hi < 1e12) hi *= 2;
  if (hi >= 1e12) return hi;  // no ceiling within range (not expected)
  while ((hi - lo) / hi > 1e-3) {
    const double mid = 0.5 * (lo + hi);
    if (contradicts_at(mid))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

}  // namespace mcm

#pragma once

#include <optional>
#include <string>
#include <vector>

namespace mcm {

// One evaluation of the contradiction inequality
//   q^2 > 196*K^4*(4/N0 + 4/N0^2) + 28*q*K^2*sqrt(alpha*(2-alpha)).
// Delta_per_h = q/K is the per-h height-change bound; Omega is evaluated at
// N = N0, b = N0*h, normalized to h = 1.
struct BoundWitness {
  double K = 0;
  double alpha = 0;
  long N0 = 0;
  double q = 0;
  double Delta_per_h = 0;
  double Omega = 0;
  double lhs = 0;  // q^2
  double rhs = 0;
  bool contradiction = false;
  bool valid = false;  // preconditions held and q > 0
  std::string note;
};

// q(alpha, gamma, delta) = (1-gamma)/(2*delta) - 7*gamma/(1-14*alpha-14*delta).
// Throws std::domain_error when 1 - 14*alpha - 14*delta <= 0 or delta is
// outside (0, 1/14).
double q_value(double delta, double gamma, double alpha);

// Right hand side of the final inequality for a given admissible q.
double inequality_rhs(double q, double K, double alpha, long N0);

BoundWitness contradiction_holds(double delta, double gamma, double K, double alpha, long N0);

struct WitnessSearchLimits {
  int alpha_steps = 64;          // geometric grid, ratio 1/2, from (1-14*delta)/28
  long max_N0 = 7L * 1000000000L;
};

// Scans alpha downward on the geometric grid, solving the smallest N0
// (multiple of 7) that makes the inequality strict; returns the witness with
// minimal N0, ties resolved toward larger alpha. Deterministic.
std::optional<BoundWitness> find_witness(double delta, double gamma, double K,
                                         const WitnessSearchLimits& limits = {});

// Largest K (binary search to 1e-3 relative) such that every K' <= K admits
// an alpha on the search grid with a contradiction at some N0 <= N_available.
// Returns 0 when no stretch constant is excluded.
double excluded_stretch(double delta, double gamma, long N_available,
                        int alpha_steps = 64);

}  // namespace mcm

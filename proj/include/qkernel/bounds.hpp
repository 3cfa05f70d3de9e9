#pragma once

#include "qkernel/kernels.hpp"
#include "qkernel/linalg.hpp"

#include <cstdint>
#include <vector>

namespace qkernel {

// Raw generalization-bound terms for a noisy quantum kernel. No hidden
// logarithmic constants are applied.
struct BoundReport {
  std::size_t n = 0;
  Shots shots;
  int num_qubits = 0;
  double p = 0.0;
  double delta = 0.0;
  double c1 = 0.0;           // Y^T Q^-1 Y
  double c_q = 0.0;          // ||Q^-1||_2
  double c2 = 0.0;           // clamped at 0
  double term_ideal = 0.0;   // sqrt(c1 / n)
  double term_noise = 0.0;   // sqrt(n / (c2 sqrt(m))), +inf when c2 == 0
  double breakdown_p = 0.0;
};

// c2 = max( c_Q^-2 (sqrt(log(4 n^2 / delta) / 2) + sqrt(m) p (1 + 2^-(N+1)))^-1
//           - (n / sqrt(m)) c_Q^-1, 0 )
double bound_c2(double c_q, std::size_t n, double m, double p, int num_qubits, double delta);

// sqrt(n / (c2 sqrt(m))) with the infinite-shot limit handled in closed form:
// as m -> inf, c2 sqrt(m) -> c_Q^-2 / (p k) - n c_Q^-1 (k = 1 + 2^-(N+1)), and
// the term vanishes when p == 0.
double bound_noise_term(double c_q, std::size_t n, Shots shots, double p, int num_qubits,
                        double delta);

// 1 / (n c_Q (1 + 2^-(N+1))).
double breakdown_threshold_from(double c_q, std::size_t n, int num_qubits);

// Q is regularized by `ridge` before inversion; c_Q = 1 / lambda_min(Q + ridge I).
BoundReport theorem1_bound(const SymMatrix& q, const std::vector<int>& labels, Shots shots,
                           const NoiseModel& noise, int num_qubits, double delta,
                           double ridge = 0.0);

double breakdown_threshold(const SymMatrix& q, std::size_t n, int num_qubits, double ridge = 0.0);

struct SaturationReport {
  std::size_t n = 0;
  double s2 = 0.0;       // ||Q^-1 - W^-1||_2
  double s_frob = 0.0;   // ||Q^-1 - W^-1||_F
  bool pass = true;      // s2 >= s_frob / sqrt(n)
  double sqrt_s2 = 0.0;
  double epsilon = 0.0;  // mean |(Q^-1 - W^-1)_ij|
  double lower = 0.0;    // sqrt(sqrt(n) epsilon), plotting aid only
};

SaturationReport saturation_diagnostic(const SymMatrix& q, const SymMatrix& w_hat, double ridge);

struct HoeffdingReport {
  double q = 0.0;
  std::int64_t m = 0;
  double gap = 0.0;
  std::size_t trials = 0;
  std::size_t violations = 0;
  double empirical = 0.0;
  double bound = 0.0;   // 2 exp(-gap^2 m / 2)
  double slack = 0.0;
  bool pass = false;
};

// Monte-Carlo rate of |mean_m - q| >= gap / 2 over independent m-shot means.
HoeffdingReport hoeffding_violation_test(double q, std::int64_t m, double gap, std::size_t trials,
                                         std::uint64_t seed);

}  // namespace qkernel

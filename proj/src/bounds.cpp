#include "qkernel/bounds.hpp"

#include "qkernel/errors.hpp"
#include "qkernel/learner.hpp"
#include "qkernel/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qkernel {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double noise_factor(int num_qubits) { return 1.0 + std::ldexp(1.0, -(num_qubits + 1)); }

double confidence_term(std::size_t n, double delta) {
  const double nn = static_cast<double>(n);
  return std::sqrt(0.5 * std::log(4.0 * nn * nn / delta));
}

void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw InputError("confidence delta must lie in (0, 1)");
}

// c_Q = ||(Q + ridge I)^-1||_2 for PSD Q.
double inverse_norm(const EigenDecomposition& eig, double ridge) {
  const double scale = std::max(1.0, std::abs(eig.max()));
  if (eig.min() < -1e-9 * scale) throw NotPsdError("bound: Q is not PSD");
  const double smallest = eig.min() + ridge;
  if (smallest <= 1e-14) throw SingularError("bound: Q + ridge I is singular");
  return 1.0 / smallest;
}

}  // namespace

double bound_c2(double c_q, std::size_t n, double m, double p, int num_qubits, double delta) {
  check_delta(delta);
  const double root_m = std::sqrt(m);
  const double denom = confidence_term(n, delta) + root_m * p * noise_factor(num_qubits);
  const double c2 = 1.0 / (c_q * c_q * denom) - static_cast<double>(n) / root_m / c_q;
  return std::max(c2, 0.0);
}

double bound_noise_term(double c_q, std::size_t n, Shots shots, double p, int num_qubits,
                        double delta) {
  const double nn = static_cast<double>(n);
  if (shots.is_infinite()) {
    if (p == 0.0) return 0.0;
    const double scaled_c2 = 1.0 / (c_q * c_q * p * noise_factor(num_qubits)) - nn / c_q;
    return scaled_c2 > 0.0 ? std::sqrt(nn / scaled_c2) : kInf;
  }
  const double m = static_cast<double>(*shots.count);
  const double c2 = bound_c2(c_q, n, m, p, num_qubits, delta);
  if (c2 == 0.0) return kInf;
  return std::sqrt(nn / (c2 * std::sqrt(m)));
}

double breakdown_threshold_from(double c_q, std::size_t n, int num_qubits) {
  return 1.0 / (static_cast<double>(n) * c_q * noise_factor(num_qubits));
}

BoundReport theorem1_bound(const SymMatrix& q, const std::vector<int>& labels, Shots shots,
                           const NoiseModel& noise, int num_qubits, double delta, double ridge) {
  check_delta(delta);
  noise.validate();
  if (shots.count && *shots.count < 1) throw InputError("theorem1_bound: m must be >= 1");
  if (q.dim() != labels.size()) throw InputError("theorem1_bound: label count mismatch");
  const EigenDecomposition eig = eig_sym(q);

  BoundReport r;
  r.n = q.dim();
  r.shots = shots;
  r.num_qubits = num_qubits;
  r.p = noise.effective_p();
  r.delta = delta;
  r.c_q = inverse_norm(eig, ridge);
  const Vector y = labels_to_vector(labels);
  r.c1 = y.dot(inv_ridge(eig, ridge).matrix() * y);
  if (shots.is_infinite()) {
    r.c2 = r.p == 0.0 ? 1.0 / (r.c_q * r.c_q * confidence_term(r.n, delta)) : 0.0;
  } else {
    r.c2 = bound_c2(r.c_q, r.n, static_cast<double>(*shots.count), r.p, num_qubits, delta);
  }
  r.term_ideal = std::sqrt(r.c1 / static_cast<double>(r.n));
  r.term_noise = bound_noise_term(r.c_q, r.n, shots, r.p, num_qubits, delta);
  r.breakdown_p = breakdown_threshold_from(r.c_q, r.n, num_qubits);
  return r;
}

double breakdown_threshold(const SymMatrix& q, std::size_t n, int num_qubits, double ridge) {
  return breakdown_threshold_from(inverse_norm(eig_sym(q), ridge), n, num_qubits);
}

SaturationReport saturation_diagnostic(const SymMatrix& q, const SymMatrix& w_hat, double ridge) {
  if (q.dim() != w_hat.dim()) throw InputError("saturation_diagnostic: dimension mismatch");
  const SymMatrix diff = inverse_symmetric(q, ridge) - inverse_symmetric(w_hat, ridge);
  SaturationReport r;
  r.n = q.dim();
  r.s2 = spectral_norm(diff);
  r.s_frob = frobenius_norm(diff);
  r.pass = r.s2 >= r.s_frob / std::sqrt(static_cast<double>(r.n)) * (1.0 - 1e-12);
  r.sqrt_s2 = std::sqrt(r.s2);
  r.epsilon = diff.matrix().cwiseAbs().mean();
  r.lower = std::sqrt(std::sqrt(static_cast<double>(r.n)) * r.epsilon);
  return r;
}

HoeffdingReport hoeffding_violation_test(double q, std::int64_t m, double gap, std::size_t trials,
                                         std::uint64_t seed) {
  if (!(q >= 0.0 && q <= 1.0)) throw InputError("hoeffding_violation_test: q must lie in [0, 1]");
  if (m < 1) throw InputError("hoeffding_violation_test: m must be >= 1");
  if (trials < 1000) throw InputError("hoeffding_violation_test: need at least 1000 trials");
  if (!(gap > 0.0)) throw InputError("hoeffding_violation_test: gap must be positive");

  HoeffdingReport r;
  r.q = q;
  r.m = m;
  r.gap = gap;
  r.trials = trials;
  // Deviation compared in units of shots to avoid round-off at the boundary.
  const double threshold = 0.5 * gap * static_cast<double>(m) - 1e-9;
  for (std::size_t t = 0; t < trials; ++t) {
    KeyedStream stream(seed, StreamRole::Hoeffding, {static_cast<std::uint64_t>(m), t});
    std::int64_t hits = 0;
    for (std::int64_t k = 0; k < m; ++k) hits += stream.uniform() < q ? 1 : 0;
    const double dev = std::abs(static_cast<double>(hits) - q * static_cast<double>(m));
    if (dev >= threshold) ++r.violations;
  }
  r.empirical = static_cast<double>(r.violations) / static_cast<double>(trials);
  r.bound = 2.0 * std::exp(-gap * gap * static_cast<double>(m) / 2.0);
  const double b = std::min(r.bound, 1.0);
  r.slack = 3.0 * std::sqrt(b * (1.0 - b) / static_cast<double>(trials)) + 1e-6;
  r.pass = r.empirical <= r.bound + r.slack;
  return r;
}

}  // namespace qkernel

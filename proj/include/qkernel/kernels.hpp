#pragma once

#include "qkernel/linalg.hpp"
#include "qkernel/rng.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qkernel {

enum class Provenance { Ideal, NoisyExpectation, ShotSampled, Calibrated, RBF };

std::string to_string(Provenance p);

// Mixing constant of the noisy-expectation closed form.
//   InverseDim:    2^-N, the all-zeros outcome probability of a fully
//                  depolarized inversion-test register.
//   PaperConstant: 2^-(N+1), the constant appearing in the bound terms.
enum class MixingConstant { InverseDim, PaperConstant };

std::string to_string(MixingConstant c);
MixingConstant mixing_constant_from_string(const std::string& s);

struct NoiseModel {
  double p_tilde = 0.0;
  int layers = 8;
  MixingConstant mixing = MixingConstant::InverseDim;

  // p = 1 - (1 - p_tilde)^layers
  double effective_p() const;
  double mixing_value(int num_qubits) const;
  void validate() const;
};

// Number of measurement shots per kernel entry; empty means the infinite-shot
// limit, which returns the noisy expectation unchanged.
struct Shots {
  std::optional<std::int64_t> count;

  static Shots infinite() { return {}; }
  static Shots finite(std::int64_t m) { return Shots{m}; }
  bool is_infinite() const { return !count.has_value(); }
  std::string to_string() const;
  static Shots parse(const std::string& s);
  auto operator<=>(const Shots&) const = default;
};

struct KernelParams {
  int num_qubits = 0;
  std::optional<NoiseModel> noise;
  std::optional<Shots> shots;
  std::optional<std::uint64_t> seed;
  std::optional<double> gamma;
  bool fix_diagonal = true;
  std::string calibration;  // method name when provenance is Calibrated
};

struct KernelMatrix {
  SymMatrix matrix;
  Provenance provenance;
  KernelParams params;
};

// Rows of `x` are samples; the column count is the qubit count N.
KernelMatrix gram_ideal(const Matrix& x);

// Q~_ij = (1 - p) Q_ij + p c_N. With fix_diagonal the diagonal stays at 1.
KernelMatrix apply_noise(const KernelMatrix& ideal, const NoiseModel& noise, bool fix_diagonal);

// Per-entry check |Q_ij - Q~_ij| <= p (Q_ij + 2^-(N+1)).
CheckReport check_noise_deviation(const KernelMatrix& ideal, const KernelMatrix& noisy);

// Mean of m Bernoulli(q) draws from `stream`.
double sample_mean(double q, std::int64_t m, KeyedStream& stream);

// Each unordered pair i <= j draws m Bernoulli(Q~_ij) outcomes from a stream
// keyed by (seed, i, j). The diagonal stays at 1 when the noisy kernel was
// built with fix_diagonal.
KernelMatrix sample_shots(const KernelMatrix& noisy, Shots shots, std::uint64_t seed);

KernelMatrix rbf_gram(const Matrix& x, double gamma);
// (n_test x n_train) matrix exp(-gamma |x_t - x_i|^2).
Matrix rbf_cross(const Matrix& train, const Matrix& test, double gamma);

// (n_test x n_train) kernel evaluations between test and training samples
// through the same fidelity -> noise -> shot pipeline as the training Gram.
Matrix quantum_cross(const Matrix& train, const Matrix& test, const NoiseModel& noise,
                     Shots shots, std::uint64_t seed);

// Noise and shots applied to precomputed ideal cross-kernel fidelities; entry
// (t, i) draws from the stream keyed by (seed, cross, t, i).
Matrix noisy_cross(const Matrix& ideal_cross, int num_qubits, const NoiseModel& noise, Shots shots,
                   std::uint64_t seed);

// Full training pipeline: ideal Gram, noise (skipped when p_tilde == 0) and
// shot sampling (skipped for the infinite sentinel).
KernelMatrix quantum_gram(const Matrix& x, const NoiseModel& noise, Shots shots,
                          std::uint64_t seed, bool fix_diagonal);

// (Y^T (K + rI)^-1 Y) / (Y^T (Q + rI)^-1 Y).
double geometric_difference(const SymMatrix& classical, const SymMatrix& quantum,
                            const std::vector<int>& labels, double ridge);

Vector labels_to_vector(const std::vector<int>& labels);

}  // namespace qkernel

#pragma once

#include "qkernel/linalg.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace qkernel::qsim {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

inline constexpr int kMaxQubits = 14;

// Normalized amplitudes of an N-qubit pure state. Basis index bit j holds
// qubit j.
class StateVector {
 public:
  // |0...0>
  explicit StateVector(int num_qubits);

  int num_qubits() const { return num_qubits_; }
  std::size_t size() const { return amps_.size(); }
  std::span<const Complex> amplitudes() const { return amps_; }
  std::span<Complex> amplitudes() { return amps_; }
  double norm_squared() const;

  // H on every qubit (in place fast Walsh-Hadamard transform).
  void apply_hadamard_layer();
  // exp(i (sum_j x_j z_j + sum_{j<k} x_j x_k z_j z_k)) on basis state b,
  // z_j = 1 - 2 b_j.
  void apply_zz_phase_layer(std::span<const double> x);

 private:
  int num_qubits_;
  std::vector<Complex> amps_;
};

// Diagonal phase angle of U_Z(x) on basis state `basis`.
double zz_phase_angle(std::span<const double> x, std::uint64_t basis);

// U_Z(x) H U_Z(x) H |0...0>, N = x.size().
StateVector feature_state(std::span<const double> x);

// |<phi(x2)|phi(x1)>|^2, clamped to [0, 1].
double fidelity(std::span<const double> x1, std::span<const double> x2);
double fidelity(const StateVector& a, const StateVector& b);

// Verification-path density matrix (N <= 3 in practice).
class DensityMatrix {
 public:
  explicit DensityMatrix(CMatrix rho);
  static DensityMatrix pure(const StateVector& psi);
  static DensityMatrix pure(const Eigen::VectorXcd& psi);

  const CMatrix& matrix() const { return rho_; }
  std::size_t dim() const { return static_cast<std::size_t>(rho_.rows()); }

 private:
  CMatrix rho_;
};

// (1 - p) rho + p I / D.
DensityMatrix depolarize(const DensityMatrix& rho, double p);

// U rho U^dagger.
DensityMatrix evolve(const DensityMatrix& rho, const CMatrix& unitary);

// Random unitary exp(iH) for a seeded random Hermitian H on `num_qubits`.
CMatrix random_unitary(int num_qubits, std::uint64_t seed, std::uint64_t index);

struct FoldingReport {
  bool pass = false;
  double max_deviation = 0.0;
  double effective_p = 0.0;
};

// Compares per-layer depolarization (U_l then N_{p_tilde}, l = 1..L) with a
// single N_p after the composite unitary, p = 1 - (1 - p_tilde)^L. The initial
// pure state is drawn from `seed`.
FoldingReport verify_noise_folding(const std::vector<CMatrix>& unitaries, double p_tilde,
                                   std::uint64_t seed);

}  // namespace qkernel::qsim

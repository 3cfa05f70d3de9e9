#include "qkernel/qsim.hpp"

#include "qkernel/errors.hpp"
#include "qkernel/rng.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

namespace qkernel::qsim {

namespace {

void check_qubits(int n) {
  if (n < 1 || n > kMaxQubits) {
    throw InputError("qubit count must be in [1, " + std::to_string(kMaxQubits) +
                     "], got " + std::to_string(n));
  }
}

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

StateVector::StateVector(int num_qubits) : num_qubits_(num_qubits) {
  check_qubits(num_qubits);
  amps_.assign(std::size_t{1} << num_qubits, Complex{0.0, 0.0});
  amps_[0] = 1.0;
}

double StateVector::norm_squared() const {
  double s = 0.0;
  for (const Complex& a : amps_) s += std::norm(a);
  return s;
}

void StateVector::apply_hadamard_layer() {
  const std::size_t dim = amps_.size();
  for (std::size_t half = 1; half < dim; half <<= 1) {
    for (std::size_t base = 0; base < dim; base += 2 * half) {
      for (std::size_t k = base; k < base + half; ++k) {
        const Complex a = amps_[k];
        const Complex b = amps_[k + half];
        amps_[k] = a + b;
        amps_[k + half] = a - b;
      }
    }
  }
  const double scale = std::pow(2.0, -0.5 * num_qubits_);
  for (Complex& a : amps_) a *= scale;
}

double zz_phase_angle(std::span<const double> x, std::uint64_t basis) {
  const std::size_t n = x.size();
  double angle = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double zj = ((basis >> j) & 1U) ? -1.0 : 1.0;
    angle += x[j] * zj;
    for (std::size_t k = j + 1; k < n; ++k) {
      const double zk = ((basis >> k) & 1U) ? -1.0 : 1.0;
      angle += x[j] * x[k] * zj * zk;
    }
  }
  return angle;
}

void StateVector::apply_zz_phase_layer(std::span<const double> x) {
  if (static_cast<int>(x.size()) != num_qubits_) {
    throw InputError("phase layer: expected " + std::to_string(num_qubits_) +
                     " angles, got " + std::to_string(x.size()));
  }
  for (std::size_t b = 0; b < amps_.size(); ++b) {
    const double theta = zz_phase_angle(x, b);
    amps_[b] *= Complex{std::cos(theta), std::sin(theta)};
  }
}

StateVector feature_state(std::span<const double> x) {
  const int n = static_cast<int>(x.size());
  check_qubits(n);
  for (double v : x) {
    if (!std::isfinite(v)) throw InputError("feature_state: non-finite feature");
  }
  StateVector psi(n);
  psi.apply_hadamard_layer();
  psi.apply_zz_phase_layer(x);
  psi.apply_hadamard_layer();
  psi.apply_zz_phase_layer(x);
  return psi;
}

double fidelity(const StateVector& a, const StateVector& b) {
  if (a.num_qubits() != b.num_qubits()) throw InputError("fidelity: qubit count mismatch");
  const auto pa = a.amplitudes();
  const auto pb = b.amplitudes();
  Complex overlap{0.0, 0.0};
  for (std::size_t k = 0; k < pa.size(); ++k) overlap += std::conj(pb[k]) * pa[k];
  return std::clamp(std::norm(overlap), 0.0, 1.0);
}

double fidelity(std::span<const double> x1, std::span<const double> x2) {
  if (x1.size() != x2.size()) throw InputError("fidelity: feature length mismatch");
  return fidelity(feature_state(x1), feature_state(x2));
}

DensityMatrix::DensityMatrix(CMatrix rho) : rho_(std::move(rho)) {
  if (rho_.rows() != rho_.cols() || rho_.rows() < 1) {
    throw InputError("density matrix must be square");
  }
  if (max_abs(rho_ - rho_.adjoint()) > 1e-12) throw InputError("density matrix is not Hermitian");
  if (std::abs(rho_.trace() - Complex{1.0, 0.0}) > 1e-12) {
    throw InputError("density matrix trace differs from 1");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(rho_, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -1e-10) {
    throw InputError("density matrix has a negative eigenvalue");
  }
}

DensityMatrix DensityMatrix::pure(const Eigen::VectorXcd& psi) {
  return DensityMatrix(psi * psi.adjoint());
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
  const auto amps = psi.amplitudes();
  Eigen::VectorXcd v(static_cast<Eigen::Index>(amps.size()));
  for (std::size_t k = 0; k < amps.size(); ++k) v(static_cast<Eigen::Index>(k)) = amps[k];
  return pure(v);
}

DensityMatrix depolarize(const DensityMatrix& rho, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw InputError("depolarize: p must lie in [0, 1]");
  const auto d = static_cast<Eigen::Index>(rho.dim());
  CMatrix out = (1.0 - p) * rho.matrix();
  out.diagonal().array() += Complex{p / static_cast<double>(d), 0.0};
  return DensityMatrix(std::move(out));
}

DensityMatrix evolve(const DensityMatrix& rho, const CMatrix& unitary) {
  if (static_cast<std::size_t>(unitary.rows()) != rho.dim() || unitary.rows() != unitary.cols()) {
    throw InputError("evolve: unitary dimension mismatch");
  }
  CMatrix out = unitary * rho.matrix() * unitary.adjoint();
  // Re-hermitize to keep round-off from accumulating across layers.
  out = 0.5 * (out + out.adjoint()).eval();
  return DensityMatrix(std::move(out));
}

CMatrix random_unitary(int num_qubits, std::uint64_t seed, std::uint64_t index) {
  check_qubits(num_qubits);
  const Eigen::Index d = Eigen::Index{1} << num_qubits;
  KeyedStream rng(seed, StreamRole::Unitary, {static_cast<std::uint64_t>(num_qubits), index});
  CMatrix g(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) g(i, j) = Complex{rng.normal(), rng.normal()};
  }
  const CMatrix h = 0.5 * (g + g.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
  Eigen::VectorXcd phases(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    const double t = solver.eigenvalues()(k);
    phases(k) = Complex{std::cos(t), std::sin(t)};
  }
  return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

FoldingReport verify_noise_folding(const std::vector<CMatrix>& unitaries, double p_tilde,
                                   std::uint64_t seed) {
  if (unitaries.empty()) throw InputError("verify_noise_folding: need at least one layer");
  if (!(p_tilde >= 0.0 && p_tilde <= 1.0)) {
    throw InputError("verify_noise_folding: p_tilde must lie in [0, 1]");
  }
  const Eigen::Index d = unitaries.front().rows();
  if (d < 2 || (d & (d - 1)) != 0) throw InputError("verify_noise_folding: dimension must be 2^N");
  const CMatrix eye = CMatrix::Identity(d, d);
  for (const CMatrix& u : unitaries) {
    if (u.rows() != d || u.cols() != d) throw InputError("verify_noise_folding: mixed dimensions");
    if (max_abs(u.adjoint() * u - eye) > 1e-10) {
      throw InputError("verify_noise_folding: input matrix is not unitary");
    }
  }

  KeyedStream rng(seed, StreamRole::Unitary, {0xfeedULL});
  Eigen::VectorXcd psi(d);
  for (Eigen::Index k = 0; k < d; ++k) psi(k) = Complex{rng.normal(), rng.normal()};
  psi.normalize();
  const DensityMatrix rho0 = DensityMatrix::pure(psi);

  DensityMatrix layered = rho0;
  CMatrix composite = eye;
  for (const CMatrix& u : unitaries) {
    layered = depolarize(evolve(layered, u), p_tilde);
    composite = u * composite;
  }
  const double p = 1.0 - std::pow(1.0 - p_tilde, static_cast<double>(unitaries.size()));
  const DensityMatrix folded = depolarize(evolve(rho0, composite), p);

  FoldingReport report;
  report.effective_p = p;
  report.max_deviation = max_abs(layered.matrix() - folded.matrix());
  report.pass = report.max_deviation <= 1e-10;
  return report;
}

}  // namespace qkernel::qsim

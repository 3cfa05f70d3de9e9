#include "qkernel/kernels.hpp"

#include "qkernel/errors.hpp"
#include "qkernel/qsim.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace qkernel {

namespace {

std::vector<qsim::StateVector> encode_rows(const Matrix& x) {
  std::vector<qsim::StateVector> states;
  states.reserve(static_cast<std::size_t>(x.rows()));
  std::vector<double> row(static_cast<std::size_t>(x.cols()));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) row[static_cast<std::size_t>(j)] = x(i, j);
    states.push_back(qsim::feature_state(row));
  }
  return states;
}

void check_shots(const Shots& shots) {
  if (shots.count && *shots.count < 1) throw InputError("shot count must be >= 1");
}

double noisy_entry(double fidelity, double p, double c) { return (1.0 - p) * fidelity + p * c; }

}  // namespace

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::Ideal: return "ideal";
    case Provenance::NoisyExpectation: return "noisy-expectation";
    case Provenance::ShotSampled: return "shot-sampled";
    case Provenance::Calibrated: return "calibrated";
    case Provenance::RBF: return "classical-rbf";
  }
  return "unknown";
}

std::string to_string(MixingConstant c) {
  return c == MixingConstant::InverseDim ? "inverse_dim" : "paper_constant";
}

MixingConstant mixing_constant_from_string(const std::string& s) {
  if (s == "inverse_dim") return MixingConstant::InverseDim;
  if (s == "paper_constant") return MixingConstant::PaperConstant;
  throw InputError("unknown mixing constant '" + s + "' (expected inverse_dim | paper_constant)");
}

double NoiseModel::effective_p() const {
  return 1.0 - std::pow(1.0 - p_tilde, static_cast<double>(layers));
}

double NoiseModel::mixing_value(int num_qubits) const {
  const int exponent = mixing == MixingConstant::InverseDim ? num_qubits : num_qubits + 1;
  return std::ldexp(1.0, -exponent);
}

void NoiseModel::validate() const {
  if (!(p_tilde >= 0.0 && p_tilde <= 1.0)) throw InputError("p_tilde must lie in [0, 1]");
  if (layers < 1) throw InputError("layer count must be >= 1");
}

std::string Shots::to_string() const { return count ? std::to_string(*count) : "inf"; }

Shots Shots::parse(const std::string& s) {
  if (s == "inf") return infinite();
  std::int64_t m = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), m);
  if (ec != std::errc{} || ptr != s.data() + s.size() || m < 1) {
    throw InputError("shot count must be a positive integer or \"inf\", got '" + s + "'");
  }
  return finite(m);
}

KernelMatrix gram_ideal(const Matrix& x) {
  if (x.rows() < 1) throw InputError("gram_ideal: no samples");
  const auto states = encode_rows(x);
  const Eigen::Index n = x.rows();
  Matrix q = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    q(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      q(i, j) = qsim::fidelity(states[static_cast<std::size_t>(i)], states[static_cast<std::size_t>(j)]);
    }
  }
  KernelParams params;
  params.num_qubits = static_cast<int>(x.cols());
  return KernelMatrix{SymMatrix(q), Provenance::Ideal, params};
}

KernelMatrix apply_noise(const KernelMatrix& ideal, const NoiseModel& noise, bool fix_diagonal) {
  if (ideal.provenance != Provenance::Ideal) {
    throw ProvenanceError("apply_noise expects an ideal kernel, got " + to_string(ideal.provenance));
  }
  noise.validate();
  const double p = noise.effective_p();
  const double c = noise.mixing_value(ideal.params.num_qubits);
  Matrix out = ((1.0 - p) * ideal.matrix.matrix()).array() + p * c;
  if (fix_diagonal) out.diagonal().setOnes();
  KernelParams params = ideal.params;
  params.noise = noise;
  params.fix_diagonal = fix_diagonal;
  return KernelMatrix{SymMatrix(out), Provenance::NoisyExpectation, params};
}

CheckReport check_noise_deviation(const KernelMatrix& ideal, const KernelMatrix& noisy) {
  if (!noisy.params.noise) throw ProvenanceError("check_noise_deviation: kernel carries no noise model");
  const double p = noisy.params.noise->effective_p();
  const double c = std::ldexp(1.0, -(ideal.params.num_qubits + 1));
  const Matrix& q = ideal.matrix.matrix();
  const Matrix& qt = noisy.matrix.matrix();
  CheckReport report;
  double worst = -INFINITY;
  for (Eigen::Index i = 0; i < q.rows(); ++i) {
    for (Eigen::Index j = 0; j < q.cols(); ++j) {
      const double lhs = std::abs(q(i, j) - qt(i, j));
      const double rhs = p * (q(i, j) + c);
      if (lhs - rhs > worst) {
        worst = lhs - rhs;
        report.lhs = lhs;
        report.rhs = rhs;
      }
    }
  }
  report.pass = worst <= 1e-12;
  return report;
}

double sample_mean(double q, std::int64_t m, KeyedStream& stream) {
  std::int64_t hits = 0;
  for (std::int64_t k = 0; k < m; ++k) hits += stream.uniform() < q ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(m);
}

KernelMatrix sample_shots(const KernelMatrix& noisy, Shots shots, std::uint64_t seed) {
  if (noisy.provenance != Provenance::NoisyExpectation) {
    throw ProvenanceError("sample_shots expects a noisy-expectation kernel, got " +
                          to_string(noisy.provenance));
  }
  check_shots(shots);
  KernelParams params = noisy.params;
  params.shots = shots;
  params.seed = seed;
  if (shots.is_infinite()) return KernelMatrix{noisy.matrix, Provenance::ShotSampled, params};

  const Matrix& qt = noisy.matrix.matrix();
  if (qt.minCoeff() < 0.0 || qt.maxCoeff() > 1.0) {
    throw InputError("sample_shots: kernel entries must lie in [0, 1]");
  }
  const Eigen::Index n = qt.rows();
  Matrix w = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      if (i == j && noisy.params.fix_diagonal) {
        w(i, i) = 1.0;
        continue;
      }
      KeyedStream stream(seed, StreamRole::GramShots,
                         {static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j)});
      w(i, j) = sample_mean(qt(i, j), *shots.count, stream);
    }
  }
  return KernelMatrix{SymMatrix(w), Provenance::ShotSampled, params};
}

KernelMatrix quantum_gram(const Matrix& x, const NoiseModel& noise, Shots shots,
                          std::uint64_t seed, bool fix_diagonal) {
  KernelMatrix ideal = gram_ideal(x);
  if (noise.p_tilde == 0.0 && shots.is_infinite()) return ideal;
  KernelMatrix noisy = apply_noise(ideal, noise, fix_diagonal);
  if (shots.is_infinite()) return noisy;
  return sample_shots(noisy, shots, seed);
}

KernelMatrix rbf_gram(const Matrix& x, double gamma) {
  if (!(gamma > 0.0)) throw InputError("rbf_gram: gamma must be positive");
  KernelParams params;
  params.gamma = gamma;
  return KernelMatrix{SymMatrix(rbf_cross(x, x, gamma)), Provenance::RBF, params};
}

Matrix rbf_cross(const Matrix& train, const Matrix& test, double gamma) {
  if (!(gamma > 0.0)) throw InputError("rbf_cross: gamma must be positive");
  if (train.cols() != test.cols()) throw InputError("rbf_cross: feature width mismatch");
  Matrix k(test.rows(), train.rows());
  for (Eigen::Index t = 0; t < test.rows(); ++t) {
    for (Eigen::Index i = 0; i < train.rows(); ++i) {
      k(t, i) = std::exp(-gamma * (test.row(t) - train.row(i)).squaredNorm());
    }
  }
  return k;
}

Matrix noisy_cross(const Matrix& ideal_cross, int num_qubits, const NoiseModel& noise, Shots shots,
                   std::uint64_t seed) {
  noise.validate();
  check_shots(shots);
  const double p = noise.effective_p();
  const double c = noise.mixing_value(num_qubits);
  Matrix k(ideal_cross.rows(), ideal_cross.cols());
  for (Eigen::Index t = 0; t < k.rows(); ++t) {
    for (Eigen::Index i = 0; i < k.cols(); ++i) {
      double v = ideal_cross(t, i);
      if (noise.p_tilde > 0.0) v = noisy_entry(v, p, c);
      if (!shots.is_infinite()) {
        KeyedStream stream(seed, StreamRole::CrossShots,
                           {static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(i)});
        v = sample_mean(v, *shots.count, stream);
      }
      k(t, i) = v;
    }
  }
  return k;
}

Matrix quantum_cross(const Matrix& train, const Matrix& test, const NoiseModel& noise,
                     Shots shots, std::uint64_t seed) {
  if (train.cols() != test.cols()) throw InputError("quantum_cross: feature width mismatch");
  noise.validate();
  check_shots(shots);
  const auto train_states = encode_rows(train);
  const auto test_states = encode_rows(test);
  Matrix ideal(test.rows(), train.rows());
  for (Eigen::Index t = 0; t < test.rows(); ++t) {
    for (Eigen::Index i = 0; i < train.rows(); ++i) {
      ideal(t, i) = qsim::fidelity(test_states[static_cast<std::size_t>(t)],
                                   train_states[static_cast<std::size_t>(i)]);
    }
  }
  return noisy_cross(ideal, static_cast<int>(train.cols()), noise, shots, seed);
}

Vector labels_to_vector(const std::vector<int>& labels) {
  Vector y(static_cast<Eigen::Index>(labels.size()));
  for (std::size_t i = 0; i < labels.size(); ++i) y(static_cast<Eigen::Index>(i)) = labels[i];
  return y;
}

double geometric_difference(const SymMatrix& classical, const SymMatrix& quantum,
                            const std::vector<int>& labels, double ridge) {
  if (classical.dim() != quantum.dim() || classical.dim() != labels.size()) {
    throw InputError("geometric_difference: dimension mismatch");
  }
  const Vector y = labels_to_vector(labels);
  const double num = y.dot(inv_ridge(classical, ridge).matrix() * y);
  const double den = y.dot(inv_ridge(quantum, ridge).matrix() * y);
  return num / den;
}

}  // namespace qkernel

#include "oracles.hpp"
#include "qkernel/errors.hpp"
#include "qkernel/qsim.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace qkernel;
using namespace qkernel::qsim;

namespace {

double max_diff(const StateVector& s, const Eigen::VectorXcd& v) {
  double d = 0.0;
  const auto a = s.amplitudes();
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - v(static_cast<Eigen::Index>(i))));
  return d;
}

std::vector<double> random_x(std::mt19937_64& rng, int n, double span = std::numbers::pi) {
  std::uniform_real_distribution<double> u(-span, span);
  std::vector<double> x(static_cast<std::size_t>(n));
  for (auto& v : x) v = u(rng);
  return x;
}

}  // namespace

TEST_CASE("StateVector starts in |0...0>") {
  const StateVector s(3);
  CHECK(s.size() == 8);
  CHECK(s.amplitudes()[0] == Complex(1.0, 0.0));
  CHECK(s.norm_squared() == doctest::Approx(1.0));
  CHECK_THROWS_AS(StateVector(0), InputError);
  CHECK_THROWS_AS(StateVector(15), InputError);
}

TEST_CASE("zero angles return |0...0>") {
  const std::vector<double> x1{0.0};
  const auto s1 = feature_state(x1);
  CHECK(std::abs(s1.amplitudes()[0] - Complex(1, 0)) < 1e-15);
  CHECK(std::abs(s1.amplitudes()[1]) < 1e-15);
  const std::vector<double> x2{0.0, 0.0};
  const auto s2 = feature_state(x2);
  CHECK(std::abs(s2.amplitudes()[0] - Complex(1, 0)) < 1e-15);
  for (std::size_t i = 1; i < 4; ++i) CHECK(std::abs(s2.amplitudes()[i]) < 1e-15);
}

TEST_CASE("single qubit at pi/4 matches a hand-built 2x2 chain") {
  const double t = std::numbers::pi / 4;
  oracle::CMatrix h(2, 2);
  h << 1, 1, 1, -1;
  h /= std::sqrt(2.0);
  oracle::CMatrix uz = oracle::CMatrix::Zero(2, 2);
  uz(0, 0) = std::exp(Complex(0, t));
  uz(1, 1) = std::exp(Complex(0, -t));
  Eigen::VectorXcd zero = Eigen::VectorXcd::Zero(2);
  zero(0) = 1;
  const Eigen::VectorXcd expected = uz * h * uz * h * zero;
  const std::vector<double> x{t};
  CHECK(max_diff(feature_state(x), expected) <= 1e-12);
}

TEST_CASE("feature_state matches the dense matrix-chain oracle for N <= 3") {
  std::mt19937_64 rng(101);
  for (int n = 1; n <= 3; ++n) {
    for (int trial = 0; trial < 30; ++trial) {
      const auto x = random_x(rng, n);
      CHECK(max_diff(feature_state(x), oracle::feature_state_dense(x)) <= 1e-12);
    }
  }
}

TEST_CASE("layers preserve the norm") {
  std::mt19937_64 rng(7);
  for (int n : {1, 4, 9, 14}) {
    StateVector s(n);
    const auto x = random_x(rng, n);
    s.apply_hadamard_layer();
    CHECK(s.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
    s.apply_zz_phase_layer(x);
    CHECK(s.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
    s.apply_hadamard_layer();
    CHECK(s.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
    s.apply_zz_phase_layer(x);
    CHECK(s.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("phase angle follows the spin convention") {
  const std::vector<double> x{0.3, -0.7};
  // b = 0b10: qubit 0 has bit 0 (z=+1), qubit 1 has bit 1 (z=-1).
  CHECK(zz_phase_angle(x, 0b10) == doctest::Approx(0.3 * 1 + -0.7 * -1 + 0.3 * -0.7 * -1));
  CHECK(zz_phase_angle(x, 0b00) == doctest::Approx(0.3 - 0.7 + 0.3 * -0.7));
}

TEST_CASE("feature_state rejects bad input") {
  CHECK_THROWS_AS(feature_state(std::vector<double>{}), InputError);
  CHECK_THROWS_AS(feature_state(std::vector<double>{std::nan("")}), InputError);
  CHECK_THROWS_AS(feature_state(std::vector<double>(15, 0.1)), InputError);
}

TEST_CASE("fidelity basics") {
  std::mt19937_64 rng(5);
  const auto x = random_x(rng, 3);
  CHECK(fidelity(x, x) == doctest::Approx(1.0).epsilon(1e-12));
  const std::vector<double> z{0.0, 0.0};
  CHECK(fidelity(z, z) == doctest::Approx(1.0));
  CHECK_THROWS_AS(fidelity(std::vector<double>{0.1}, std::vector<double>{0.1, 0.2}), InputError);
}

TEST_CASE("fidelity is symmetric and bounded") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 6;
    const auto a = random_x(rng, n);
    const auto b = random_x(rng, n);
    const double f = fidelity(a, b);
    CHECK(std::abs(f - fidelity(b, a)) <= 1e-12);
    CHECK(f >= 0.0);
    CHECK(f <= 1.0);
  }
}

TEST_CASE("fidelity matches the density-matrix oracle for N <= 3") {
  std::mt19937_64 rng(19);
  for (int n = 1; n <= 3; ++n) {
    for (int trial = 0; trial < 30; ++trial) {
      const auto a = random_x(rng, n);
      const auto b = random_x(rng, n);
      CHECK(std::abs(fidelity(a, b) - oracle::fidelity_dense(a, b)) <= 1e-10);
    }
  }
}

TEST_CASE("DensityMatrix validation") {
  CMatrix bad = CMatrix::Identity(2, 2);
  CHECK_THROWS_AS(DensityMatrix{bad}, InputError);  // trace 2
  CMatrix nonherm = CMatrix::Zero(2, 2);
  nonherm(0, 0) = 1.0;
  nonherm(0, 1) = 0.3;
  CHECK_THROWS_AS(DensityMatrix{nonherm}, InputError);
  CMatrix negative = CMatrix::Zero(2, 2);
  negative(0, 0) = 1.5;
  negative(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityMatrix{negative}, InputError);
  const auto pure = DensityMatrix::pure(StateVector(2));
  CHECK(pure.dim() == 4);
}

TEST_CASE("depolarize examples") {
  const auto rho = DensityMatrix::pure(StateVector(1));
  CHECK((depolarize(rho, 0.0).matrix() - rho.matrix()).norm() == 0.0);
  CHECK((depolarize(rho, 1.0).matrix() - CMatrix::Identity(2, 2) / 2.0).norm() < 1e-15);
  const auto half = depolarize(rho, 0.5);
  CHECK(half.matrix()(0, 0).real() == doctest::Approx(0.75));
  CHECK(half.matrix()(1, 1).real() == doctest::Approx(0.25));
  CHECK_THROWS_AS(depolarize(rho, -0.1), InputError);
  CHECK_THROWS_AS(depolarize(rho, 1.1), InputError);
}

TEST_CASE("random unitaries are unitary and seeded") {
  for (int n = 1; n <= 3; ++n) {
    const CMatrix u = random_unitary(n, 9, 0);
    const auto d = u.rows();
    CHECK((u.adjoint() * u - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(u == random_unitary(n, 9, 0));
    CHECK(u != random_unitary(n, 9, 1));
  }
}

TEST_CASE("noise folding examples") {
  std::vector<CMatrix> us;
  for (std::uint64_t l = 0; l < 3; ++l) us.push_back(random_unitary(2, 1, l));
  const auto zero = verify_noise_folding(us, 0.0, 4);
  CHECK(zero.pass);
  CHECK(zero.effective_p == 0.0);
  CHECK(zero.max_deviation <= 1e-12);

  const auto one = verify_noise_folding({us[0]}, 0.2, 4);
  CHECK(one.pass);
  CHECK(one.effective_p == doctest::Approx(0.2));

  std::vector<CMatrix> eight;
  for (std::uint64_t l = 0; l < 8; ++l) eight.push_back(random_unitary(3, 2, l));
  const auto r = verify_noise_folding(eight, 0.001, 5);
  CHECK(r.pass);
  CHECK(r.effective_p == doctest::Approx(1.0 - std::pow(0.999, 8)));
}

TEST_CASE("noise folding rejects non-unitary input") {
  CMatrix m = CMatrix::Identity(2, 2);
  m(0, 0) = 2.0;
  CHECK_THROWS_AS(verify_noise_folding({m}, 0.1, 0), InputError);
  CHECK_THROWS_AS(verify_noise_folding({CMatrix::Identity(2, 2)}, 1.5, 0), InputError);
}

TEST_CASE("noise folding grid") {
  for (int layers : {1, 2, 4, 8}) {
    for (double p : {0.0, 0.001, 0.05, 0.3}) {
      for (std::uint64_t seed = 0; seed < 20; ++seed) {
        std::vector<CMatrix> us;
        for (int l = 0; l < layers; ++l) us.push_back(random_unitary(1 + static_cast<int>(seed % 3), seed, static_cast<std::uint64_t>(l)));
        CHECK(verify_noise_folding(us, p, seed).pass);
      }
    }
  }
}

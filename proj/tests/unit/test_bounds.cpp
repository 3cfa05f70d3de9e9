#include "oracles.hpp"
#include "qkernel/bounds.hpp"
#include "qkernel/calibrate.hpp"
#include "qkernel/datasets.hpp"
#include "qkernel/errors.hpp"
#include "qkernel/kernels.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

using namespace qkernel;

namespace {

constexpr double kDelta = 0.05;

std::vector<int> alternating(std::size_t n) {
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = i % 2 == 0 ? 1 : -1;
  return y;
}

NoiseModel depolarizing(double p) {
  // One layer, so the effective probability equals p.
  return NoiseModel{p, 1, MixingConstant::InverseDim};
}

// c2 written out directly from the formula.
double c2_reference(double c_q, double n, double m, double p, int num_qubits, double delta) {
  const double a = std::sqrt(0.5 * std::log(4.0 * n * n / delta));
  const double k = 1.0 + 1.0 / std::pow(2.0, num_qubits + 1);
  return std::max(1.0 / (c_q * c_q * (a + std::sqrt(m) * p * k)) - n / std::sqrt(m) / c_q, 0.0);
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

}  // namespace

TEST_CASE("identity kernel bound") {
  for (std::size_t n : {4u, 10u, 50u}) {
    const auto r = theorem1_bound(SymMatrix::identity(n), alternating(n), Shots::finite(1000), depolarizing(0.0), 2, kDelta);
    CHECK(r.c1 == doctest::Approx(static_cast<double>(n)));
    CHECK(r.c_q == doctest::Approx(1.0));
    CHECK(r.term_ideal == doctest::Approx(1.0));
    CHECK(r.c2 == doctest::Approx(c2_reference(1.0, static_cast<double>(n), 1000, 0.0, 2, kDelta)));
  }
}

TEST_CASE("noiseless infinite-shot limit") {
  std::mt19937_64 rng(31);
  const SymMatrix q(oracle::random_psd(rng, 12) + Matrix::Identity(12, 12));
  const auto r = theorem1_bound(q, alternating(12), Shots::infinite(), depolarizing(0.0), 3, kDelta);
  CHECK(r.term_noise == 0.0);
  CHECK(r.term_ideal == doctest::Approx(std::sqrt(r.c1 / 12.0)));
  // Finite shots approach the limit.
  double previous = std::numeric_limits<double>::infinity();
  for (std::int64_t m : {std::int64_t{1000}, std::int64_t{1000000}, std::int64_t{1000000000000}}) {
    const double t = theorem1_bound(q, alternating(12), Shots::finite(m), depolarizing(0.0), 3, kDelta).term_noise;
    CHECK(t < previous);
    previous = t;
  }
  CHECK(previous < 1e-2);
}

TEST_CASE("c_Q is the inverse smallest eigenvalue") {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix q = oracle::random_psd(rng, 7) + 0.05 * Matrix::Identity(7, 7);
    const auto r = theorem1_bound(SymMatrix(q), alternating(7), Shots::finite(100), depolarizing(0.01), 2, kDelta);
    CHECK(r.c_q == doctest::Approx(1.0 / oracle::jacobi_eigen(q).values.minCoeff()).epsilon(1e-9));
    const Vector y = Eigen::Map<const Eigen::VectorXi>(alternating(7).data(), 7).cast<double>();
    CHECK(r.c1 == doctest::Approx(y.dot(oracle::solve(q, y))).epsilon(1e-9));
    CHECK(r.c2 == doctest::Approx(c2_reference(r.c_q, 7, 100, 0.01, 2, kDelta)));
    CHECK((r.c2 == 0.0) == std::isinf(r.term_noise));
  }
}

TEST_CASE("bound errors") {
  CHECK_THROWS_AS(theorem1_bound(SymMatrix::zero(3), alternating(3), Shots::finite(10), depolarizing(0), 2, kDelta), SingularError);
  CHECK_NOTHROW(theorem1_bound(SymMatrix::zero(3), alternating(3), Shots::finite(10), depolarizing(0), 2, kDelta, 1e-3));
  Vector d(2);
  d << 1.0, -1.0;
  CHECK_THROWS_AS(theorem1_bound(SymMatrix::diagonal(d), alternating(2), Shots::finite(10), depolarizing(0), 2, kDelta), NotPsdError);
  CHECK_THROWS_AS(theorem1_bound(SymMatrix::identity(2), alternating(2), Shots::finite(10), depolarizing(0), 2, 1.5), InputError);
  CHECK_THROWS_AS(theorem1_bound(SymMatrix::identity(2), alternating(3), Shots::finite(10), depolarizing(0), 2, kDelta), InputError);
  CHECK_THROWS_AS(breakdown_threshold(SymMatrix::zero(2), 2, 2), SingularError);
}

TEST_CASE("breakdown threshold") {
  CHECK(breakdown_threshold(SymMatrix::identity(100), 100, 2) == doctest::Approx(1.0 / 112.5));
  CHECK(breakdown_threshold(SymMatrix::identity(100), 100, 2) == doctest::Approx(8.888888888888889e-3));
  for (int nq : {1, 2, 5}) {
    const double t = breakdown_threshold(SymMatrix::identity(10), 10, nq);
    CHECK(t == doctest::Approx(1.0 / (10.0 * (1.0 + std::pow(2.0, -(nq + 1))))));
    CHECK(breakdown_threshold(SymMatrix::identity(20), 20, nq) == doctest::Approx(t / 2));
  }
}

TEST_CASE("noise above breakdown gives an infinite bound") {
  const SymMatrix q = SymMatrix::identity(100);
  const double threshold = breakdown_threshold(q, 100, 2);
  for (double factor : {1.0 + 1e-9, 1.5, 10.0}) {
    for (std::int64_t m : {1, 10, 1000, 1000000}) {
      const auto r = theorem1_bound(q, alternating(100), Shots::finite(m), depolarizing(threshold * factor), 2, kDelta);
      CHECK(r.c2 == 0.0);
      CHECK(std::isinf(r.term_noise));
    }
  }
}

TEST_CASE("term_noise monotonicity over a grid") {
  const std::vector<double> ms{10, 30, 100, 300, 1000, 3000, 10000};
  const std::vector<std::size_t> ns{5, 10, 20, 50, 100, 200};
  const std::vector<double> ps{0.0, 1e-4, 1e-3, 0.01, 0.05, 0.1, 0.3};
  for (double c_q : {0.5, 1.0, 4.0}) {
    for (int nq : {2, 8}) {
      auto term = [&](std::size_t n, double m, double p) {
        return bound_noise_term(c_q, n, Shots::finite(static_cast<std::int64_t>(m)), p, nq, kDelta);
      };
      for (std::size_t n : ns)
        for (double p : ps)
          for (std::size_t i = 1; i < ms.size(); ++i) CHECK(term(n, ms[i], p) <= term(n, ms[i - 1], p));
      for (double m : ms)
        for (double p : ps)
          for (std::size_t i = 1; i < ns.size(); ++i) CHECK(term(ns[i], m, p) >= term(ns[i - 1], m, p));
      for (double m : ms)
        for (std::size_t n : ns)
          for (std::size_t i = 1; i < ps.size(); ++i) CHECK(term(n, m, ps[i]) >= term(n, m, ps[i - 1]));
    }
  }
}

TEST_CASE("cubic shot budget keeps the noise term comparable to the ideal term") {
  // Noiseless, Q = I: with m = n^3 the ratio term_noise / term_ideal stays bounded.
  double first = 0.0;
  for (std::size_t n : {5u, 10u, 20u, 50u, 100u, 200u}) {
    const auto r = theorem1_bound(SymMatrix::identity(n), alternating(n),
                                  Shots::finite(static_cast<std::int64_t>(n * n * n)), depolarizing(0.0), 2, kDelta);
    const double ratio = r.term_noise / r.term_ideal;
    CHECK(std::isfinite(ratio));
    if (first == 0.0) first = ratio;
    CHECK(ratio <= first * (1 + 1e-12));
  }
}

TEST_CASE("saturation diagnostic examples") {
  std::mt19937_64 rng(33);
  const SymMatrix q(oracle::random_psd(rng, 5) + Matrix::Identity(5, 5));
  const auto same = saturation_diagnostic(q, q, 0.0);
  CHECK(same.s2 == doctest::Approx(0.0).scale(1.0));
  CHECK(same.s_frob == doctest::Approx(0.0).scale(1.0));
  CHECK(same.pass);

  const double eps = 0.01;
  const auto r = saturation_diagnostic(SymMatrix::identity(4), SymMatrix::identity(4).scaled(1.0 / (1.0 + eps)), 0.0);
  CHECK(r.s2 == doctest::Approx(eps));
  CHECK(r.s_frob == doctest::Approx(2 * eps));
  CHECK(r.pass);
  CHECK(r.sqrt_s2 == doctest::Approx(std::sqrt(eps)));

  for (int trial = 0; trial < 50; ++trial) {
    const SymMatrix a(oracle::random_psd(rng, 6) + Matrix::Identity(6, 6));
    const SymMatrix b(oracle::random_psd(rng, 6) + Matrix::Identity(6, 6));
    const auto s = saturation_diagnostic(a, b, 0.0);
    CHECK(s.pass);
    const Matrix diff = oracle::gauss_jordan_inverse(a.matrix()) - oracle::gauss_jordan_inverse(b.matrix());
    CHECK(s.s_frob == doctest::Approx(std::sqrt(oracle::frobenius_sq(diff, Matrix::Zero(6, 6)))));
  }
  CHECK_THROWS_AS(saturation_diagnostic(q, SymMatrix::identity(3), 0.0), InputError);
  CHECK_THROWS_AS(saturation_diagnostic(q, SymMatrix::zero(5), 0.0), SingularError);
}

TEST_CASE("saturation grows with n on pipeline instances") {
  const double ridge = 1e-3;
  double previous = 0.0;
  for (std::size_t n : {5u, 50u, 100u, 200u}) {
    std::vector<double> s2;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const Matrix x = generate_synthetic(n, 2, seed).features;
      const auto q = gram_ideal(x);
      const auto w = sample_shots(apply_noise(q, NoiseModel{0.05}, true), Shots::finite(100), seed);
      const SymMatrix w_psd = clip(w.matrix);
      s2.push_back(saturation_diagnostic(q.matrix, w_psd, ridge).s2);
    }
    const double med = median_of(s2);
    CHECK(med >= previous);
    previous = med;
  }
}

TEST_CASE("Hoeffding examples") {
  for (double q : {0.0, 1.0}) {
    for (double gap : {0.01, 0.2, 1.0}) {
      const auto r = hoeffding_violation_test(q, 50, gap, 1000, 1);
      CHECK(r.violations == 0);
      CHECK(r.pass);
    }
  }
  const auto wide = hoeffding_violation_test(0.3, 20, 2.0, 1000, 2);
  CHECK(wide.empirical == 0.0);
  const auto mid = hoeffding_violation_test(0.5, 100, 0.2, 10000, 3);
  CHECK(mid.bound == doctest::Approx(2.0 * std::exp(-2.0)));
  CHECK(mid.empirical <= mid.bound + mid.slack);
  CHECK(mid.pass);
  CHECK(mid.empirical > 0.0);

  CHECK_THROWS_AS(hoeffding_violation_test(1.5, 10, 0.1, 1000, 0), InputError);
  CHECK_THROWS_AS(hoeffding_violation_test(0.5, 10, 0.1, 10, 0), InputError);
}

TEST_CASE("Hoeffding rate matches an exact binomial tail") {
  // P(|Bin(m, q) - m q| >= m gap / 2) summed term by term.
  const double q = 0.3, gap = 0.2;
  const std::int64_t m = 40;
  double exact = 0.0;
  for (std::int64_t k = 0; k <= m; ++k) {
    if (std::abs(static_cast<double>(k) - q * m) >= 0.5 * gap * m - 1e-9) {
      exact += std::exp(std::lgamma(m + 1.0) - std::lgamma(k + 1.0) - std::lgamma(m - k + 1.0) + k * std::log(q) +
                        (m - k) * std::log(1 - q));
    }
  }
  const auto r = hoeffding_violation_test(q, m, gap, 20000, 4);
  CHECK(std::abs(r.empirical - exact) <= 4.0 * std::sqrt(exact * (1 - exact) / 20000.0));
  CHECK(hoeffding_violation_test(q, m, gap, 20000, 4).violations == r.violations);
}

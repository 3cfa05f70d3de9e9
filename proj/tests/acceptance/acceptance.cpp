// One PASS/FAIL line per acceptance criterion. Exit status is nonzero when any
// criterion fails.

#include "oracles.hpp"
#include "qkernel/bounds.hpp"
#include "qkernel/calibrate.hpp"
#include "qkernel/datasets.hpp"
#include "qkernel/kernels.hpp"
#include "qkernel/qsim.hpp"
#include "qkernel/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>

using namespace qkernel;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), f, a, b, c, d);
  return buf;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

// Collect test accuracies matching a predicate.
std::vector<double> accuracies(const std::vector<ResultRecord>& records,
                               const std::function<bool(const ResultRecord&)>& keep) {
  std::vector<double> out;
  for (const auto& r : records)
    if (keep(r) && r.error.empty() && r.test_accuracy) out.push_back(*r.test_accuracy);
  return out;
}

Outcome lemma_suite() {
  std::mt19937_64 rng(1001);
  std::uniform_int_distribution<int> dim(2, 64), qubits(1, 4);
  std::uniform_int_distribution<std::int64_t> shots(1, 200);
  std::uniform_real_distribution<double> noise(0.0, 0.1);
  std::map<std::string, int> passed, failed, skipped;
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::Index n = dim(rng);
    const Matrix x = oracle::random_uniform(rng, n, qubits(rng), -std::numbers::pi, std::numbers::pi);
    const auto q = gram_ideal(x);
    const auto w = sample_shots(apply_noise(q, NoiseModel{noise(rng)}, true), Shots::finite(shots(rng)),
                                static_cast<std::uint64_t>(trial));
    for (const char* m : {"clip", "flip", "shift"}) {
      const auto rep = calibrate_and_report(q.matrix, w.matrix, Calibration::parse(m)).second;
      if (rep.lemma == LemmaStatus::Pass) ++passed[m];
      else if (rep.lemma == LemmaStatus::Fail) ++failed[m];
      else ++skipped[m];
    }
  }
  std::string detail;
  bool ok = true;
  for (const char* m : {"clip", "flip", "shift"}) {
    ok = ok && failed[m] == 0 && skipped[m] == 0;
    detail += std::string(m) + " " + std::to_string(passed[m]) + "/1000";
    if (failed[m]) detail += " (" + std::to_string(failed[m]) + " violations)";
    detail += "; ";
  }
  return {ok, detail};
}

Outcome simulator_oracle() {
  std::mt19937_64 rng(1002);
  double worst = 0.0;
  for (int ds = 0; ds < 50; ++ds) {
    const int nq = 1 + ds % 3;
    const Matrix x = oracle::random_uniform(rng, 6 + ds % 5, nq, -2.0, 2.0);
    const auto q = gram_ideal(x);
    std::vector<oracle::CMatrix> rho;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const oracle::CVector psi = oracle::feature_state_dense(oracle::row(x, i));
      rho.push_back(psi * psi.adjoint());
    }
    for (std::size_t i = 0; i < rho.size(); ++i)
      for (std::size_t j = 0; j < rho.size(); ++j)
        worst = std::max(worst, std::abs(q.matrix(i, j) - (rho[i] * rho[j]).trace().real()));
  }
  return {worst <= 1e-10, fmt("max entry deviation %.3g", worst)};
}

Outcome noise_folding() {
  int passed = 0, total = 0;
  double worst = 0.0;
  for (int layers : {1, 2, 4, 8}) {
    for (double p : {0.0, 0.001, 0.05, 0.3}) {
      for (std::uint64_t seed = 0; seed < 20; ++seed) {
        std::vector<qsim::CMatrix> us;
        for (int l = 0; l < layers; ++l)
          us.push_back(qsim::random_unitary(1 + static_cast<int>(seed % 3), seed, static_cast<std::uint64_t>(l)));
        const auto r = qsim::verify_noise_folding(us, p, seed);
        passed += r.pass && r.max_deviation <= 1e-10;
        worst = std::max(worst, r.max_deviation);
        ++total;
      }
    }
  }
  return {passed == total, fmt("%.0f/%.0f cases, max deviation %.3g", passed, total, worst)};
}

Outcome concentration() {
  int passed = 0, total = 0;
  double worst_margin = -1.0;
  for (double q : {0.1, 0.5, 0.9})
    for (std::int64_t m : {10, 100})
      for (double gap : {0.1, 0.2}) {
        const auto r = hoeffding_violation_test(q, m, gap, 10000, 2024);
        passed += r.pass;
        ++total;
        worst_margin = std::max(worst_margin, r.empirical - r.bound);
      }
  return {passed == total, fmt("%.0f/%.0f settings, max (empirical - bound) %.3g", passed, total, worst_margin)};
}

Outcome inverse_perturbation() {
  std::mt19937_64 rng(1005);
  std::uniform_int_distribution<int> dim(2, 32);
  std::uniform_real_distribution<double> scale(0.01, 1.0);
  int applicable = 0, violations = 0, attempts = 0;
  while (applicable < 1000 && attempts < 100000) {
    ++attempts;
    const Eigen::Index n = dim(rng);
    const SymMatrix a(oracle::random_psd(rng, n) + scale(rng) * Matrix::Identity(n, n));
    const SymMatrix b(a.matrix() + oracle::random_symmetric(rng, n, 0.1 * scale(rng)));
    const auto r = inverse_perturbation_check(a, b);
    if (!r.applicable) continue;
    ++applicable;
    violations += !r.pass;
  }
  return {applicable == 1000 && violations == 0,
          fmt("%.0f applicable pairs (%.0f drawn), %.0f violations", applicable, attempts, violations)};
}

Outcome bound_properties() {
  constexpr double kDelta = 0.05;
  int bad_breakdown = 0, bad_converse = 0, bad_monotone = 0, bad_limit = 0;
  std::mt19937_64 rng(1006);
  std::vector<SymMatrix> kernels{SymMatrix::identity(100)};
  for (int i = 0; i < 4; ++i) {
    const Matrix x = oracle::random_uniform(rng, 12 + 4 * i, 2, -1.5, 1.5);
    kernels.push_back(gram_ideal(x).matrix.plus_identity(0.05));
  }
  std::vector<int> labels;
  for (const auto& q : kernels) {
    const std::size_t n = q.dim();
    labels.assign(n, 1);
    for (std::size_t i = 1; i < n; i += 2) labels[i] = -1;
    const double t = breakdown_threshold(q, n, 2);
    for (double factor : {1.0 + 1e-9, 1.01, 2.0, 10.0})
      for (std::int64_t m : {1, 10, 100, 1000, 10000, 1000000})
        bad_breakdown += theorem1_bound(q, labels, Shots::finite(m), NoiseModel{t * factor, 1}, 2, kDelta).c2 != 0.0;
    // Below threshold the large-shot limit keeps a finite noise term.
    for (double factor : {0.1, 0.5, 0.9}) {
      bad_converse += theorem1_bound(q, labels, Shots::finite(1000000000000), NoiseModel{t * factor, 1}, 2, kDelta).c2 <= 0.0;
      bad_converse += !std::isfinite(theorem1_bound(q, labels, Shots::infinite(), NoiseModel{t * factor, 1}, 2, kDelta).term_noise);
    }
    const auto ideal = theorem1_bound(q, labels, Shots::infinite(), NoiseModel{}, 2, kDelta);
    bad_limit += ideal.term_noise != 0.0 || std::abs(ideal.term_ideal - std::sqrt(ideal.c1 / static_cast<double>(n))) > 1e-12;
  }
  const std::vector<double> ms{10, 20, 50, 100, 200, 500, 1000, 2000, 5000, 10000};
  const std::vector<std::size_t> ns{5, 10, 20, 50, 100, 150, 200};
  const std::vector<double> ps{0.0, 1e-4, 1e-3, 0.01, 0.05, 0.1, 0.2, 0.3};
  for (double c_q : {0.25, 1.0, 10.0}) {
    auto term = [&](std::size_t n, double m, double p) {
      return bound_noise_term(c_q, n, Shots::finite(static_cast<std::int64_t>(m)), p, 2, kDelta);
    };
    for (std::size_t n : ns)
      for (double p : ps)
        for (std::size_t i = 1; i < ms.size(); ++i) bad_monotone += term(n, ms[i], p) > term(n, ms[i - 1], p);
    for (double m : ms)
      for (double p : ps)
        for (std::size_t i = 1; i < ns.size(); ++i) bad_monotone += term(ns[i], m, p) < term(ns[i - 1], m, p);
    for (double m : ms)
      for (std::size_t n : ns)
        for (std::size_t i = 1; i < ps.size(); ++i) bad_monotone += term(n, m, ps[i]) < term(n, m, ps[i - 1]);
  }
  const bool ok = bad_breakdown + bad_converse + bad_monotone + bad_limit == 0;
  return {ok, fmt("breakdown misses %.0f, converse misses %.0f, monotonicity misses %.0f, noiseless-limit misses %.0f",
                  bad_breakdown, bad_converse, bad_monotone, bad_limit)};
}

std::vector<Outcome> directional_sweep() {
  SweepConfig c;
  c.num_qubits = 2;
  c.n_values = {5, 50, 100, 200};
  c.n_test = 100;
  c.shots = {Shots::finite(10), Shots::finite(100), Shots::finite(1000), Shots::infinite()};
  c.p_tilde = {0.0, 0.05};
  c.methods = {"nearest"};
  c.feature_scale = std::numbers::pi;
  c.seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  const auto records = run_sweep(c);

  auto quantum = [&](std::size_t n, const std::string& m, double p) {
    return median(accuracies(records, [&](const ResultRecord& r) {
      return r.kind == "quantum" && r.n == n && r.m == m && r.p_tilde == p;
    }));
  };
  auto rbf = [&](std::size_t n) {
    return median(accuracies(records, [&](const ResultRecord& r) { return r.kind == "rbf" && r.n == n; }));
  };

  std::vector<Outcome> out;
  const double ideal = quantum(100, "inf", 0.0), base = rbf(100);
  out.push_back({ideal - base >= 0.05, fmt("n=100 median ideal %.3f vs RBF %.3f", ideal, base)});

  const double lo = quantum(100, "10", 0.05), hi = quantum(100, "1000", 0.05);
  out.push_back({hi - lo >= 0.10, fmt("n=100 median m=1000 %.3f vs m=10 %.3f", hi, lo)});

  std::vector<double> noisy, clean;
  for (std::size_t n : c.n_values) {
    noisy.push_back(quantum(n, "100", 0.05));
    clean.push_back(quantum(n, "inf", 0.0));
  }
  const bool peak = *std::max_element(noisy.begin(), noisy.end() - 1) >= noisy.back();
  const bool rising = std::is_sorted(clean.begin(), clean.end());
  std::string detail = "noisy";
  for (double v : noisy) detail += fmt(" %.3f", v);
  detail += "; ideal";
  for (double v : clean) detail += fmt(" %.3f", v);
  out.push_back({peak && rising, detail});
  return out;
}

Outcome calibration_benefit() {
  SweepConfig c;
  c.dataset.dim = 8;
  c.num_qubits = 8;
  c.n_values = {100};
  c.n_test = 100;
  c.shots = {Shots::finite(10)};
  c.p_tilde = {0.05};
  c.methods = {"nearest", "clip", "flip", "shift"};
  c.seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  c.rbf_baseline = false;
  const auto records = run_sweep(c);
  std::map<std::string, double> med;
  for (const auto& m : c.methods)
    med[m] = median(accuracies(records, [&](const ResultRecord& r) { return r.method == m; }));
  const double gain = std::max({med["clip"], med["flip"], med["shift"]}) - med["nearest"];
  const bool ok = med["shift"] >= med["nearest"] && gain >= 0.03;
  return {ok, fmt("median nearest %.3f, clip %.3f, flip %.3f, shift %.3f", med["nearest"], med["clip"], med["flip"],
                  med["shift"])};
}

Outcome relabel_optimality() {
  std::mt19937_64 rng(1009);
  std::normal_distribution<double> g(0.0, 1.0);
  int violations = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix q = oracle::random_psd(rng, 8) + 0.05 * Matrix::Identity(8, 8);
    const Matrix k = oracle::random_psd(rng, 8) + 0.05 * Matrix::Identity(8, 8);
    const Matrix ki = oracle::gauss_jordan_inverse(k), qi = oracle::gauss_jordan_inverse(q);
    auto ratio = [&](const Vector& y) { return y.dot(ki * y) / y.dot(qi * y); };
    const double best = ratio(relabel_for_advantage(SymMatrix(q), SymMatrix(k), 0.0).y_sharp);
    Vector y(8);
    for (int s = 0; s < 10000; ++s) {
      for (auto& v : y) v = g(rng);
      violations += ratio(y) > best + 1e-9 * std::max(1.0, best);
    }
  }
  return {violations == 0, fmt("%.0f directions above the eigenvector value", violations)};
}

Outcome determinism() {
  SweepConfig c;
  c.n_values = {20, 50};
  c.n_test = 50;
  c.shots = {Shots::finite(10), Shots::infinite()};
  c.p_tilde = {0.0, 0.05};
  c.methods = {"clip", "shift", "nearest"};
  c.seeds = {0, 1, 2};
  const auto dir = std::filesystem::temp_directory_path();
  const std::string a = (dir / "qkernel_acceptance_a.csv").string(), b = (dir / "qkernel_acceptance_b.csv").string();
  emit_results(run_sweep(c), a, "csv");
  emit_results(run_sweep(c), b, "csv");
  auto slurp = [](const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const std::string x = slurp(a), y = slurp(b);
  return {!x.empty() && x == y, fmt("%.0f bytes per file", static_cast<double>(x.size()))};
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](const std::string& name, const std::function<Outcome()>& fn) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%-4s %s: %s [%.1fs]\n", name.c_str(), o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += !o.pass;
  };

  report("1", lemma_suite);
  report("2", simulator_oracle);
  report("3", noise_folding);
  report("4", concentration);
  report("5", inverse_perturbation);
  report("6", bound_properties);

  std::vector<Outcome> seven;
  report("7", [&] {
    seven = directional_sweep();
    return Outcome{seven[0].pass && seven[1].pass && seven[2].pass, "see 7a-7c"};
  });
  const char* parts[] = {"7a", "7b", "7c"};
  for (std::size_t i = 0; i < seven.size(); ++i) {
    std::printf("%-4s %s: %s\n", parts[i], seven[i].pass ? "PASS" : "FAIL", seven[i].detail.c_str());
  }

  report("8", calibration_benefit);
  report("9", relabel_optimality);
  report("10", determinism);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}

// qkernel: command-line harness for the noisy quantum kernel library.
//
// Exit codes: 0 success, 1 configuration error, 2 runtime error (partial
// results are still written for sweeps).

#include "qkernel/bounds.hpp"
#include "qkernel/calibrate.hpp"
#include "qkernel/datasets.hpp"
#include "qkernel/errors.hpp"
#include "qkernel/kernels.hpp"
#include "qkernel/learner.hpp"
#include "qkernel/qsim.hpp"
#include "qkernel/serialize.hpp"
#include "qkernel/sweep.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace qkernel;

namespace {

constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

struct Common {
  std::string config;
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "json";
};

void emit_json(const Json& doc, const Common& common) {
  if (common.out.empty()) {
    std::cout << doc.dump(2) << '\n';
  } else {
    write_json(doc, common.out);
  }
}

NoiseModel noise_from(double p_tilde, int layers, const std::string& mixing) {
  NoiseModel noise{p_tilde, layers, mixing_constant_from_string(mixing)};
  noise.validate();
  return noise;
}

// Data for the single-shot subcommands: a CSV file or the synthetic generator,
// then PCA to the qubit count.
struct DataOptions {
  std::string path;
  std::size_t synthetic_n = 0;
  std::size_t synthetic_d = 2;
  int qubits = 2;
  double scale = 1.0;
  bool no_pca = false;
};

void add_data_options(CLI::App* app, DataOptions& d) {
  app->add_option("--data", d.path, "dataset CSV (f0..f{d-1},label)");
  app->add_option("--synthetic", d.synthetic_n, "generate this many uniform samples instead of --data");
  app->add_option("--dim", d.synthetic_d, "feature width for --synthetic");
  app->add_option("--qubits,-N", d.qubits, "qubit count N (PCA target)")->check(CLI::Range(1, 14));
  app->add_option("--feature-scale", d.scale, "multiply projected features by this factor");
  app->add_flag("--no-pca", d.no_pca, "use features as given (width must equal N)");
}

Dataset load_data(const DataOptions& d, std::uint64_t seed) {
  Dataset ds;
  if (!d.path.empty()) {
    ds = load_csv(d.path);
  } else if (d.synthetic_n > 0) {
    ds = generate_synthetic(d.synthetic_n, d.synthetic_d, seed);
  } else {
    throw ConfigError("one of --data or --synthetic is required");
  }
  if (d.no_pca) {
    if (ds.width() != static_cast<std::size_t>(d.qubits)) {
      throw InputError("--no-pca: feature width " + std::to_string(ds.width()) + " != N");
    }
  } else {
    ds.features = pca(ds.features, static_cast<std::size_t>(d.qubits)).projected;
  }
  ds.features *= d.scale;
  return ds;
}

std::vector<int> labels_from(const std::string& path, std::size_t expected) {
  const Dataset ds = load_csv(path);
  if (ds.size() != expected) {
    throw InputError(path + ": expected " + std::to_string(expected) + " labels, found " +
                     std::to_string(ds.size()));
  }
  return ds.labels;
}

int run_sweep_command(const Common& common) {
  if (common.config.empty()) throw ConfigError("sweep requires --config");
  SweepConfig cfg = load_sweep_config(common.config);
  if (!common.out.empty()) cfg.output = common.out;
  if (cfg.output.empty()) throw ConfigError("no output path (set \"output\" or pass --out)");
  const std::vector<ResultRecord> records = run_sweep(cfg);
  emit_results(records, cfg.output, cfg.format);
  std::size_t failed = 0;
  for (const auto& r : records) failed += r.error.empty() ? 0 : 1;
  std::cerr << records.size() << " records written to " << cfg.output;
  if (failed > 0) std::cerr << " (" << failed << " with errors)";
  std::cerr << '\n';
  return failed > 0 ? kRuntimeError : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Noisy quantum kernel simulation, calibration and bounds"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--config", common.config, "JSON config file (sweep)");
  app.add_option("--seed", common.seed, "base seed");
  app.add_option("--out", common.out, "output path (stdout if omitted)");
  app.add_option("--format", common.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));

  // kernel
  auto* kernel_cmd = app.add_subcommand("kernel", "build a Gram matrix and save it with a JSON sidecar");
  DataOptions kernel_data;
  add_data_options(kernel_cmd, kernel_data);
  std::string kernel_kind = "quantum";
  double kernel_p = 0.0, kernel_gamma = 0.0;
  int kernel_layers = 8;
  std::string kernel_mixing = "inverse_dim", kernel_m = "inf";
  bool kernel_free_diag = false;
  kernel_cmd->add_option("--kind", kernel_kind, "quantum | rbf")->check(CLI::IsMember({"quantum", "rbf"}));
  kernel_cmd->add_option("--p-tilde", kernel_p, "per-layer depolarizing rate");
  kernel_cmd->add_option("--layers", kernel_layers, "noisy layer count L");
  kernel_cmd->add_option("--mixing", kernel_mixing, "inverse_dim | paper_constant");
  kernel_cmd->add_option("--shots,-m", kernel_m, "shots per entry or inf");
  kernel_cmd->add_option("--gamma", kernel_gamma, "RBF width (default 1/(N Var))");
  kernel_cmd->add_flag("--free-diagonal", kernel_free_diag, "let noise and shots act on the diagonal");

  // calibrate
  auto* cal_cmd = app.add_subcommand("calibrate", "repair an indefinite kernel");
  std::string cal_in, cal_ref, cal_method = "nearest", cal_matrix_out;
  double cal_delta = 0.0;
  cal_cmd->add_option("--in", cal_in, "kernel CSV")->required();
  cal_cmd->add_option("--reference", cal_ref, "ideal kernel CSV for the distance report");
  cal_cmd->add_option("--method", cal_method, "none | clip | flip | shift | nearest");
  cal_cmd->add_option("--delta", cal_delta, "eigenvalue floor for nearest");
  cal_cmd->add_option("--matrix-out", cal_matrix_out, "write the calibrated matrix here");

  // train
  auto* train_cmd = app.add_subcommand("train", "fit kernel ridge regression on a precomputed kernel");
  std::string train_kernel, train_labels, train_cross, train_test_labels;
  double train_ridge = kDefaultQuantumRidge;
  train_cmd->add_option("--kernel", train_kernel, "training Gram CSV")->required();
  train_cmd->add_option("--labels", train_labels, "dataset CSV carrying the training labels")->required();
  train_cmd->add_option("--cross", train_cross, "test x train kernel CSV");
  train_cmd->add_option("--test-labels", train_test_labels, "dataset CSV carrying the test labels");
  train_cmd->add_option("--ridge", train_ridge, "ridge added to the kernel");

  // relabel
  auto* relabel_cmd = app.add_subcommand("relabel", "engineer labels that favor the quantum kernel");
  DataOptions relabel_data;
  add_data_options(relabel_cmd, relabel_data);
  double relabel_ridge = 1e-3, relabel_gamma = 0.0;
  std::string relabel_form = "inverse";
  relabel_cmd->add_option("--ridge", relabel_ridge, "ridge for the kernel inverse");
  relabel_cmd->add_option("--gamma", relabel_gamma, "RBF width (default 1/(N Var))");
  relabel_cmd->add_option("--form", relabel_form, "inverse | literal")->check(CLI::IsMember({"inverse", "literal"}));

  // bound
  auto* bound_cmd = app.add_subcommand("bound", "evaluate the generalization-bound terms");
  std::string bound_kernel, bound_labels, bound_m = "inf", bound_mixing = "inverse_dim";
  double bound_p = 0.0, bound_delta = 0.05, bound_ridge = 0.0;
  int bound_layers = 8, bound_qubits = 2;
  bound_cmd->add_option("--kernel", bound_kernel, "ideal Gram CSV")->required();
  bound_cmd->add_option("--labels", bound_labels, "dataset CSV carrying the labels")->required();
  bound_cmd->add_option("--qubits,-N", bound_qubits, "qubit count N")->check(CLI::Range(1, 14));
  bound_cmd->add_option("--shots,-m", bound_m, "shots per entry or inf");
  bound_cmd->add_option("--p-tilde", bound_p, "per-layer depolarizing rate");
  bound_cmd->add_option("--layers", bound_layers, "noisy layer count L");
  bound_cmd->add_option("--delta", bound_delta, "failure probability");
  bound_cmd->add_option("--ridge", bound_ridge, "ridge added before inversion");

  // check
  auto* check_cmd = app.add_subcommand("check", "run the lemma and property verifiers on a random instance");
  int check_qubits = 2, check_n = 20;
  std::int64_t check_m = 100;
  double check_p = 0.05;
  check_cmd->add_option("--qubits,-N", check_qubits, "qubit count N")->check(CLI::Range(1, 14));
  check_cmd->add_option("--n", check_n, "sample count")->check(CLI::Range(2, 2000));
  check_cmd->add_option("--shots,-m", check_m, "shots per entry")->check(CLI::PositiveNumber);
  check_cmd->add_option("--p-tilde", check_p, "per-layer depolarizing rate");

  auto* sweep_cmd = app.add_subcommand("sweep", "run a configured parameter sweep");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (*sweep_cmd) return run_sweep_command(common);

    if (*kernel_cmd) {
      if (common.out.empty()) throw ConfigError("kernel requires --out");
      const Dataset ds = load_data(kernel_data, common.seed);
      if (kernel_kind == "rbf") {
        const double gamma = kernel_gamma > 0.0
                                 ? kernel_gamma
                                 : 1.0 / (static_cast<double>(ds.width()) * pooled_variance(ds.features));
        save_kernel(rbf_gram(ds.features, gamma), common.out);
      } else {
        save_kernel(quantum_gram(ds.features, noise_from(kernel_p, kernel_layers, kernel_mixing),
                                 Shots::parse(kernel_m), common.seed, !kernel_free_diag),
                    common.out);
      }
      return 0;
    }

    if (*cal_cmd) {
      const SymMatrix w(read_matrix_csv(cal_in));
      const SymMatrix q = cal_ref.empty() ? w : SymMatrix(read_matrix_csv(cal_ref));
      const Calibration method = Calibration::parse(cal_method, cal_delta);
      auto [calibrated, report] = calibrate_and_report(q, w, method);
      if (!cal_matrix_out.empty()) write_csv(cal_matrix_out, calibrated.matrix());
      emit_json(to_json(report), common);
      return 0;
    }

    if (*train_cmd) {
      const SymMatrix k(read_matrix_csv(train_kernel));
      const auto y = labels_from(train_labels, k.dim());
      const KernelModel model = fit_krr(k, y, train_ridge);
      Json doc;
      doc["model"] = to_json(model);
      doc["train_accuracy"] = accuracy(predict(model, k.matrix()).labels, y);
      if (!train_cross.empty()) {
        const Matrix cross = read_matrix_csv(train_cross);
        const Prediction pred = predict(model, cross);
        doc["test_predictions"] = pred.labels;
        if (!train_test_labels.empty()) {
          doc["test_accuracy"] = accuracy(pred.labels, labels_from(train_test_labels, pred.labels.size()));
        }
      }
      emit_json(doc, common);
      return 0;
    }

    if (*relabel_cmd) {
      if (common.out.empty()) throw ConfigError("relabel requires --out");
      Dataset ds = load_data(relabel_data, common.seed);
      const double gamma = relabel_gamma > 0.0
                               ? relabel_gamma
                               : 1.0 / (static_cast<double>(ds.width()) * pooled_variance(ds.features));
      const auto q = gram_ideal(ds.features);
      const auto k = rbf_gram(ds.features, gamma);
      const RelabelForm form = relabel_form == "literal" ? RelabelForm::Literal : RelabelForm::InverseClassical;
      ds.labels = relabel_for_advantage(q.matrix, k.matrix, relabel_ridge, form).labels;
      save_csv(ds, common.out);
      return 0;
    }

    if (*bound_cmd) {
      const SymMatrix q(read_matrix_csv(bound_kernel));
      const auto y = labels_from(bound_labels, q.dim());
      const NoiseModel noise = noise_from(bound_p, bound_layers, bound_mixing);
      const BoundReport r =
          theorem1_bound(q, y, Shots::parse(bound_m), noise, bound_qubits, bound_delta, bound_ridge);
      emit_json(to_json(r), common);
      return 0;
    }

    if (*check_cmd) {
      const Dataset ds = generate_synthetic(static_cast<std::size_t>(check_n),
                                            static_cast<std::size_t>(check_qubits), common.seed);
      const NoiseModel noise{check_p, 8, MixingConstant::InverseDim};
      const KernelMatrix q = gram_ideal(ds.features);
      const KernelMatrix noisy = apply_noise(q, noise, true);
      const KernelMatrix w = sample_shots(noisy, Shots::finite(check_m), common.seed);
      Json doc;
      doc["noise_deviation"] = to_json(check_noise_deviation(q, noisy));
      Json cal = Json::object();
      for (const char* name : {"clip", "flip", "shift", "nearest"}) {
        cal[name] = to_json(calibrate_and_report(q.matrix, w.matrix, Calibration::parse(name, 0.0)).second);
      }
      doc["calibration"] = std::move(cal);
      doc["hoeffding"] = to_json(hoeffding_violation_test(0.3, check_m, 0.2, 2000, common.seed));
      std::vector<qsim::CMatrix> unitaries;
      for (std::uint64_t i = 0; i < 3; ++i) unitaries.push_back(qsim::random_unitary(check_qubits, common.seed, i));
      const auto folding = qsim::verify_noise_folding(unitaries, check_p, common.seed);
      Json fold;
      fold["pass"] = folding.pass;
      fold["max_deviation"] = real_to_json(folding.max_deviation);
      fold["effective_p"] = folding.effective_p;
      doc["noise_folding"] = std::move(fold);
      const SymMatrix q_reg = q.matrix.plus_identity(1e-3);
      doc["inverse_perturbation"] = to_json(inverse_perturbation_check(q_reg, w.matrix.plus_identity(1e-3)));
      doc["saturation"] = to_json(saturation_diagnostic(q.matrix, w.matrix, 1e-3));
      emit_json(doc, common);
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return 0;
}

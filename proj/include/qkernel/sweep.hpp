#pragma once

#include "qkernel/kernels.hpp"
#include "qkernel/serialize.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qkernel {

struct DataSource {
  std::string kind = "synthetic";  // synthetic | csv
  std::string path;                // csv
  std::size_t dim = 2;             // synthetic feature width d
};

struct SweepConfig {
  DataSource dataset;
  int num_qubits = 2;
  std::vector<std::size_t> n_values{100};
  std::size_t n_test = 100;
  std::vector<Shots> shots{Shots::infinite()};
  std::vector<double> p_tilde{0.0};
  int layers = 8;
  MixingConstant mixing = MixingConstant::InverseDim;
  std::vector<std::string> methods{"nearest"};
  double nearest_delta = 1e-3;
  double ridge = 1e-8;
  double relabel_ridge = 1e-3;
  std::string relabel_form = "inverse";  // inverse | literal
  double feature_scale = 1.0;
  bool fix_diagonal = true;
  double delta = 0.05;
  std::vector<std::uint64_t> seeds{0};
  bool rbf_baseline = true;
  bool record_wall_time = false;
  std::string output;
  std::string format = "csv";

  void validate() const;
};

// Parses the JSON document; unknown keys and ill-typed values raise ConfigError.
SweepConfig parse_sweep_config(const Json& doc);
SweepConfig load_sweep_config(const std::string& path);

struct ResultRecord {
  std::string kind;  // quantum | rbf
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::size_t n_test = 0;
  int num_qubits = 0;
  std::string m;  // shot count or "inf"; empty for rbf
  std::optional<double> p_tilde;
  std::optional<double> p;
  std::optional<int> layers;
  std::string mixing;
  std::string method;
  std::optional<double> ridge;
  std::optional<double> train_accuracy;
  std::optional<double> test_accuracy;
  std::optional<double> c1;
  std::optional<double> geometric_difference;
  std::optional<double> dist_before;
  std::optional<double> dist_after;
  std::optional<double> min_eig_before;
  std::optional<double> min_eig_after;
  std::string lemma;
  std::optional<double> c_q;
  std::optional<double> c2;
  std::optional<double> term_ideal;
  std::optional<double> term_noise;
  std::optional<double> breakdown_p;
  std::optional<double> rbf_gamma;
  std::optional<double> rbf_val_accuracy;
  std::optional<double> wall_time_ms;
  std::string error;

  bool operator==(const ResultRecord&) const = default;
};

const std::vector<std::string>& record_columns();

// Runs every (n, m, p_tilde, method, seed) coordinate plus one RBF baseline
// per (seed, n). Stage failures are captured in the record's error field.
// Output is sorted by coordinate, never by completion order.
std::vector<ResultRecord> run_sweep(const SweepConfig& config);

// format: csv | json. Overwrites `path`.
void emit_results(const std::vector<ResultRecord>& records, const std::string& path,
                  const std::string& format);
Json records_to_json(const std::vector<ResultRecord>& records);
std::vector<ResultRecord> records_from_json(const Json& doc);
std::vector<ResultRecord> load_results_json(const std::string& path);

// Thread count for sweeps: QKERNEL_THREADS if set, else hardware concurrency.
unsigned sweep_threads();

}  // namespace qkernel

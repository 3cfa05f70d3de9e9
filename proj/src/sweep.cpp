#include "qkernel/sweep.hpp"

#include "qkernel/bounds.hpp"
#include "qkernel/calibrate.hpp"
#include "qkernel/datasets.hpp"
#include "qkernel/errors.hpp"
#include "qkernel/learner.hpp"
#include "qkernel/rng.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

namespace qkernel {

namespace {

using Clock = std::chrono::steady_clock;

// ---------------------------------------------------------------------------
// Config parsing

template <typename T>
T get_as(const Json& j, const char* key) {
  try {
    return j.get<T>();
  } catch (const Json::exception&) {
    throw ConfigError(std::string("config key '") + key + "' has the wrong type: " + j.dump());
  }
}

Shots parse_shots(const Json& j) {
  if (j.is_string()) {
    try {
      return Shots::parse(j.get<std::string>());
    } catch (const InputError& e) {
      throw ConfigError(e.what());
    }
  }
  if (j.is_number_integer()) {
    const auto m = j.get<std::int64_t>();
    if (m < 1) throw ConfigError("config: every m must be >= 1 or \"inf\"");
    return Shots::finite(m);
  }
  throw ConfigError("config: m entries must be integers or \"inf\", got " + j.dump());
}

DataSource parse_source(const Json& j) {
  if (!j.is_object()) throw ConfigError("config key 'dataset' must be an object");
  DataSource src;
  for (const auto& [key, value] : j.items()) {
    if (key == "source") {
      src.kind = get_as<std::string>(value, "dataset.source");
    } else if (key == "path") {
      src.path = get_as<std::string>(value, "dataset.path");
    } else if (key == "d") {
      src.dim = get_as<std::size_t>(value, "dataset.d");
    } else {
      throw ConfigError("unknown config key 'dataset." + key + "'");
    }
  }
  return src;
}

// ---------------------------------------------------------------------------
// Sweep state

struct PreparedSeed {
  Matrix train_pool;  // max(n) rows, subsets take the leading rows
  Matrix test;
  std::vector<int> train_labels;
  std::vector<int> test_labels;
  double gamma0 = 0.0;  // 1 / (N Var) over the pool
};

struct KeyedRecord {
  std::vector<std::size_t> key;
  ResultRecord record;
};

Dataset load_pool(const SweepConfig& cfg, std::uint64_t seed, std::size_t pool_size) {
  if (cfg.dataset.kind == "synthetic") {
    return generate_synthetic(pool_size, cfg.dataset.dim, seed);
  }
  Dataset all = load_csv(cfg.dataset.path);
  const Dataset chosen = split(all, pool_size, 0, seed);
  Dataset pool;
  pool.features = chosen.rows(chosen.split->train);
  pool.labels = chosen.labels_at(chosen.split->train);
  return pool;
}

PreparedSeed prepare_seed(const SweepConfig& cfg, std::uint64_t seed) {
  const std::size_t max_n = *std::max_element(cfg.n_values.begin(), cfg.n_values.end());
  const std::size_t pool_size = max_n + cfg.n_test;
  Dataset pool = load_pool(cfg, seed, pool_size);
  pool.features = pca(pool.features, static_cast<std::size_t>(cfg.num_qubits)).projected *
                  cfg.feature_scale;

  const double var = pooled_variance(pool.features);
  if (!(var > 0.0)) throw InputError("sweep: pooled feature variance is zero");
  PreparedSeed out;
  out.gamma0 = 1.0 / (static_cast<double>(cfg.num_qubits) * var);
  const KernelMatrix q_all = gram_ideal(pool.features);
  const KernelMatrix k_all = rbf_gram(pool.features, out.gamma0);
  const RelabelForm form =
      cfg.relabel_form == "literal" ? RelabelForm::Literal : RelabelForm::InverseClassical;
  pool.labels = relabel_for_advantage(q_all.matrix, k_all.matrix, cfg.relabel_ridge, form).labels;

  const Dataset parts = split(pool, max_n, cfg.n_test, seed);
  out.train_pool = parts.rows(parts.split->train);
  out.train_labels = parts.labels_at(parts.split->train);
  out.test = parts.rows(parts.split->test);
  out.test_labels = parts.labels_at(parts.split->test);
  return out;
}

ResultRecord base_record(const SweepConfig& cfg, std::uint64_t seed, std::size_t n) {
  ResultRecord r;
  r.seed = seed;
  r.n = n;
  r.n_test = cfg.n_test;
  r.num_qubits = cfg.num_qubits;
  return r;
}

std::uint64_t coordinate_seed(std::uint64_t seed, std::size_t n, const Shots& shots, double p_tilde) {
  const std::uint64_t m_code = shots.count ? static_cast<std::uint64_t>(*shots.count) : 0;
  return KeyedStream::derive(seed, StreamRole::Generic,
                             {static_cast<std::uint64_t>(n), m_code, std::bit_cast<std::uint64_t>(p_tilde)});
}

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

ResultRecord rbf_record(const SweepConfig& cfg, std::uint64_t seed, std::size_t n,
                        const Matrix& x_tr, const std::vector<int>& y_tr, const Matrix& x_te,
                        const std::vector<int>& y_te) {
  const auto start = Clock::now();
  ResultRecord r = base_record(cfg, seed, n);
  r.kind = "rbf";
  try {
    // Validation split drawn from the training rows only.
    Dataset train_ds;
    train_ds.features = x_tr;
    train_ds.labels = y_tr;
    const std::size_t n_fit = std::max<std::size_t>(1, n / 2);
    if (n_fit >= n) throw InputError("rbf baseline: need at least two training samples");
    const Dataset halves =
        split(train_ds, n_fit, n - n_fit, KeyedStream::derive(seed, StreamRole::Validation, {n}));
    const GridSearchResult best =
        grid_search_rbf(halves.rows(halves.split->train), halves.labels_at(halves.split->train),
                        halves.rows(halves.split->test), halves.labels_at(halves.split->test));
    const KernelMatrix k = rbf_gram(x_tr, best.gamma);
    const KernelModel model = fit_krr(k, y_tr, best.ridge);
    r.rbf_gamma = best.gamma;
    r.ridge = best.ridge;
    r.rbf_val_accuracy = best.accuracy;
    r.train_accuracy = accuracy(predict(model, k.matrix.matrix()).labels, y_tr);
    r.test_accuracy = accuracy(predict(model, rbf_cross(x_tr, x_te, best.gamma)).labels, y_te);
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  if (cfg.record_wall_time) r.wall_time_ms = elapsed_ms(start);
  return r;
}

// All records for one (seed, n) pair.
std::vector<KeyedRecord> run_task(const SweepConfig& cfg, std::size_t seed_idx, std::size_t n_idx,
                                  const PreparedSeed* prepared, const std::string& prep_error) {
  const std::uint64_t seed = cfg.seeds[seed_idx];
  const std::size_t n = cfg.n_values[n_idx];
  std::vector<KeyedRecord> out;

  std::vector<Calibration> methods;
  for (const auto& name : cfg.methods) methods.push_back(Calibration::parse(name, cfg.nearest_delta));

  auto add_failure_records = [&](const std::string& err) {
    for (std::size_t mi = 0; mi < cfg.shots.size(); ++mi) {
      for (std::size_t pi = 0; pi < cfg.p_tilde.size(); ++pi) {
        for (std::size_t ci = 0; ci < methods.size(); ++ci) {
          ResultRecord r = base_record(cfg, seed, n);
          r.kind = "quantum";
          r.m = cfg.shots[mi].to_string();
          r.p_tilde = cfg.p_tilde[pi];
          r.method = methods[ci].name();
          r.error = err;
          out.push_back({{0, n_idx, mi, pi, ci, seed_idx}, std::move(r)});
        }
      }
    }
    if (cfg.rbf_baseline) {
      ResultRecord r = base_record(cfg, seed, n);
      r.kind = "rbf";
      r.error = err;
      out.push_back({{1, n_idx, 0, 0, 0, seed_idx}, std::move(r)});
    }
  };

  if (prepared == nullptr) {
    add_failure_records(prep_error);
    return out;
  }
  if (n > prepared->train_pool.rows()) {
    add_failure_records("n exceeds the prepared training pool");
    return out;
  }

  const auto rows = static_cast<Eigen::Index>(n);
  const Matrix x_tr = prepared->train_pool.topRows(rows);
  const std::vector<int> y_tr(prepared->train_labels.begin(),
                              prepared->train_labels.begin() + static_cast<std::ptrdiff_t>(n));
  const Matrix& x_te = prepared->test;
  const std::vector<int>& y_te = prepared->test_labels;

  KernelMatrix q_tr = gram_ideal(x_tr);
  const Matrix ideal_cross = quantum_cross(x_tr, x_te, NoiseModel{}, Shots::infinite(), 0);

  std::optional<double> c1;
  std::optional<double> gd;
  try {
    c1 = model_complexity_c1(q_tr.matrix, y_tr, cfg.ridge);
  } catch (const std::exception&) {
  }
  try {
    gd = geometric_difference(rbf_gram(x_tr, prepared->gamma0).matrix, q_tr.matrix, y_tr,
                              cfg.relabel_ridge);
  } catch (const std::exception&) {
  }

  for (std::size_t mi = 0; mi < cfg.shots.size(); ++mi) {
    for (std::size_t pi = 0; pi < cfg.p_tilde.size(); ++pi) {
      const Shots shots = cfg.shots[mi];
      const NoiseModel noise{cfg.p_tilde[pi], cfg.layers, cfg.mixing};
      const std::uint64_t stream_seed = coordinate_seed(seed, n, shots, noise.p_tilde);

      std::optional<KernelMatrix> w_hat;
      Matrix cross;
      std::string stage_error;
      const auto stage_start = Clock::now();
      try {
        if (noise.p_tilde == 0.0 && shots.is_infinite()) {
          w_hat = q_tr;
        } else {
          KernelMatrix noisy = apply_noise(q_tr, noise, cfg.fix_diagonal);
          w_hat = shots.is_infinite() ? noisy : sample_shots(noisy, shots, stream_seed);
        }
        cross = noisy_cross(ideal_cross, cfg.num_qubits, noise, shots, stream_seed);
      } catch (const std::exception& e) {
        stage_error = e.what();
      }
      const double stage_ms = elapsed_ms(stage_start);

      std::optional<BoundReport> bound;
      try {
        bound = theorem1_bound(q_tr.matrix, y_tr, shots, noise, cfg.num_qubits, cfg.delta, cfg.ridge);
      } catch (const std::exception&) {
      }

      for (std::size_t ci = 0; ci < methods.size(); ++ci) {
        const auto start = Clock::now();
        ResultRecord r = base_record(cfg, seed, n);
        r.kind = "quantum";
        r.m = shots.to_string();
        r.p_tilde = noise.p_tilde;
        r.p = noise.effective_p();
        r.layers = noise.layers;
        r.mixing = to_string(noise.mixing);
        r.method = methods[ci].name();
        r.ridge = cfg.ridge;
        r.c1 = c1;
        r.geometric_difference = gd;
        if (bound) {
          r.c_q = bound->c_q;
          r.c2 = bound->c2;
          r.term_ideal = bound->term_ideal;
          r.term_noise = bound->term_noise;
          r.breakdown_p = bound->breakdown_p;
        }
        if (!stage_error.empty()) {
          r.error = stage_error;
        } else {
          try {
            auto [calibrated, report] = calibrate_and_report(q_tr.matrix, w_hat->matrix, methods[ci]);
            r.dist_before = report.dist_before;
            r.dist_after = report.dist_after;
            r.min_eig_before = report.min_eig_before;
            r.min_eig_after = report.min_eig_after;
            r.lemma = to_string(report.lemma);
            const KernelModel model = fit_krr(calibrated, y_tr, cfg.ridge, w_hat->params);
            r.train_accuracy = accuracy(predict(model, calibrated.matrix()).labels, y_tr);
            r.test_accuracy = accuracy(predict(model, cross).labels, y_te);
          } catch (const std::exception& e) {
            r.error = e.what();
          }
        }
        if (cfg.record_wall_time) r.wall_time_ms = elapsed_ms(start) + stage_ms;
        out.push_back({{0, n_idx, mi, pi, ci, seed_idx}, std::move(r)});
      }
    }
  }

  if (cfg.rbf_baseline) {
    out.push_back({{1, n_idx, 0, 0, 0, seed_idx}, rbf_record(cfg, seed, n, x_tr, y_tr, x_te, y_te)});
  }
  return out;
}

template <typename F>
void parallel_for(std::size_t count, F body) {
  const unsigned threads = std::min<unsigned>(sweep_threads(), static_cast<unsigned>(std::max<std::size_t>(count, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

// ---------------------------------------------------------------------------
// Output

std::string opt_csv(const std::optional<double>& v) { return v ? format_real(*v) : ""; }

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

Json opt_json(const std::optional<double>& v) { return v ? real_to_json(*v) : Json(nullptr); }

std::optional<double> opt_from_json(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return real_from_json(j);
}

}  // namespace

void SweepConfig::validate() const {
  if (dataset.kind != "synthetic" && dataset.kind != "csv") {
    throw ConfigError("dataset.source must be \"synthetic\" or \"csv\"");
  }
  if (dataset.kind == "csv" && dataset.path.empty()) throw ConfigError("dataset.path is required for csv");
  if (dataset.kind == "synthetic" && dataset.dim < static_cast<std::size_t>(num_qubits)) {
    throw ConfigError("dataset.d must be >= num_qubits");
  }
  if (num_qubits < 1 || num_qubits > 14) throw ConfigError("num_qubits must lie in [1, 14]");
  if (n_values.empty()) throw ConfigError("n list is empty");
  for (std::size_t n : n_values) {
    if (n < 2) throw ConfigError("every n must be >= 2");
  }
  if (n_test < 1) throw ConfigError("n_test must be >= 1");
  if (shots.empty()) throw ConfigError("m list is empty");
  for (const auto& s : shots) {
    if (s.count && *s.count < 1) throw ConfigError("every m must be >= 1 or \"inf\"");
  }
  if (p_tilde.empty()) throw ConfigError("p_tilde list is empty");
  for (double p : p_tilde) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("every p_tilde must lie in [0, 1]");
  }
  if (layers < 1) throw ConfigError("layers must be >= 1");
  if (methods.empty()) throw ConfigError("methods list is empty");
  for (const auto& m : methods) {
    try {
      Calibration::parse(m, nearest_delta);
    } catch (const InputError& e) {
      throw ConfigError(e.what());
    }
  }
  if (!(ridge >= 0.0)) throw ConfigError("ridge must be >= 0");
  if (!(relabel_ridge >= 0.0)) throw ConfigError("relabel_ridge must be >= 0");
  if (relabel_form != "inverse" && relabel_form != "literal") {
    throw ConfigError("relabel_form must be \"inverse\" or \"literal\"");
  }
  if (!(feature_scale > 0.0)) throw ConfigError("feature_scale must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must lie in (0, 1)");
  if (seeds.empty()) throw ConfigError("seeds list is empty");
  if (format != "csv" && format != "json") throw ConfigError("format must be \"csv\" or \"json\"");
}

SweepConfig parse_sweep_config(const Json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  SweepConfig cfg;
  for (const auto& [key, value] : doc.items()) {
    if (key == "dataset") {
      cfg.dataset = parse_source(value);
    } else if (key == "num_qubits") {
      cfg.num_qubits = get_as<int>(value, "num_qubits");
    } else if (key == "n") {
      cfg.n_values = get_as<std::vector<std::size_t>>(value, "n");
    } else if (key == "n_test") {
      cfg.n_test = get_as<std::size_t>(value, "n_test");
    } else if (key == "m") {
      if (!value.is_array()) throw ConfigError("config key 'm' must be an array");
      cfg.shots.clear();
      for (const auto& e : value) cfg.shots.push_back(parse_shots(e));
    } else if (key == "p_tilde") {
      cfg.p_tilde = get_as<std::vector<double>>(value, "p_tilde");
    } else if (key == "layers") {
      cfg.layers = get_as<int>(value, "layers");
    } else if (key == "mixing") {
      try {
        cfg.mixing = mixing_constant_from_string(get_as<std::string>(value, "mixing"));
      } catch (const InputError& e) {
        throw ConfigError(e.what());
      }
    } else if (key == "methods") {
      cfg.methods = get_as<std::vector<std::string>>(value, "methods");
    } else if (key == "nearest_delta") {
      cfg.nearest_delta = get_as<double>(value, "nearest_delta");
    } else if (key == "ridge") {
      cfg.ridge = get_as<double>(value, "ridge");
    } else if (key == "relabel_ridge") {
      cfg.relabel_ridge = get_as<double>(value, "relabel_ridge");
    } else if (key == "relabel_form") {
      cfg.relabel_form = get_as<std::string>(value, "relabel_form");
    } else if (key == "feature_scale") {
      cfg.feature_scale = get_as<double>(value, "feature_scale");
    } else if (key == "fix_diagonal") {
      cfg.fix_diagonal = get_as<bool>(value, "fix_diagonal");
    } else if (key == "delta") {
      cfg.delta = get_as<double>(value, "delta");
    } else if (key == "seeds") {
      cfg.seeds = get_as<std::vector<std::uint64_t>>(value, "seeds");
    } else if (key == "rbf_baseline") {
      cfg.rbf_baseline = get_as<bool>(value, "rbf_baseline");
    } else if (key == "record_wall_time") {
      cfg.record_wall_time = get_as<bool>(value, "record_wall_time");
    } else if (key == "output") {
      cfg.output = get_as<std::string>(value, "output");
    } else if (key == "format") {
      cfg.format = get_as<std::string>(value, "format");
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

SweepConfig load_sweep_config(const std::string& path) {
  try {
    return parse_sweep_config(read_json(path));
  } catch (const InputError& e) {
    throw ConfigError(e.what());
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
}

unsigned sweep_threads() {
  if (const char* env = std::getenv("QKERNEL_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

std::vector<ResultRecord> run_sweep(const SweepConfig& config) {
  config.validate();
  const std::size_t seeds = config.seeds.size();
  std::vector<std::optional<PreparedSeed>> prepared(seeds);
  std::vector<std::string> prep_errors(seeds);
  parallel_for(seeds, [&](std::size_t s) {
    try {
      prepared[s] = prepare_seed(config, config.seeds[s]);
    } catch (const std::exception& e) {
      prep_errors[s] = e.what();
    }
  });

  const std::size_t tasks = seeds * config.n_values.size();
  std::vector<std::vector<KeyedRecord>> results(tasks);
  parallel_for(tasks, [&](std::size_t t) {
    const std::size_t s = t / config.n_values.size();
    const std::size_t ni = t % config.n_values.size();
    try {
      results[t] = run_task(config, s, ni, prepared[s] ? &*prepared[s] : nullptr, prep_errors[s]);
    } catch (const std::exception& e) {
      results[t] = run_task(config, s, ni, nullptr, e.what());
    }
  });

  std::vector<KeyedRecord> all;
  for (auto& r : results) std::move(r.begin(), r.end(), std::back_inserter(all));
  std::sort(all.begin(), all.end(), [](const KeyedRecord& a, const KeyedRecord& b) { return a.key < b.key; });
  std::vector<ResultRecord> out;
  out.reserve(all.size());
  for (auto& k : all) out.push_back(std::move(k.record));
  return out;
}

const std::vector<std::string>& record_columns() {
  static const std::vector<std::string> cols{
      "kind",         "seed",          "n",
      "n_test",       "num_qubits",    "m",
      "p_tilde",      "p",             "layers",
      "mixing",       "method",        "ridge",
      "train_accuracy", "test_accuracy", "c1",
      "geometric_difference", "dist_before", "dist_after",
      "min_eig_before", "min_eig_after", "lemma",
      "c_q",          "c2",            "term_ideal",
      "term_noise",   "breakdown_p",   "rbf_gamma",
      "rbf_val_accuracy", "wall_time_ms", "error"};
  return cols;
}

Json records_to_json(const std::vector<ResultRecord>& records) {
  Json arr = Json::array();
  for (const auto& r : records) {
    Json j;
    j["kind"] = r.kind;
    j["seed"] = r.seed;
    j["n"] = r.n;
    j["n_test"] = r.n_test;
    j["num_qubits"] = r.num_qubits;
    j["m"] = r.m;
    j["p_tilde"] = opt_json(r.p_tilde);
    j["p"] = opt_json(r.p);
    j["layers"] = r.layers ? Json(*r.layers) : Json(nullptr);
    j["mixing"] = r.mixing;
    j["method"] = r.method;
    j["ridge"] = opt_json(r.ridge);
    j["train_accuracy"] = opt_json(r.train_accuracy);
    j["test_accuracy"] = opt_json(r.test_accuracy);
    j["c1"] = opt_json(r.c1);
    j["geometric_difference"] = opt_json(r.geometric_difference);
    j["dist_before"] = opt_json(r.dist_before);
    j["dist_after"] = opt_json(r.dist_after);
    j["min_eig_before"] = opt_json(r.min_eig_before);
    j["min_eig_after"] = opt_json(r.min_eig_after);
    j["lemma"] = r.lemma;
    j["c_q"] = opt_json(r.c_q);
    j["c2"] = opt_json(r.c2);
    j["term_ideal"] = opt_json(r.term_ideal);
    j["term_noise"] = opt_json(r.term_noise);
    j["breakdown_p"] = opt_json(r.breakdown_p);
    j["rbf_gamma"] = opt_json(r.rbf_gamma);
    j["rbf_val_accuracy"] = opt_json(r.rbf_val_accuracy);
    j["wall_time_ms"] = opt_json(r.wall_time_ms);
    j["error"] = r.error;
    arr.push_back(std::move(j));
  }
  return arr;
}

std::vector<ResultRecord> records_from_json(const Json& doc) {
  if (!doc.is_array()) throw InputError("result document must be a JSON array");
  std::vector<ResultRecord> out;
  for (const auto& j : doc) {
    ResultRecord r;
    r.kind = j.at("kind").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.n = j.at("n").get<std::size_t>();
    r.n_test = j.at("n_test").get<std::size_t>();
    r.num_qubits = j.at("num_qubits").get<int>();
    r.m = j.at("m").get<std::string>();
    r.p_tilde = opt_from_json(j.at("p_tilde"));
    r.p = opt_from_json(j.at("p"));
    if (!j.at("layers").is_null()) r.layers = j.at("layers").get<int>();
    r.mixing = j.at("mixing").get<std::string>();
    r.method = j.at("method").get<std::string>();
    r.ridge = opt_from_json(j.at("ridge"));
    r.train_accuracy = opt_from_json(j.at("train_accuracy"));
    r.test_accuracy = opt_from_json(j.at("test_accuracy"));
    r.c1 = opt_from_json(j.at("c1"));
    r.geometric_difference = opt_from_json(j.at("geometric_difference"));
    r.dist_before = opt_from_json(j.at("dist_before"));
    r.dist_after = opt_from_json(j.at("dist_after"));
    r.min_eig_before = opt_from_json(j.at("min_eig_before"));
    r.min_eig_after = opt_from_json(j.at("min_eig_after"));
    r.lemma = j.at("lemma").get<std::string>();
    r.c_q = opt_from_json(j.at("c_q"));
    r.c2 = opt_from_json(j.at("c2"));
    r.term_ideal = opt_from_json(j.at("term_ideal"));
    r.term_noise = opt_from_json(j.at("term_noise"));
    r.breakdown_p = opt_from_json(j.at("breakdown_p"));
    r.rbf_gamma = opt_from_json(j.at("rbf_gamma"));
    r.rbf_val_accuracy = opt_from_json(j.at("rbf_val_accuracy"));
    r.wall_time_ms = opt_from_json(j.at("wall_time_ms"));
    r.error = j.at("error").get<std::string>();
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<ResultRecord> load_results_json(const std::string& path) {
  return records_from_json(read_json(path));
}

void emit_results(const std::vector<ResultRecord>& records, const std::string& path,
                  const std::string& format) {
  if (format == "json") {
    write_json(records_to_json(records), path);
    return;
  }
  if (format != "csv") throw InputError("unknown output format '" + format + "'");
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  const auto& cols = record_columns();
  for (std::size_t c = 0; c < cols.size(); ++c) out << (c ? "," : "") << cols[c];
  out << '\n';
  for (const auto& r : records) {
    out << r.kind << ',' << r.seed << ',' << r.n << ',' << r.n_test << ',' << r.num_qubits << ','
        << r.m << ',' << opt_csv(r.p_tilde) << ',' << opt_csv(r.p) << ','
        << (r.layers ? std::to_string(*r.layers) : "") << ',' << r.mixing << ',' << r.method << ','
        << opt_csv(r.ridge) << ',' << opt_csv(r.train_accuracy) << ',' << opt_csv(r.test_accuracy)
        << ',' << opt_csv(r.c1) << ',' << opt_csv(r.geometric_difference) << ','
        << opt_csv(r.dist_before) << ',' << opt_csv(r.dist_after) << ','
        << opt_csv(r.min_eig_before) << ',' << opt_csv(r.min_eig_after) << ',' << r.lemma << ','
        << opt_csv(r.c_q) << ',' << opt_csv(r.c2) << ',' << opt_csv(r.term_ideal) << ','
        << opt_csv(r.term_noise) << ',' << opt_csv(r.breakdown_p) << ',' << opt_csv(r.rbf_gamma)
        << ',' << opt_csv(r.rbf_val_accuracy) << ',' << opt_csv(r.wall_time_ms) << ','
        << csv_escape(r.error) << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace qkernel

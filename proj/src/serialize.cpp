#include "qkernel/serialize.hpp"

#include "qkernel/errors.hpp"

#include <cmath>
#include <fstream>
#include <limits>

namespace qkernel {

Json real_to_json(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double real_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw InputError("expected a real number, got " + j.dump());
}

Json to_json(const NoiseModel& noise) {
  Json j;
  j["p_tilde"] = noise.p_tilde;
  j["layers"] = noise.layers;
  j["mixing"] = to_string(noise.mixing);
  j["p"] = noise.effective_p();
  return j;
}

Json to_json(const KernelParams& params) {
  Json j;
  j["num_qubits"] = params.num_qubits;
  j["noise"] = params.noise ? to_json(*params.noise) : Json(nullptr);
  j["m"] = params.shots ? Json(params.shots->to_string()) : Json(nullptr);
  j["seed"] = params.seed ? Json(*params.seed) : Json(nullptr);
  j["gamma"] = params.gamma ? real_to_json(*params.gamma) : Json(nullptr);
  j["fix_diagonal"] = params.fix_diagonal;
  if (!params.calibration.empty()) j["calibration"] = params.calibration;
  return j;
}

Json kernel_sidecar(const KernelMatrix& k) {
  Json j;
  j["provenance"] = to_string(k.provenance);
  j["dim"] = k.matrix.dim();
  j["params"] = to_json(k.params);
  return j;
}

Json to_json(const CalibrationReport& report) {
  Json j;
  j["method"] = report.method.name();
  if (report.method.method == CalibrationMethod::NearestPsd) j["delta"] = report.method.delta;
  j["dist_before"] = real_to_json(report.dist_before);
  j["dist_after"] = real_to_json(report.dist_after);
  j["min_eig_before"] = real_to_json(report.min_eig_before);
  j["min_eig_after"] = real_to_json(report.min_eig_after);
  j["lemma"] = to_string(report.lemma);
  return j;
}

Json to_json(const KernelModel& model) {
  Json j;
  Json alpha = Json::array();
  for (Eigen::Index i = 0; i < model.alpha.size(); ++i) alpha.push_back(real_to_json(model.alpha(i)));
  j["alpha"] = std::move(alpha);
  j["labels"] = model.labels;
  j["ridge"] = model.ridge;
  j["provenance"] = to_json(model.provenance);
  return j;
}

Json to_json(const BoundReport& r) {
  Json j;
  j["n"] = r.n;
  j["m"] = r.shots.to_string();
  j["num_qubits"] = r.num_qubits;
  j["p"] = real_to_json(r.p);
  j["delta"] = real_to_json(r.delta);
  j["c1"] = real_to_json(r.c1);
  j["c_q"] = real_to_json(r.c_q);
  j["c2"] = real_to_json(r.c2);
  j["term_ideal"] = real_to_json(r.term_ideal);
  j["term_noise"] = real_to_json(r.term_noise);
  j["breakdown_p"] = real_to_json(r.breakdown_p);
  return j;
}

Json to_json(const SaturationReport& r) {
  Json j;
  j["n"] = r.n;
  j["s2"] = real_to_json(r.s2);
  j["s_frob"] = real_to_json(r.s_frob);
  j["pass"] = r.pass;
  j["sqrt_s2"] = real_to_json(r.sqrt_s2);
  j["epsilon"] = real_to_json(r.epsilon);
  j["lower"] = real_to_json(r.lower);
  return j;
}

Json to_json(const HoeffdingReport& r) {
  Json j;
  j["q"] = r.q;
  j["m"] = r.m;
  j["gap"] = r.gap;
  j["trials"] = r.trials;
  j["violations"] = r.violations;
  j["empirical"] = r.empirical;
  j["bound"] = real_to_json(r.bound);
  j["slack"] = r.slack;
  j["pass"] = r.pass;
  return j;
}

Json to_json(const CheckReport& r) {
  Json j;
  j["applicable"] = r.applicable;
  j["pass"] = r.pass;
  j["lhs"] = real_to_json(r.lhs);
  j["rhs"] = real_to_json(r.rhs);
  if (!r.detail.empty()) j["detail"] = r.detail;
  return j;
}

void write_json(const Json& doc, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path);
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

void save_kernel(const KernelMatrix& k, const std::string& path) {
  write_csv(path, k.matrix.matrix());
  write_json(kernel_sidecar(k), path + ".json");
}

}  // namespace qkernel

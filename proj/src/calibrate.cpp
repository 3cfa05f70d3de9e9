#include "qkernel/calibrate.hpp"

#include "qkernel/errors.hpp"

#include <algorithm>
#include <cmath>

namespace qkernel {

namespace {

// Applies f to every eigenvalue. When f leaves the spectrum unchanged the
// input is returned as is, so PSD inputs pass through bit-for-bit.
template <typename F>
SymMatrix map_spectrum(const SymMatrix& w, F f) {
  const EigenDecomposition eig = eig_sym(w);
  Vector mapped = eig.values.unaryExpr(f);
  if (mapped == eig.values) return w;
  return from_spectrum(eig.vectors, mapped);
}

bool is_psd(const SymMatrix& m, double min_eig) {
  const double scale = std::max(1.0, spectral_norm(m));
  return min_eig >= -1e-9 * scale;
}

}  // namespace

SymMatrix clip(const SymMatrix& w) {
  return map_spectrum(w, [](double l) { return std::max(l, 0.0); });
}

SymMatrix flip(const SymMatrix& w) {
  return map_spectrum(w, [](double l) { return std::abs(l); });
}

SymMatrix shift(const SymMatrix& w) {
  const double lmin = eig_sym(w).min();
  if (lmin >= 0.0) return w;
  return w.plus_identity(-lmin);
}

SymMatrix nearest_psd(const SymMatrix& w, double delta) {
  if (!(delta >= 0.0) || !std::isfinite(delta)) {
    throw InputError("nearest_psd: delta must be a finite nonnegative number");
  }
  return map_spectrum(w, [delta](double l) { return std::max(l, delta); });
}

std::string Calibration::name() const {
  switch (method) {
    case CalibrationMethod::None: return "none";
    case CalibrationMethod::Clip: return "clip";
    case CalibrationMethod::Flip: return "flip";
    case CalibrationMethod::Shift: return "shift";
    case CalibrationMethod::NearestPsd: return "nearest";
  }
  return "unknown";
}

Calibration Calibration::parse(const std::string& name, double nearest_delta) {
  if (name == "none") return {CalibrationMethod::None, 0.0};
  if (name == "clip") return {CalibrationMethod::Clip, 0.0};
  if (name == "flip") return {CalibrationMethod::Flip, 0.0};
  if (name == "shift") return {CalibrationMethod::Shift, 0.0};
  if (name == "nearest") {
    if (!(nearest_delta >= 0.0)) throw InputError("nearest: delta must be >= 0");
    return {CalibrationMethod::NearestPsd, nearest_delta};
  }
  throw InputError("unknown calibration method '" + name +
                   "' (expected none | clip | flip | shift | nearest)");
}

SymMatrix Calibration::apply(const SymMatrix& w) const {
  switch (method) {
    case CalibrationMethod::None: return w;
    case CalibrationMethod::Clip: return clip(w);
    case CalibrationMethod::Flip: return flip(w);
    case CalibrationMethod::Shift: return shift(w);
    case CalibrationMethod::NearestPsd: return nearest_psd(w, delta);
  }
  return w;
}

std::string to_string(LemmaStatus s) {
  switch (s) {
    case LemmaStatus::Pass: return "pass";
    case LemmaStatus::Fail: return "fail";
    case LemmaStatus::NotApplicable: return "n/a";
  }
  return "n/a";
}

std::pair<SymMatrix, CalibrationReport> calibrate_and_report(const SymMatrix& q,
                                                              const SymMatrix& w,
                                                              const Calibration& method) {
  if (q.dim() != w.dim()) throw InputError("calibrate_and_report: dimension mismatch");
  SymMatrix out = method.apply(w);

  CalibrationReport report;
  report.method = method;
  report.dist_before = frobenius_norm(q - w);
  report.dist_after = frobenius_norm(q - out);
  report.min_eig_before = eig_sym(w).min();
  report.min_eig_after = eig_sym(out).min();

  bool applicable = is_psd(q, eig_sym(q).min());
  switch (method.method) {
    case CalibrationMethod::None: applicable = false; break;
    case CalibrationMethod::Clip:
    case CalibrationMethod::Flip: break;
    case CalibrationMethod::Shift:
      applicable = applicable && std::abs(w.trace() - static_cast<double>(w.dim())) <= 1e-6;
      break;
    case CalibrationMethod::NearestPsd: applicable = applicable && method.delta == 0.0; break;
  }
  if (applicable) {
    report.lemma = report.dist_after <= report.dist_before * (1.0 + 1e-9) ? LemmaStatus::Pass
                                                                          : LemmaStatus::Fail;
  }
  return {std::move(out), report};
}

}  // namespace qkernel

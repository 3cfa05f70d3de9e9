#pragma once

#include "qkernel/linalg.hpp"

#include <optional>
#include <string>
#include <utility>

namespace qkernel {

// Spectral repairs for indefinite kernels. None of them renormalize the
// diagonal afterwards.

// Negative eigenvalues set to zero.
SymMatrix clip(const SymMatrix& w);
// Negative eigenvalues replaced by their magnitude.
SymMatrix flip(const SymMatrix& w);
// W + |min(lambda_min, 0)| I.
SymMatrix shift(const SymMatrix& w);
// Eigenvalues below delta raised to delta.
SymMatrix nearest_psd(const SymMatrix& w, double delta);

enum class CalibrationMethod { None, Clip, Flip, Shift, NearestPsd };

struct Calibration {
  CalibrationMethod method = CalibrationMethod::None;
  double delta = 0.0;  // NearestPsd floor

  std::string name() const;
  static Calibration parse(const std::string& name, double nearest_delta = 0.0);
  SymMatrix apply(const SymMatrix& w) const;
};

enum class LemmaStatus { Pass, Fail, NotApplicable };

std::string to_string(LemmaStatus s);

struct CalibrationReport {
  Calibration method;
  double dist_before = 0.0;   // ||Q - W||_F
  double dist_after = 0.0;    // ||Q - W_calibrated||_F
  double min_eig_before = 0.0;
  double min_eig_after = 0.0;
  LemmaStatus lemma = LemmaStatus::NotApplicable;
};

// Applies `method` to W and compares Frobenius distances to the reference Q.
// The distance guarantee is evaluated only when its hypotheses hold: Q PSD,
// and for Shift additionally tr(W) == dim within 1e-6. NearestPsd with
// delta > 0 and None carry no guarantee and report NotApplicable.
std::pair<SymMatrix, CalibrationReport> calibrate_and_report(const SymMatrix& q,
                                                              const SymMatrix& w,
                                                              const Calibration& method);

}  // namespace qkernel

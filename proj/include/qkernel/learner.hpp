#pragma once

#include "qkernel/kernels.hpp"
#include "qkernel/linalg.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace qkernel {

inline constexpr double kDefaultQuantumRidge = 1e-8;

// Kernel ridge regression in dual form; classification is sign(K_cross alpha)
// with sign(0) = +1.
struct KernelModel {
  Vector alpha;
  std::vector<int> labels;
  double ridge = 0.0;
  KernelParams provenance;
};

// alpha = (K + ridge I)^-1 Y. Throws SingularError when lambda_min + ridge is
// not positive; calibrate the kernel or raise the ridge.
KernelModel fit_krr(const SymMatrix& k, const std::vector<int>& labels, double ridge,
                    KernelParams provenance = {});
KernelModel fit_krr(const KernelMatrix& k, const std::vector<int>& labels, double ridge);

struct Prediction {
  Vector values;
  std::vector<int> labels;
};

Prediction predict(const KernelModel& model, const Matrix& cross);

std::vector<int> sign_labels(const Vector& values);

double accuracy(const std::vector<int>& predicted, const std::vector<int>& truth);

// Y^T (Q + ridge I)^-1 Y.
double model_complexity_c1(const SymMatrix& q, const std::vector<int>& labels, double ridge);

// Variance of every coordinate of every sample pooled together (population
// normalization).
double pooled_variance(const Matrix& x);

const std::vector<double>& rbf_gamma_multipliers();
const std::vector<double>& rbf_ridge_grid();

struct GridSearchResult {
  double gamma = 0.0;
  double ridge = 0.0;
  double accuracy = 0.0;
  double gamma_scale = 0.0;  // 1 / (d Var)
  std::size_t evaluated = 0;
};

// Exhaustive search over gamma in multipliers / (d Var[x]) and the ridge
// grid. Ties go to the smaller ridge, then the smaller gamma. Only the
// arguments are read; the caller decides what counts as validation data.
GridSearchResult grid_search_rbf(const Matrix& x_train, const std::vector<int>& y_train,
                                 const Matrix& x_val, const std::vector<int>& y_val);

}  // namespace qkernel

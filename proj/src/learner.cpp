#include "qkernel/learner.hpp"

#include "qkernel/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace qkernel {

namespace {

void check_labels(const std::vector<int>& labels) {
  for (int y : labels) {
    if (y != 1 && y != -1) throw InputError("labels must be +1 or -1");
  }
}

KernelModel solve(const EigenDecomposition& eig, const std::vector<int>& labels, double ridge,
                  KernelParams provenance, const Matrix& k) {
  const Vector y = labels_to_vector(labels);
  const Matrix inverse = inv_ridge(eig, ridge).matrix();
  Matrix system = k;
  system.diagonal().array() += ridge;
  KernelModel model;
  model.alpha = inverse * y;
  // Iterative refinement; near-singular systems lose digits in the first pass.
  double residual = (system * model.alpha - y).norm();
  for (int step = 0; step < 3 && residual > 1e-9 * y.norm(); ++step) {
    const Vector candidate = model.alpha + inverse * (y - system * model.alpha);
    const double r = (system * candidate - y).norm();
    if (!(r < residual)) break;
    model.alpha = candidate;
    residual = r;
  }
  model.labels = labels;
  model.ridge = ridge;
  model.provenance = std::move(provenance);
  // Below 1e-7 |Y| where floating point allows it; otherwise the backward
  // error of a stable solve, which dominates once |alpha| ~ 1/ridge.
  const double lambda_max = std::max(std::abs(eig.max()), std::abs(eig.min())) + ridge;
  const double backward = 64.0 * static_cast<double>(y.size()) * std::numeric_limits<double>::epsilon() *
                          lambda_max * model.alpha.norm();
  if (residual > std::max(1e-7 * y.norm(), backward)) {
    throw SingularError("fit_krr: residual " + std::to_string(residual) +
                        " exceeds tolerance; the system is too ill-conditioned at ridge " +
                        std::to_string(ridge));
  }
  return model;
}

}  // namespace

KernelModel fit_krr(const SymMatrix& k, const std::vector<int>& labels, double ridge,
                    KernelParams provenance) {
  if (k.dim() != labels.size()) throw InputError("fit_krr: label count differs from kernel size");
  check_labels(labels);
  return solve(eig_sym(k), labels, ridge, std::move(provenance), k.matrix());
}

KernelModel fit_krr(const KernelMatrix& k, const std::vector<int>& labels, double ridge) {
  return fit_krr(k.matrix, labels, ridge, k.params);
}

std::vector<int> sign_labels(const Vector& values) {
  std::vector<int> out(static_cast<std::size_t>(values.size()));
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    out[static_cast<std::size_t>(i)] = values(i) >= 0.0 ? 1 : -1;
  }
  return out;
}

Prediction predict(const KernelModel& model, const Matrix& cross) {
  if (cross.cols() != model.alpha.size()) {
    throw InputError("predict: cross kernel has " + std::to_string(cross.cols()) +
                     " columns, model has " + std::to_string(model.alpha.size()) +
                     " training samples");
  }
  Prediction p;
  p.values = cross * model.alpha;
  p.labels = sign_labels(p.values);
  return p;
}

double accuracy(const std::vector<int>& predicted, const std::vector<int>& truth) {
  if (predicted.empty()) throw InputError("accuracy: empty input");
  if (predicted.size() != truth.size()) throw InputError("accuracy: length mismatch");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) hits += predicted[i] == truth[i] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

double model_complexity_c1(const SymMatrix& q, const std::vector<int>& labels, double ridge) {
  if (q.dim() != labels.size()) throw InputError("model_complexity_c1: dimension mismatch");
  const Vector y = labels_to_vector(labels);
  return y.dot(inv_ridge(q, ridge).matrix() * y);
}

double pooled_variance(const Matrix& x) {
  if (x.size() == 0) throw InputError("pooled_variance: empty matrix");
  const double mean = x.mean();
  return (x.array() - mean).square().sum() / static_cast<double>(x.size());
}

const std::vector<double>& rbf_gamma_multipliers() {
  static const std::vector<double> grid{0.25, 0.5, 1.0, 2.0, 4.0, 5.0, 10.0, 20.0, 40.0, 50.0};
  return grid;
}

const std::vector<double>& rbf_ridge_grid() {
  static const std::vector<double> grid{0.006, 0.015, 0.03, 0.0625, 0.125, 0.25,
                                        0.5,   1.0,   2.0,  4.0,    8.0,   16.0,
                                        32.0,  64.0,  128.0, 256.0, 512.0, 1024.0};
  return grid;
}

GridSearchResult grid_search_rbf(const Matrix& x_train, const std::vector<int>& y_train,
                                 const Matrix& x_val, const std::vector<int>& y_val) {
  if (x_train.rows() == 0 || x_val.rows() == 0) {
    throw InputError("grid_search_rbf: train and validation sets must be nonempty");
  }
  if (static_cast<std::size_t>(x_train.rows()) != y_train.size() ||
      static_cast<std::size_t>(x_val.rows()) != y_val.size()) {
    throw InputError("grid_search_rbf: label count mismatch");
  }
  const double var = pooled_variance(x_train);
  if (!(var > 0.0)) {
    throw InputError("grid_search_rbf: training features have zero variance, gamma scale undefined");
  }
  GridSearchResult best;
  best.gamma_scale = 1.0 / (static_cast<double>(x_train.cols()) * var);
  best.accuracy = -1.0;

  // Ridges ascending, gammas ascending: strict improvement keeps the tie order.
  const auto& gammas = rbf_gamma_multipliers();
  std::vector<EigenDecomposition> eigs;
  std::vector<Matrix> crosses;
  for (double g : gammas) {
    const double gamma = g * best.gamma_scale;
    eigs.push_back(eig_sym(rbf_gram(x_train, gamma).matrix));
    crosses.push_back(rbf_cross(x_train, x_val, gamma));
  }
  const Vector y = labels_to_vector(y_train);
  for (double ridge : rbf_ridge_grid()) {
    for (std::size_t gi = 0; gi < gammas.size(); ++gi) {
      const Vector alpha = inv_ridge(eigs[gi], ridge).matrix() * y;
      const double acc = accuracy(sign_labels(crosses[gi] * alpha), y_val);
      ++best.evaluated;
      if (acc > best.accuracy) {
        best.accuracy = acc;
        best.gamma = gammas[gi] * best.gamma_scale;
        best.ridge = ridge;
      }
    }
  }
  return best;
}

}  // namespace qkernel

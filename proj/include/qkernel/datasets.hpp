#pragma once

#include "qkernel/linalg.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qkernel {

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

struct Dataset {
  Matrix features;          // n x d
  std::vector<int> labels;  // +1 / -1
  std::optional<Split> split;

  std::size_t size() const { return labels.size(); }
  std::size_t width() const { return static_cast<std::size_t>(features.cols()); }
  void validate() const;

  Matrix rows(const std::vector<std::size_t>& idx) const;
  std::vector<int> labels_at(const std::vector<std::size_t>& idx) const;
};

// Header `f0,...,f{d-1},label`. Labels 0/1 are mapped to -1/+1.
Dataset load_csv(const std::string& path);
void save_csv(const Dataset& ds, const std::string& path);

struct PcaResult {
  Matrix projected;           // n x N, columns by decreasing variance
  Matrix components;          // d x N, orthonormal columns
  Vector explained_variance;  // N sample-covariance eigenvalues
  Vector mean;                // d
};

// Centers the columns and projects onto the top-N covariance eigenvectors
// (sample covariance, 1/(n-1)).
PcaResult pca(const Matrix& features, std::size_t target_dim);

// Uniform features on [-1, 1]^d; labels are +1 placeholders.
Dataset generate_synthetic(std::size_t n, std::size_t d, std::uint64_t seed);

// Mean of the two central order statistics for even length.
double median(std::vector<double> values);

// +1 where value > median, -1 otherwise.
std::vector<int> threshold_at_median(const Vector& values);

enum class RelabelForm {
  InverseClassical,  // top eigenvector of sqrt(Q) K^-1 sqrt(Q)
  Literal,           // top eigenvector of sqrt(Q) K sqrt(Q)
};

struct RelabelResult {
  std::vector<int> labels;
  Vector y_sharp;   // sqrt(Q) v
  Vector direction; // v
  double top_eigenvalue = 0.0;
};

// Labels that (approximately) maximize the geometric difference between the
// classical kernel K and the quantum kernel Q over the whole pool.
RelabelResult relabel_for_advantage(const SymMatrix& q_all, const SymMatrix& k_all, double ridge,
                                    RelabelForm form = RelabelForm::InverseClassical);

// Seeded permutation; the first n_train indices train, the next n_test test.
Dataset split(const Dataset& ds, std::size_t n_train, std::size_t n_test, std::uint64_t seed);

}  // namespace qkernel

#include "qkernel/datasets.hpp"

#include "qkernel/errors.hpp"
#include "qkernel/rng.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

namespace qkernel {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    if (!cell.empty() && cell.back() == '\r') cell.pop_back();
    out.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string where(const std::string& path, std::size_t line) {
  return path + ":" + std::to_string(line) + ": ";
}

}  // namespace

void Dataset::validate() const {
  if (static_cast<std::size_t>(features.rows()) != labels.size()) {
    throw InputError("dataset: feature rows and labels differ in count");
  }
  for (int y : labels) {
    if (y != 1 && y != -1) throw InputError("dataset: labels must be +1 or -1");
  }
  if (split) {
    std::vector<char> seen(labels.size(), 0);
    for (const auto* part : {&split->train, &split->test}) {
      for (std::size_t i : *part) {
        if (i >= labels.size() || seen[i]) throw InputError("dataset: split indices overlap or overflow");
        seen[i] = 1;
      }
    }
  }
}

Matrix Dataset::rows(const std::vector<std::size_t>& idx) const {
  Matrix out(static_cast<Eigen::Index>(idx.size()), features.cols());
  for (std::size_t r = 0; r < idx.size(); ++r) {
    out.row(static_cast<Eigen::Index>(r)) = features.row(static_cast<Eigen::Index>(idx[r]));
  }
  return out;
}

std::vector<int> Dataset::labels_at(const std::vector<std::size_t>& idx) const {
  std::vector<int> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(labels[i]);
  return out;
}

Dataset load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw InputError(where(path, 1) + "missing header");
  const auto header = split_fields(line);
  if (header.size() < 2 || header.back() != "label") {
    throw InputError(where(path, 1) + "header must be f0,...,f{d-1},label");
  }
  const std::size_t d = header.size() - 1;
  for (std::size_t j = 0; j < d; ++j) {
    if (header[j] != "f" + std::to_string(j)) {
      throw InputError(where(path, 1) + "expected column 'f" + std::to_string(j) + "', got '" +
                       header[j] + "'");
    }
  }

  std::vector<std::vector<double>> rows;
  std::vector<double> raw_labels;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_fields(line);
    if (fields.size() != d + 1) {
      throw InputError(where(path, line_no) + "expected " + std::to_string(d + 1) + " fields, got " +
                       std::to_string(fields.size()));
    }
    std::vector<double> row(d);
    for (std::size_t j = 0; j <= d; ++j) {
      double v = 0.0;
      try {
        std::size_t used = 0;
        v = std::stod(fields[j], &used);
        if (used != fields[j].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw InputError(where(path, line_no) + "malformed value '" + fields[j] + "'");
      }
      if (j < d) {
        row[j] = v;
      } else {
        raw_labels.push_back(v);
      }
    }
    rows.push_back(std::move(row));
  }

  // 0/1 labels are remapped only when no -1 appears anywhere.
  const bool has_minus = std::find(raw_labels.begin(), raw_labels.end(), -1.0) != raw_labels.end();
  Dataset ds;
  ds.features.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      ds.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
    const double y = raw_labels[i];
    if (y == 1.0) {
      ds.labels.push_back(1);
    } else if (y == -1.0 || (y == 0.0 && !has_minus)) {
      ds.labels.push_back(-1);
    } else {
      throw InputError(where(path, i + 2) + "unknown label value " + format_real(y));
    }
  }
  return ds;
}

void save_csv(const Dataset& ds, const std::string& path) {
  ds.validate();
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  for (std::size_t j = 0; j < ds.width(); ++j) out << 'f' << j << ',';
  out << "label\n";
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (std::size_t j = 0; j < ds.width(); ++j) {
      out << format_real(ds.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) << ',';
    }
    out << ds.labels[i] << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

PcaResult pca(const Matrix& features, std::size_t target_dim) {
  const auto n = static_cast<std::size_t>(features.rows());
  const auto d = static_cast<std::size_t>(features.cols());
  if (target_dim < 1 || target_dim > std::min(n, d)) {
    throw InputError("pca: target dimension " + std::to_string(target_dim) +
                     " must lie in [1, min(n, d)] = [1, " + std::to_string(std::min(n, d)) + "]");
  }
  PcaResult out;
  out.mean = features.colwise().mean().transpose();
  const Matrix centered = features.rowwise() - out.mean.transpose();
  const double denom = n > 1 ? static_cast<double>(n - 1) : 1.0;
  const SymMatrix cov(Matrix(centered.transpose() * centered / denom));
  const EigenDecomposition eig = eig_sym(cov);

  const double tol = 1e-12 * std::max(eig.max(), 0.0) * static_cast<double>(d);
  std::size_t rank = 0;
  for (Eigen::Index k = 0; k < eig.values.size(); ++k) rank += eig.values(k) > tol ? 1 : 0;
  if (target_dim > rank) {
    throw InputError("pca: target dimension " + std::to_string(target_dim) +
                     " exceeds the data rank; achievable rank is " + std::to_string(rank));
  }
  const auto k = static_cast<Eigen::Index>(target_dim);
  out.components = eig.vectors.leftCols(k);
  out.explained_variance = eig.values.head(k);
  out.projected = centered * out.components;
  return out;
}

Dataset generate_synthetic(std::size_t n, std::size_t d, std::uint64_t seed) {
  if (n < 2 || d < 1) throw InputError("generate_synthetic: need n >= 2 and d >= 1");
  KeyedStream rng(seed, StreamRole::Synthetic, {n, d});
  Dataset ds;
  ds.features.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < ds.features.rows(); ++i) {
    for (Eigen::Index j = 0; j < ds.features.cols(); ++j) ds.features(i, j) = rng.uniform(-1.0, 1.0);
  }
  ds.labels.assign(n, 1);
  return ds;
}

double median(std::vector<double> values) {
  if (values.empty()) throw InputError("median of an empty vector");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

std::vector<int> threshold_at_median(const Vector& values) {
  const double med = median(std::vector<double>(values.data(), values.data() + values.size()));
  std::vector<int> out(static_cast<std::size_t>(values.size()));
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    out[static_cast<std::size_t>(i)] = values(i) > med ? 1 : -1;
  }
  return out;
}

RelabelResult relabel_for_advantage(const SymMatrix& q_all, const SymMatrix& k_all, double ridge,
                                    RelabelForm form) {
  if (q_all.dim() != k_all.dim()) throw InputError("relabel_for_advantage: dimension mismatch");
  const SymMatrix root_q = mat_sqrt_psd(q_all);
  const SymMatrix middle = form == RelabelForm::InverseClassical ? inv_ridge(k_all, ridge) : k_all;
  const SymMatrix m(Matrix(root_q.matrix() * middle.matrix() * root_q.matrix()));
  const EigenDecomposition eig = eig_sym(m);

  RelabelResult out;
  out.top_eigenvalue = eig.max();
  out.direction = eig.vectors.col(0);
  out.y_sharp = root_q.matrix() * out.direction;
  out.labels = threshold_at_median(out.y_sharp);
  return out;
}

Dataset split(const Dataset& ds, std::size_t n_train, std::size_t n_test, std::uint64_t seed) {
  const std::size_t n = ds.size();
  if (n_train + n_test > n) {
    throw InputError("split: requested " + std::to_string(n_train + n_test) + " rows, dataset has " +
                     std::to_string(n));
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  KeyedStream rng(seed, StreamRole::Split, {n});
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = rng.below(i);
    std::swap(perm[i - 1], perm[j]);
  }
  Dataset out = ds;
  Split s;
  s.train.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_train));
  s.test.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_train),
                perm.begin() + static_cast<std::ptrdiff_t>(n_train + n_test));
  out.split = std::move(s);
  return out;
}

}  // namespace qkernel

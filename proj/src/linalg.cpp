#include "qkernel/linalg.hpp"

#include "qkernel/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace qkernel {

namespace {

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) {
    throw InputError(std::string(what) + ": matrix has non-finite entries");
  }
}

}  // namespace

SymMatrix inverse_symmetric(const SymMatrix& m, double ridge) {
  const SymMatrix shifted = m.plus_identity(ridge);
  const EigenDecomposition eig = eig_sym(shifted);
  const double scale = std::max(std::abs(eig.max()), std::abs(eig.min()));
  const double smallest = eig.values.cwiseAbs().minCoeff();
  if (scale == 0.0 || smallest <= 1e-14 * scale) {
    throw SingularError("inverse_symmetric: matrix is singular");
  }
  return from_spectrum(eig.vectors, eig.values.cwiseInverse());
}

SymMatrix::SymMatrix(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw InputError("SymMatrix requires a non-empty square matrix");
  }
  require_finite(m, "SymMatrix");
  m_ = m.triangularView<Eigen::Upper>();
  m_.triangularView<Eigen::StrictlyLower>() = m.transpose().triangularView<Eigen::StrictlyLower>();
}

SymMatrix SymMatrix::identity(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return SymMatrix(Matrix::Identity(n, n));
}

SymMatrix SymMatrix::zero(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return SymMatrix(Matrix::Zero(n, n));
}

SymMatrix SymMatrix::diagonal(const Vector& d) { return SymMatrix(Matrix(d.asDiagonal())); }

SymMatrix SymMatrix::operator+(const SymMatrix& o) const {
  if (dim() != o.dim()) throw InputError("SymMatrix sum: dimension mismatch");
  return SymMatrix(m_ + o.m_, Trusted{});
}

SymMatrix SymMatrix::operator-(const SymMatrix& o) const {
  if (dim() != o.dim()) throw InputError("SymMatrix difference: dimension mismatch");
  return SymMatrix(m_ - o.m_, Trusted{});
}

SymMatrix SymMatrix::scaled(double s) const { return SymMatrix(m_ * s); }

SymMatrix SymMatrix::plus_identity(double s) const {
  Matrix out = m_;
  out.diagonal().array() += s;
  return SymMatrix(std::move(out), Trusted{});
}

EigenDecomposition eig_sym(const SymMatrix& m) {
  require_finite(m.matrix(), "eig_sym");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m.matrix(), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw InputError("eig_sym: eigensolver did not converge");
  }
  const Eigen::Index n = m.matrix().rows();
  EigenDecomposition out;
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  for (Eigen::Index k = 0; k < n; ++k) {
    auto col = out.vectors.col(k);
    for (Eigen::Index r = 0; r < n; ++r) {
      if (std::abs(col(r)) > 1e-12) {
        if (col(r) < 0) col = -col;
        break;
      }
    }
  }
  return out;
}

SymMatrix from_spectrum(const Matrix& vectors, const Vector& values) {
  Matrix m = vectors * values.asDiagonal() * vectors.transpose();
  Matrix sym = 0.5 * (m + m.transpose());
  return SymMatrix(std::move(sym), SymMatrix::Trusted{});
}

SymMatrix mat_sqrt_psd(const SymMatrix& m) {
  EigenDecomposition eig = eig_sym(m);
  const double lmax = eig.max();
  if (eig.min() < -1e-9 * std::max(lmax, 0.0) || (lmax < 0.0)) {
    std::ostringstream msg;
    msg << "mat_sqrt_psd: matrix is not PSD (lambda_min = " << eig.min()
        << ", lambda_max = " << lmax << ")";
    throw NotPsdError(msg.str());
  }
  Vector roots = eig.values.cwiseMax(0.0).cwiseSqrt();
  return from_spectrum(eig.vectors, roots);
}

SymMatrix inv_ridge(const EigenDecomposition& eig, double ridge) {
  if (!(ridge >= 0.0) || !std::isfinite(ridge)) {
    throw InputError("inv_ridge: ridge must be a finite nonnegative number");
  }
  if (eig.min() + ridge <= 1e-14) {
    std::ostringstream msg;
    msg << "inv_ridge: lambda_min + ridge = " << eig.min() + ridge
        << " <= 1e-14; calibrate the kernel or raise the ridge";
    throw SingularError(msg.str());
  }
  Vector inv = (eig.values.array() + ridge).inverse();
  return from_spectrum(eig.vectors, inv);
}

SymMatrix inv_ridge(const SymMatrix& m, double ridge) { return inv_ridge(eig_sym(m), ridge); }

double spectral_norm(const SymMatrix& m) {
  const EigenDecomposition eig = eig_sym(m);
  return std::max(std::abs(eig.max()), std::abs(eig.min()));
}

double frobenius_norm(const SymMatrix& m) { return m.matrix().norm(); }

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

CheckReport inverse_perturbation_check(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim()) throw InputError("inverse_perturbation_check: dimension mismatch");
  const Matrix a_inv = inverse_symmetric(a).matrix();
  const Matrix b_inv = inverse_symmetric(b).matrix();
  const Matrix diff = a.matrix() - b.matrix();

  CheckReport report;
  const double contraction = spectral_norm(Matrix(a_inv * diff));
  if (contraction >= 1.0) {
    report.applicable = false;
    report.pass = true;
    report.detail = "||A^-1 (A - B)||_2 >= 1";
    return report;
  }
  const double a_inv_norm = spectral_norm(a_inv);
  report.lhs = spectral_norm(Matrix(a_inv - b_inv));
  report.rhs = a_inv_norm * a_inv_norm * spectral_norm(diff) / (1.0 - contraction);
  report.pass = report.lhs <= report.rhs * (1.0 + 1e-9);
  return report;
}

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_csv(std::ostream& out, const Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_real(m(i, j));
    }
    out << '\n';
  }
}

void write_csv(const std::string& path, const Matrix& m) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  write_csv(out, m);
  if (!out) throw IoError("write failed: " + path);
}

Matrix read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        throw InputError(path + ":" + std::to_string(line_no) + ": bad number '" + cell + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw InputError(path + ":" + std::to_string(line_no) + ": ragged row");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InputError(path + ": empty matrix file");
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return m;
}

}  // namespace qkernel

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <iosfwd>
#include <string>

namespace qkernel {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Dense real symmetric matrix. Symmetry is exact: the constructor mirrors the
// upper triangle onto the lower one, so entries(i, j) == entries(j, i)
// bit-for-bit.
class SymMatrix {
 public:
  // Mirrors the upper triangle of `m`. Throws InputError for a non-square or
  // empty input, or for non-finite entries.
  explicit SymMatrix(const Matrix& m);

  static SymMatrix identity(std::size_t dim);
  static SymMatrix zero(std::size_t dim);
  static SymMatrix diagonal(const Vector& d);

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  double operator()(std::size_t i, std::size_t j) const {
    return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  const Matrix& matrix() const { return m_; }
  double trace() const { return m_.trace(); }

  SymMatrix operator+(const SymMatrix& o) const;
  SymMatrix operator-(const SymMatrix& o) const;
  SymMatrix scaled(double s) const;
  SymMatrix plus_identity(double s) const;

 private:
  struct Trusted {};
  SymMatrix(Matrix m, Trusted) : m_(std::move(m)) {}
  friend SymMatrix from_spectrum(const Matrix& vectors, const Vector& values);

  Matrix m_;
};

// Eigenvalues sorted descending; column k of `vectors` pairs with values[k].
// Each column's first component with magnitude above 1e-12 is nonnegative.
// The order among equal eigenvalues is unspecified.
struct EigenDecomposition {
  Vector values;
  Matrix vectors;

  double min() const { return values(values.size() - 1); }
  double max() const { return values(0); }
};

EigenDecomposition eig_sym(const SymMatrix& m);

// V diag(values) V^T, symmetrized exactly.
SymMatrix from_spectrum(const Matrix& vectors, const Vector& values);

// Principal square root of a PSD matrix. Eigenvalues in
// [-1e-9 * lambda_max, 0) are clamped to zero; anything lower is NotPsdError.
SymMatrix mat_sqrt_psd(const SymMatrix& m);

// (M + ridge I)^{-1} through the eigendecomposition. SingularError when
// lambda_min + ridge <= 1e-14.
SymMatrix inv_ridge(const SymMatrix& m, double ridge);

// (M + ridge I)^{-1} for any nonsingular symmetric M + ridge I, definite or
// not. SingularError when min |lambda + ridge| <= 1e-14 max |lambda + ridge|.
SymMatrix inverse_symmetric(const SymMatrix& m, double ridge = 0.0);

// Same inverse, reusing a decomposition the caller already holds.
SymMatrix inv_ridge(const EigenDecomposition& eig, double ridge);

double spectral_norm(const SymMatrix& m);
double frobenius_norm(const SymMatrix& m);

// Spectral norm of a general square matrix (largest singular value).
double spectral_norm(const Matrix& m);

struct CheckReport {
  bool applicable = true;
  bool pass = true;
  double lhs = 0.0;
  double rhs = 0.0;
  std::string detail;
};

// || A^{-1} - B^{-1} ||_2 <= ||A^{-1}||_2^2 ||A - B||_2 / (1 - ||A^{-1}(A - B)||_2),
// valid whenever ||A^{-1}(B - A)||_2 < 1. Outside that region the report is
// marked not applicable.
CheckReport inverse_perturbation_check(const SymMatrix& a, const SymMatrix& b);

// Row per line, comma separated, 17 significant digits.
void write_csv(std::ostream& out, const Matrix& m);
void write_csv(const std::string& path, const Matrix& m);
Matrix read_matrix_csv(const std::string& path);

std::string format_real(double v);

}  // namespace qkernel

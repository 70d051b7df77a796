#pragma once

#include <array>
#include <cstddef>

#include <Eigen/Core>

namespace viscodual {

using Dense6 = Eigen::Matrix<double, 6, 6>;
using Vector6 = Eigen::Matrix<double, 6, 1>;

/// Symmetric 6x6 matrix in Voigt (Mandel) indexing: components 1..3 are the
/// normal directions 11, 22, 33 and 4..6 are 23, 31, 12 with the sqrt(2)
/// shear scaling, so that the Euclidean inner product on 6-vectors matches
/// the tensor contraction.  Only the upper triangle is stored, which makes
/// symmetry exact.
class Matrix6 {
 public:
  static constexpr std::size_t kPacked = 21;

  Matrix6() { packed_.fill(0.0); }

  static Matrix6 zero() { return Matrix6{}; }
  static Matrix6 identity();
  static Matrix6 diagonal(const std::array<double, 6>& d);
  /// v v^T
  static Matrix6 outer(const Vector6& v);
  /// Symmetrizes `m` after checking |m_ij - m_ji| <= rel_tol * max|m|.
  /// Throws ValidationError on a larger mismatch.
  static Matrix6 from_dense(const Dense6& m, double rel_tol = 1e-12);
  /// Takes the upper triangle of `m` without any check.
  static Matrix6 from_upper(const Dense6& m);

  double operator()(int i, int j) const { return packed_[index(i, j)]; }
  void set(int i, int j, double value) { packed_[index(i, j)] = value; }

  Dense6 dense() const;
  const std::array<double, kPacked>& packed() const { return packed_; }

  Matrix6& operator+=(const Matrix6& o);
  Matrix6& operator-=(const Matrix6& o);
  Matrix6& operator*=(double s);
  friend Matrix6 operator+(Matrix6 a, const Matrix6& b) { return a += b; }
  friend Matrix6 operator-(Matrix6 a, const Matrix6& b) { return a -= b; }
  friend Matrix6 operator*(Matrix6 a, double s) { return a *= s; }
  friend Matrix6 operator*(double s, Matrix6 a) { return a *= s; }
  friend bool operator==(const Matrix6&, const Matrix6&) = default;

  /// Largest absolute entry.
  double max_abs() const;
  /// Spectral norm (largest |eigenvalue|).
  double norm() const;
  double min_eigenvalue() const;
  std::array<double, 6> eigenvalues() const;
  double quadratic(const Vector6& v) const;
  bool is_zero() const { return max_abs() == 0.0; }

  /// smallest eigenvalue >= -tol_psd * ||M||
  bool is_psd(double tol_psd = 1e-10) const;
  /// smallest eigenvalue > tol * ||M|| (and M != 0)
  bool is_positive_definite(double tol = 1e-12) const;

  /// Upper-triangle entries row by row: m11, m12, ..., m16, m22, ..., m66.
  static constexpr std::size_t index(int i, int j) {
    if (i > j) {
      const int t = i;
      i = j;
      j = t;
    }
    // rows before i contribute 6 + 5 + ... entries
    return static_cast<std::size_t>(i * 6 - i * (i - 1) / 2 + (j - i));
  }

 private:
  std::array<double, kPacked> packed_;
};

/// Eigen-decomposes a symmetric matrix and clamps eigenvalues in
/// [-tol * scale, 0) to zero.  Returns false (and leaves `out` untouched) if a
/// more negative eigenvalue is present.  `min_eig` receives the smallest
/// eigenvalue before clipping.
bool clip_psd(const Dense6& m, double tol, double scale, Matrix6& out, double* min_eig = nullptr);

/// Orthonormal basis of the eigenvectors of symmetric `m` whose eigenvalues
/// are <= rel_tol * max(|eig|, floor).  Columns of the returned matrix.
Eigen::MatrixXd null_space(const Dense6& m, double rel_tol, double floor = 0.0);

}  // namespace viscodual

#include "viscodual/matrix6.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "viscodual/errors.hpp"

namespace viscodual {

Matrix6 Matrix6::identity() {
  Matrix6 m;
  for (int i = 0; i < 6; ++i) m.set(i, i, 1.0);
  return m;
}

Matrix6 Matrix6::diagonal(const std::array<double, 6>& d) {
  Matrix6 m;
  for (int i = 0; i < 6; ++i) m.set(i, i, d[static_cast<std::size_t>(i)]);
  return m;
}

Matrix6 Matrix6::outer(const Vector6& v) {
  Matrix6 m;
  for (int i = 0; i < 6; ++i)
    for (int j = i; j < 6; ++j) m.set(i, j, v(i) * v(j));
  return m;
}

Matrix6 Matrix6::from_dense(const Dense6& m, double rel_tol) {
  const double scale = m.cwiseAbs().maxCoeff();
  Matrix6 out;
  for (int i = 0; i < 6; ++i) {
    for (int j = i; j < 6; ++j) {
      if (std::abs(m(i, j) - m(j, i)) > rel_tol * scale) {
        throw ValidationError("matrix is not symmetric: entry (" + std::to_string(i + 1) + "," +
                              std::to_string(j + 1) + ") differs from its transpose");
      }
      out.set(i, j, 0.5 * (m(i, j) + m(j, i)));
    }
  }
  return out;
}

Matrix6 Matrix6::from_upper(const Dense6& m) {
  Matrix6 out;
  for (int i = 0; i < 6; ++i)
    for (int j = i; j < 6; ++j) out.set(i, j, m(i, j));
  return out;
}

Dense6 Matrix6::dense() const {
  Dense6 m;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) m(i, j) = (*this)(i, j);
  return m;
}

Matrix6& Matrix6::operator+=(const Matrix6& o) {
  for (std::size_t k = 0; k < kPacked; ++k) packed_[k] += o.packed_[k];
  return *this;
}

Matrix6& Matrix6::operator-=(const Matrix6& o) {
  for (std::size_t k = 0; k < kPacked; ++k) packed_[k] -= o.packed_[k];
  return *this;
}

Matrix6& Matrix6::operator*=(double s) {
  for (double& x : packed_) x *= s;
  return *this;
}

double Matrix6::max_abs() const {
  double m = 0.0;
  for (double x : packed_) m = std::max(m, std::abs(x));
  return m;
}

std::array<double, 6> Matrix6::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Dense6> es(dense(), Eigen::EigenvaluesOnly);
  std::array<double, 6> out{};
  for (int i = 0; i < 6; ++i) out[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
  return out;
}

double Matrix6::norm() const {
  const auto e = eigenvalues();
  return std::max(std::abs(e.front()), std::abs(e.back()));
}

double Matrix6::min_eigenvalue() const { return eigenvalues().front(); }

double Matrix6::quadratic(const Vector6& v) const { return v.dot(dense() * v); }

bool Matrix6::is_psd(double tol_psd) const {
  const auto e = eigenvalues();
  const double scale = std::max(std::abs(e.front()), std::abs(e.back()));
  return e.front() >= -tol_psd * scale;
}

bool Matrix6::is_positive_definite(double tol) const {
  const auto e = eigenvalues();
  const double scale = std::max(std::abs(e.front()), std::abs(e.back()));
  return scale > 0.0 && e.front() > tol * scale;
}

bool clip_psd(const Dense6& m, double tol, double scale, Matrix6& out, double* min_eig) {
  const Dense6 sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Dense6> es(sym);
  const double lo = es.eigenvalues()(0);
  if (min_eig) *min_eig = lo;
  if (lo < -tol * scale) return false;
  if (lo >= 0.0) {
    out = Matrix6::from_upper(sym);
    return true;
  }
  Vector6 ev = es.eigenvalues().cwiseMax(0.0);
  const Dense6 v = es.eigenvectors();
  out = Matrix6::from_upper(v * ev.asDiagonal() * v.transpose());
  return true;
}

Eigen::MatrixXd null_space(const Dense6& m, double rel_tol, double floor) {
  Eigen::SelfAdjointEigenSolver<Dense6> es(0.5 * (m + m.transpose()));
  const auto& ev = es.eigenvalues();
  const double scale = std::max({std::abs(ev(0)), std::abs(ev(5)), floor});
  int count = 0;
  for (int i = 0; i < 6; ++i)
    if (ev(i) <= rel_tol * scale) ++count;
  if (scale == 0.0) count = 6;
  return es.eigenvectors().leftCols(count);
}

}  // namespace viscodual

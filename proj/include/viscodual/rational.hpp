#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "viscodual/kernel.hpp"

namespace viscodual {

/// Real polynomial, coefficients ascending by degree.
class RealPolynomial {
 public:
  RealPolynomial() = default;
  explicit RealPolynomial(std::vector<double> coeffs);

  static RealPolynomial constant(double c) { return RealPolynomial({c}); }
  /// prod_k (p + r_k)
  static RealPolynomial from_negated_roots(std::span<const double> rates);

  const std::vector<double>& coeffs() const { return coeffs_; }
  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  double operator()(double p) const;
  RealPolynomial derivative() const;

  RealPolynomial& operator+=(const RealPolynomial& o);
  RealPolynomial& operator*=(double s);
  friend RealPolynomial operator+(RealPolynomial a, const RealPolynomial& b) { return a += b; }
  friend RealPolynomial operator*(RealPolynomial a, double s) { return a *= s; }
  friend RealPolynomial operator*(const RealPolynomial& a, const RealPolynomial& b);
  friend bool operator==(const RealPolynomial&, const RealPolynomial&) = default;

 private:
  void trim();
  std::vector<double> coeffs_;
};

/// Complete Bernstein function with a discrete spectrum,
///   Q(p) = linear p + constant + sum_k weight_k p / (p + rate_k).
/// p f~(p) of a relaxation kernel has this form, and so does p^2 h~(p) of a
/// creep function.
struct RationalCbf {
  double linear = 0.0;
  double constant = 0.0;
  std::vector<ScalarMode> modes;

  double operator()(double p) const;
  /// Q'(p) = linear + sum_k weight_k rate_k / (p + rate_k)^2, positive off the poles.
  double derivative(double p) const;
};

/// Stieltjes function with a discrete spectrum,
///   S(p) = constant + pole_at_zero_mass / p + sum_j mass_j / (p + pole_j).
/// Mode `rate` holds the pole, `weight` the mass.
struct RationalStieltjes {
  double constant = 0.0;
  double pole_at_zero_mass = 0.0;
  std::vector<ScalarMode> modes;

  double operator()(double p) const;
};

RationalCbf as_cbf(const ScalarRelaxation& k);
/// p * (p h~(p)) = a p + b + sum nu_j p / (p + s_j)
RationalCbf as_cbf(const ScalarCreep& k);

/// Numerator and denominator of Q = N / D with D = prod (p + r_k).
struct CbfPolynomials {
  RealPolynomial numerator;
  RealPolynomial denominator;
};

CbfPolynomials cbf_as_rational(const RationalCbf& q);
CbfPolynomials cbf_as_rational(const ScalarRelaxation& k);

/// Zeros of Q at p = -s, s > 0, returned as ascending s.  One zero lies in each
/// gap between consecutive poles, one in (0, r_1) iff constant > 0 and one in
/// (r_n, inf) iff linear > 0.  Each is located by bisection inside its bracket
/// down to relative width 1e-14 and then polished with one Newton step.
/// Throws NumericError if a bracket does not straddle a sign change.
std::vector<double> interlaced_roots(const RationalCbf& q);

/// Partial fractions of 1 / Q given the zeros from interlaced_roots.  The mass
/// at pole s_j is the residue D(-s_j) / N'(-s_j) = 1 / Q'(-s_j).
/// Throws NumericError for a residue below -1e-12 * scale.
RationalStieltjes stieltjes_partial_fractions(const RationalCbf& q, std::span<const double> roots);

/// 1 / Q as a Stieltjes function (roots followed by residues).
RationalStieltjes invert_cbf(const RationalCbf& q);

// -- matrix-valued ------------------------------------------------------------

/// Q(p) = linear p + constant + sum_k G_k p / (p + r_k), symmetric PSD data.
struct MatrixCbf {
  Matrix6 linear;
  Matrix6 constant;
  std::vector<MatrixMode> modes;

  Dense6 operator()(double p) const;
  /// dQ/dp = linear + sum_k G_k r_k / (p + r_k)^2
  Dense6 derivative(double p) const;
  /// linear + constant + sum G_k positive definite: Q(p) invertible for p > 0.
  bool nondegenerate() const;
  double max_rate() const { return modes.empty() ? 0.0 : modes.back().rate; }
};

/// S(p) = constant + pole_at_zero / p + sum_j H_j / (p + s_j).
struct MatrixStieltjes {
  Matrix6 constant;
  Matrix6 pole_at_zero;
  std::vector<MatrixMode> modes;

  Dense6 operator()(double p) const;
};

MatrixCbf as_cbf(const MatrixRelaxation& k);
MatrixCbf as_cbf(const MatrixCreep& k);

/// Matrix polynomial with symmetric coefficients, ascending by degree.
class MatrixPolynomial {
 public:
  MatrixPolynomial() = default;
  explicit MatrixPolynomial(std::vector<Matrix6> coeffs) : coeffs_(std::move(coeffs)) {}

  const std::vector<Matrix6>& coeffs() const { return coeffs_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  Dense6 operator()(double p) const;
  Dense6 derivative(double p) const;

 private:
  std::vector<Matrix6> coeffs_;
};

/// Q(p) = P(p) / d(p) with d(p) = prod_k (p + r_k).
struct MatrixCbfPolynomial {
  MatrixPolynomial numerator;
  RealPolynomial denominator;
};

/// Throws ValidationError if Q is degenerate.
MatrixCbfPolynomial matrix_cbf_as_polynomial(const MatrixCbf& q);
MatrixCbfPolynomial matrix_cbf_as_polynomial(const MatrixRelaxation& k);

/// A pole of Q(p)^{-1} at p = -rate: an orthonormal basis of the null space
/// of Q(-rate) as columns of `null_vectors`, and the residue matrix.
struct PencilRoot {
  double rate = 0.0;
  Eigen::MatrixXd null_vectors;
  Dense6 residue = Dense6::Zero();
};

/// Poles of Q(p)^{-1} at p < 0 and their residues.  With G_k = F_k F_k^T,
/// Q(p) v = 0 is linearized as the symmetric definite pencil K + p M of size
/// 6 + sum rank G_k, solved in the variable p / sigma, sigma the geometric
/// mean of the extreme rates.  Residues are v v^T / (x^T M x) summed over a
/// cluster's eigenvectors x with leading block v, so they stay PSD and finite
/// even when a pole lies next to a rate of Q.  The dim null(constant)
/// smallest and dim null(linear) largest eigenvalues are the pole at zero and
/// the constant term.  Rates chained within 1e-9 relative plus 1e-10 (scaled)
/// form one semisimple root.
std::vector<PencilRoot> matrix_pencil_roots(const MatrixCbf& q);

struct ResidueDiagnostics {
  /// min over all residue matrices of (smallest eigenvalue / scale) before clipping.
  double min_relative_eigenvalue = 0.0;
  /// relative mismatch of the constant term between the two evaluation points.
  double constant_mismatch = 0.0;
};

/// Q^{-1} = A + D / p + sum H_j / (p + s_j).
///  H_j taken from the roots
///  D   = V (V^T Q'(0) V)^{-1} V^T with V = null(constant)
///  A   = Q(p*)^{-1} - D / p* - sum H_j / (p* + s_j), p* = 1 + 2 max rate,
///        restricted to null(linear) and cross-checked at a second point.
/// Throws NumericError on PSD violation beyond 1e-10 * scale or a
/// cross-validation mismatch above max(1e-8, 1e3 eps cond Q).
MatrixStieltjes matrix_residues(const MatrixCbf& q, const std::vector<PencilRoot>& roots,
                                ResidueDiagnostics* diagnostics = nullptr);

MatrixStieltjes invert_cbf(const MatrixCbf& q, ResidueDiagnostics* diagnostics = nullptr);

}  // namespace viscodual

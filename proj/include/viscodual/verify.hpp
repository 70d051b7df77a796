#pragma once

#include <span>
#include <string>
#include <vector>

#include "viscodual/kernel.hpp"

namespace viscodual {

struct CheckEntry {
  std::string name;
  bool pass = false;
  double residual = 0.0;
  double tolerance = 0.0;
};

/// Named checks, each appearing once.
class CheckReport {
 public:
  /// Records `residual <= tolerance` under `name`.  A NaN residual fails.
  void add(const std::string& name, double residual, double tolerance);
  void merge(const CheckReport& other);

  const std::vector<CheckEntry>& entries() const { return entries_; }
  const CheckEntry* find(const std::string& name) const;
  bool all_passed() const;
  std::size_t failures() const;

 private:
  std::vector<CheckEntry> entries_;
};

/// Relative tolerance for the sampled completely-monotone / Bernstein sign
/// checks (relative to the magnitude of the divided difference terms).
inline constexpr double kSignTol = 1e-9;

/// Structural checks (rates, weights / PSD, ordering, symmetry, nonzero) and
/// sampled sign checks of divided differences of order 0..3 on a 64-point
/// geometric grid spanning [1e-3, 1e3] / max rate.  A relaxation kernel must
/// have (-1)^n f[t_0..t_n] >= 0; a creep function h >= 0 and
/// (-1)^(n-1) h[t_0..t_n] >= 0 for n >= 1.
CheckReport check_wellformed(const KernelData& data);
CheckReport check_wellformed(const AnyKernel& kernel);

/// Geometric grid of `count` points from lo to hi inclusive.
std::vector<double> geometric_grid(double lo, double hi, std::size_t count);

/// 33 points on [1e-3, 1e3] / max rate of the pair (max rate 1 if there are no modes).
std::vector<double> default_time_grid(double max_rate);

/// (R * C)(t) in closed form, Dirac part included: beta C(t) + (f0 * C)(t).
double duality_convolution(const ScalarRelaxation& r, const ScalarCreep& c, double t);
Dense6 duality_convolution(const MatrixRelaxation& r, const MatrixCreep& c, double t);

/// max over the grid of |(R * C)(t) - t| / max(t, t_floor) with
/// t_floor = 1e-6 / max rate; the matrix form uses the spectral norm of
/// (R * C)(t) - t I.
double duality_residual(const ScalarRelaxation& r, const ScalarCreep& c, std::span<const double> grid);
double duality_residual(const MatrixRelaxation& r, const MatrixCreep& c, std::span<const double> grid);
/// Relaxation/creep in either order.  Throws ValidationError if the two are
/// not a relaxation and a creep kernel of the same dimension.
double duality_residual(const AnyKernel& a, const AnyKernel& b, std::span<const double> grid);

/// max over p of |p f~(p) p h~(p) - 1| (matrix: spectral norm of the product minus I).
double laplace_product_residual(const ScalarRelaxation& r, const ScalarCreep& c, std::span<const double> ps);
double laplace_product_residual(const MatrixRelaxation& r, const MatrixCreep& c, std::span<const double> ps);

/// Boundary identities a dual pair must satisfy.  Each applicable clause is
/// one entry; the residual is dimensionless.
///
///  scalar, from the relaxation side:
///    beta > 0: h(0) = 0 and beta h'(0) = 1;  beta = 0: h(0) f(0+) = 1;
///    f_inf > 0: h(inf) f_inf = 1;  f_inf = 0: h unbounded.
///  scalar, from the creep side:
///    h(0) > 0: beta = 0 and f(0+) h(0) = 1;  h(0) = 0: beta h'(0) = 1;
///    h bounded: f_inf h(inf) = 1;  h unbounded: f_inf = 0.
///  matrix:
///    N > 0: C(0) = 0 and C'(0) = N^-1;  N = 0, F(0+) invertible: C(0) = F(0+)^-1;
///    F_inf invertible: C(inf) = F_inf^-1;  C(0) PSD;
///    A invertible: N = 0 and F(0+) = A^-1;  D > 0: F_inf = 0;
///    D = 0, C(inf) invertible: F_inf = C(inf)^-1.
CheckReport check_limit_identities(const ScalarRelaxation& r, const ScalarCreep& c, double tol);
CheckReport check_limit_identities(const MatrixRelaxation& r, const MatrixCreep& c, double tol);
CheckReport check_limit_identities(const AnyKernel& a, const AnyKernel& b, double tol);

}  // namespace viscodual

#pragma once

#include <algorithm>
#include <cmath>

// Antiderivatives shared by the convolution routines.  All are evaluated in
// forms free of cancellation for small arguments.
namespace viscodual::detail {

/// (1 - exp(-r x)) / r
inline double phi1(double r, double x) { return -std::expm1(-r * x) / r; }

/// (r x - (1 - exp(-r x))) / r^2 = int_0^x (x - y) exp(-r y) dy
inline double phi2(double r, double x) {
  const double y = r * x;
  if (y < 1e-3) return x * x * (0.5 - y / 6.0 + y * y / 24.0 - y * y * y / 120.0);
  return (y + std::expm1(-y)) / (r * r);
}

/// int_0^x y exp(-l y) dy = (1 - exp(-l x)(1 + l x)) / l^2
inline double psi(double l, double x) {
  const double y = l * x;
  if (y < 1e-3) return x * x * (0.5 - y / 3.0 + y * y / 8.0 - y * y * y / 30.0);
  return (-std::expm1(-y) - y * std::exp(-y)) / (l * l);
}

/// int_0^x exp(-a (x - y)) exp(-b y) dy = (exp(-b x) - exp(-a x)) / (a - b).
/// Near-equal rates (|a - b| < 1e-8 max(a, b)) use x exp(-c x) sinh(z)/z with
/// c the mean rate and z = (a - b) x / 2, sinh(z)/z by its series.  Otherwise
/// exp(-lo x) (1 - exp(-d x)) / d, d = |a - b|, which avoids cancellation.
inline double exp_diff(double a, double b, double x) {
  const double diff = a - b;
  if (std::abs(diff) < 1e-8 * std::max(a, b)) {
    const double c = 0.5 * (a + b);
    const double z = 0.5 * diff * x;
    if (std::abs(z) < 1e-2) {
      const double z2 = z * z;
      return x * std::exp(-c * x) * (1.0 + z2 / 6.0 * (1.0 + z2 / 20.0 * (1.0 + z2 / 42.0)));
    }
  }
  const double lo = std::min(a, b);
  const double d = std::abs(diff);
  return std::exp(-lo * x) * (-std::expm1(-d * x) / d);
}

}  // namespace viscodual::detail

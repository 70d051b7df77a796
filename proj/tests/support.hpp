#pragma once

// Random kernel generators and independent oracles shared by the tests.

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "viscodual/kernel.hpp"

namespace support {

using namespace viscodual;

struct Rng {
  explicit Rng(std::uint64_t seed) : engine(seed) {}
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(engine); }
  double log_uniform(double a, double b) { return std::exp(uniform(std::log(a), std::log(b))); }
  int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(engine); }
  bool coin(double p = 0.5) { return uniform(0.0, 1.0) < p; }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine); }
  std::mt19937_64 engine;
};

/// n rates with max/min <= ratio, log-separated by at least `min_gap` decades,
/// the whole set shifted by a random factor in [0.1, 10].
inline std::vector<double> separated_rates(Rng& rng, int n, double ratio = 1e3, double min_gap = 0.05) {
  const double span = std::log10(ratio);
  std::vector<double> logs;
  while (static_cast<int>(logs.size()) < n) {
    const double x = rng.uniform(0.0, span);
    bool ok = true;
    for (double y : logs) ok = ok && std::abs(x - y) >= min_gap;
    if (ok) logs.push_back(x);
  }
  std::sort(logs.begin(), logs.end());
  const double shift = rng.log_uniform(0.1, 10.0);
  std::vector<double> rates;
  for (double x : logs) rates.push_back(shift * std::pow(10.0, x));
  return rates;
}

/// Scalar relaxation with up to `max_modes` modes, weights log-uniform on
/// [0.1, 10]; the Newtonian and equilibrium terms are each present with
/// probability 1/2.
inline ScalarRelaxation random_scalar_relaxation(Rng& rng, int max_modes = 8) {
  for (;;) {
    const int n = rng.integer(0, max_modes);
    const auto rates = separated_rates(rng, n);
    std::vector<ScalarMode> modes;
    for (double r : rates) modes.push_back({r, rng.log_uniform(0.1, 10.0)});
    const double rho = rates.empty() ? 1.0 : rates.back();
    const double beta = rng.coin() ? rng.log_uniform(0.1, 10.0) / rho : 0.0;
    const double a = rng.coin() ? rng.log_uniform(0.1, 10.0) : 0.0;
    if (n == 0 && beta == 0.0 && a == 0.0) continue;
    return ScalarRelaxation(beta, a, modes);
  }
}

inline ScalarCreep random_scalar_creep(Rng& rng, int max_modes = 8) {
  for (;;) {
    const int n = rng.integer(0, max_modes);
    const auto rates = separated_rates(rng, n);
    std::vector<ScalarMode> modes;
    for (double r : rates) modes.push_back({r, r * rng.log_uniform(0.1, 10.0)});
    const double rho = rates.empty() ? 1.0 : rates.back();
    const double a = rng.coin() ? rng.log_uniform(0.1, 10.0) : 0.0;
    const double b = rng.coin() ? rho * rng.log_uniform(0.1, 10.0) : 0.0;
    if (n == 0 && a == 0.0 && b == 0.0) continue;
    return ScalarCreep(a, b, modes);
  }
}

/// X X^T with X a 6 x rank Gaussian matrix, scaled to trace ~ 6 * scale.
inline Matrix6 random_gram(Rng& rng, int rank, double scale) {
  Eigen::MatrixXd x(6, rank);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < rank; ++j) x(i, j) = rng.normal();
  Dense6 g = x * x.transpose();
  g *= 6.0 * scale / g.trace();
  return Matrix6::from_upper(g);
}

inline MatrixRelaxation random_matrix_relaxation(Rng& rng, int max_modes = 4) {
  for (;;) {
    const int n = rng.integer(0, max_modes);
    const auto rates = separated_rates(rng, n);
    std::vector<MatrixMode> modes;
    for (double r : rates) modes.push_back({r, random_gram(rng, rng.integer(1, 6), rng.log_uniform(0.1, 10.0))});
    const double rho = rates.empty() ? 1.0 : rates.back();
    Matrix6 n_mat, b_mat;
    if (rng.coin()) n_mat = random_gram(rng, rng.integer(1, 6), rng.log_uniform(0.1, 10.0) / rho);
    if (rng.coin()) b_mat = random_gram(rng, rng.integer(1, 6), rng.log_uniform(0.1, 10.0));
    MatrixRelaxation k(n_mat, b_mat, modes);
    if (k.nondegenerate()) return k;
  }
}

// Largest rate of a kernel pair, 1 when neither has modes.
template <class A, class B>
double rate_scale(const A& a, const B& b) {
  const double rho = std::max(a.max_rate(), b.max_rate());
  return rho > 0.0 ? rho : 1.0;
}

/// Relative difference with an exact-zero rule: a zero reference must be
/// reproduced exactly.
inline double rel_err(double ref, double got) {
  if (ref == 0.0) return got == 0.0 ? 0.0 : INFINITY;
  return std::abs(got - ref) / std::abs(ref);
}

template <class M>
double modes_err(const std::vector<M>& a, const std::vector<M>& b) {
  if (a.size() != b.size()) return INFINITY;
  double e = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    e = std::max(e, rel_err(a[i].rate, b[i].rate));
    if constexpr (std::is_same_v<M, ScalarMode>) {
      e = std::max(e, rel_err(a[i].weight, b[i].weight));
    } else {
      e = std::max(e, (a[i].weight - b[i].weight).norm() / a[i].weight.norm());
    }
  }
  return e;
}

inline double coefficient_error(const ScalarRelaxation& a, const ScalarRelaxation& b) {
  return std::max({rel_err(a.newtonian(), b.newtonian()), rel_err(a.equilibrium(), b.equilibrium()),
                   modes_err(a.modes(), b.modes())});
}

inline double coefficient_error(const ScalarCreep& a, const ScalarCreep& b) {
  return std::max({rel_err(a.instantaneous(), b.instantaneous()), rel_err(a.fluidity(), b.fluidity()),
                   modes_err(a.modes(), b.modes())});
}

/// Matrix coefficients compared in norm; against a zero reference the error
/// is measured relative to the kernel scale.
inline double matrix_err(const Matrix6& ref, const Matrix6& got, double scale) {
  const double n = ref.norm();
  if (n == 0.0) return got.norm() / scale;
  return (got - ref).norm() / n;
}

inline double coefficient_error(const MatrixRelaxation& a, const MatrixRelaxation& b) {
  const double rho = a.max_rate() > 0.0 ? a.max_rate() : 1.0;
  double scale = a.newtonian().norm() * rho + a.equilibrium().norm();
  for (const auto& m : a.modes()) scale += m.weight.norm();
  return std::max({matrix_err(a.newtonian(), b.newtonian(), scale / rho),
                   matrix_err(a.equilibrium(), b.equilibrium(), scale), modes_err(a.modes(), b.modes())});
}

/// Zeros -s < 0 of the expanded numerator of p f~(p)
///   N(p) = (beta p + a) prod (p + r_k) + sum m_k p prod_{j != k} (p + r_j),
/// from the eigenvalues of its companion matrix in extended precision, each
/// polished by Newton steps.  The trivial zero at p = 0 (a = 0) is removed.
inline std::vector<double> companion_root_oracle(const ScalarRelaxation& k) {
  using L = long double;
  using Poly = std::vector<L>;
  const L sigma = k.max_rate() > 0.0 ? k.max_rate() : 1.0;
  auto mul_linear = [](const Poly& p, L c) {  // p(q) * (q + c)
    Poly out(p.size() + 1, 0.0L);
    for (std::size_t i = 0; i < p.size(); ++i) {
      out[i] += c * p[i];
      out[i + 1] += p[i];
    }
    return out;
  };
  // In q = p / sigma, up to the factor sigma^n.
  Poly d{1.0L};
  for (const auto& m : k.modes()) d = mul_linear(d, m.rate / sigma);
  Poly num(d.size() + 1, 0.0L);
  for (std::size_t i = 0; i < d.size(); ++i) {
    num[i] += static_cast<L>(k.equilibrium()) * d[i];
    num[i + 1] += static_cast<L>(k.newtonian()) * sigma * d[i];
  }
  for (std::size_t j = 0; j < k.modes().size(); ++j) {
    Poly part{0.0L, 1.0L};
    for (std::size_t i = 0; i < k.modes().size(); ++i)
      if (i != j) part = mul_linear(part, k.modes()[i].rate / sigma);
    for (std::size_t i = 0; i < part.size(); ++i) num[i] += static_cast<L>(k.modes()[j].weight) * part[i];
  }
  while (!num.empty() && num.back() == 0.0L) num.pop_back();
  if (k.equilibrium() == 0.0) num.erase(num.begin());  // divide by q
  const int deg = static_cast<int>(num.size()) - 1;
  std::vector<double> roots;
  if (deg < 1) return roots;

  using MatL = Eigen::Matrix<L, Eigen::Dynamic, Eigen::Dynamic>;
  MatL comp = MatL::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0L;
  for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -num[static_cast<std::size_t>(i)] / num.back();
  Eigen::EigenSolver<MatL> es(comp, false);
  auto eval = [&](L q, L& deriv) {
    L v = 0.0L;
    deriv = 0.0L;
    for (int i = deg; i >= 0; --i) {
      deriv = deriv * q + v;
      v = v * q + num[static_cast<std::size_t>(i)];
    }
    return v;
  };
  for (int i = 0; i < deg; ++i) {
    const std::complex<L> z = es.eigenvalues()(i);
    L q = z.real();
    for (int it = 0; it < 5; ++it) {
      L dv;
      const L v = eval(q, dv);
      if (dv == 0.0L) break;
      q -= v / dv;
    }
    roots.push_back(static_cast<double>(-q * sigma));
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

/// (R * C)(t) = beta C(t) + int_0^t f0(t - tau) C(tau) dtau by adaptive
/// Gauss-Kronrod quadrature.
inline double quadrature_convolution(const ScalarRelaxation& r, const ScalarCreep& c, double t) {
  auto f0 = [&](double x) {
    double v = r.equilibrium();
    for (const auto& m : r.modes()) v += m.weight * std::exp(-m.rate * x);
    return v;
  };
  auto integrand = [&](double tau) { return f0(t - tau) * eval_creep(c, tau); };
  // Split at the relaxation time scales so that boundary layers near tau = t are resolved.
  std::vector<double> cuts{0.0};
  for (const auto& m : r.modes()) {
    for (double k : {1.0, 8.0}) {
      const double x = t - k / m.rate;
      if (x > 0.0) cuts.push_back(x);
    }
  }
  for (const auto& m : c.modes()) {
    for (double k : {1.0, 8.0})
      if (k / m.rate < t) cuts.push_back(k / m.rate);
  }
  cuts.push_back(t);
  std::sort(cuts.begin(), cuts.end());
  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] <= cuts[i]) continue;
    integral += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, cuts[i], cuts[i + 1], 12, 1e-11);
  }
  return r.newtonian() * eval_creep(c, t) + integral;
}

}  // namespace support

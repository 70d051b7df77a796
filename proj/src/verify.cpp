#include "viscodual/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <type_traits>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "closed_form.hpp"
#include "viscodual/errors.hpp"

namespace viscodual {

void CheckReport::add(const std::string& name, double residual, double tolerance) {
  if (find(name)) throw std::logic_error("duplicate check " + name);
  entries_.push_back({name, residual <= tolerance, residual, tolerance});
}

void CheckReport::merge(const CheckReport& other) {
  for (const auto& e : other.entries_) add(e.name, e.residual, e.tolerance);
}

const CheckEntry* CheckReport::find(const std::string& name) const {
  for (const auto& e : entries_)
    if (e.name == name) return &e;
  return nullptr;
}

bool CheckReport::all_passed() const { return failures() == 0; }

std::size_t CheckReport::failures() const {
  return static_cast<std::size_t>(
      std::count_if(entries_.begin(), entries_.end(), [](const CheckEntry& e) { return !e.pass; }));
}

std::vector<double> geometric_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0 && hi > lo) || count < 2) throw std::invalid_argument("invalid geometric grid");
  std::vector<double> g(count);
  const double ratio = std::log(hi / lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) g[i] = lo * std::exp(ratio * static_cast<double>(i));
  g.back() = hi;
  return g;
}

std::vector<double> default_time_grid(double max_rate) {
  const double rho = max_rate > 0.0 ? max_rate : 1.0;
  return geometric_grid(1e-3 / rho, 1e3 / rho, 33);
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double spectral_norm(const Dense6& m) {
  Eigen::JacobiSVD<Dense6> svd(m);
  return svd.singularValues()(0);
}

double min_eig(const Dense6& m) {
  Eigen::SelfAdjointEigenSolver<Dense6> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double sym_norm(const Dense6& m) {
  Eigen::SelfAdjointEigenSolver<Dense6> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

Dense6 inverse(const Dense6& m) { return m.ldlt().solve(Dense6::Identity()); }

bool positive_definite(const Dense6& m) {
  const double n = sym_norm(m);
  return n > 0.0 && min_eig(m) > 1e-8 * n;
}

// -- well-formedness ----------------------------------------------------------

template <class W>
double max_rate_of(const KernelCoefficients<W>& c) {
  double r = 0.0;
  for (const auto& m : c.modes) r = std::max(r, m.first);
  return r > 0.0 ? r : 1.0;
}

double magnitude(double x) { return std::abs(x); }
double magnitude(const Dense6& x) { return sym_norm(x); }
// Violation of "sign * d >= 0" in absolute terms.
double sign_violation(double d, double sign) { return std::max(0.0, -sign * d); }
double sign_violation(const Dense6& d, double sign) { return std::max(0.0, -min_eig(sign * d)); }

template <class W>
W sample(const KernelCoefficients<W>& c, bool creep, double t) {
  W v = creep ? W(c.first + c.second * t) : W(c.second);
  for (const auto& [rate, w] : c.modes) {
    if (creep) {
      const double factor = rate == 0.0 ? t : -std::expm1(-rate * t) / rate;
      v += w * factor;
    } else {
      v += w * std::exp(-rate * t);
    }
  }
  return v;
}

// Divided differences of order 0..3 with sign pattern `sign(n)`; returns the
// worst violation relative to the magnitude of the difference quotient.
template <class W>
std::array<double, 4> divided_difference_violations(const std::vector<double>& t,
                                                    const std::vector<W>& f, bool creep) {
  std::array<double, 4> worst{};
  std::vector<W> d = f;
  std::vector<double> mag(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) mag[i] = magnitude(f[i]);
  for (int order = 0; order <= 3; ++order) {
    if (order > 0) {
      const std::size_t k = static_cast<std::size_t>(order);
      std::vector<W> next;
      std::vector<double> next_mag;
      for (std::size_t i = 0; i + 1 < d.size(); ++i) {
        const double h = t[i + k] - t[i];
        next.push_back(W((d[i + 1] - d[i]) / h));
        next_mag.push_back((mag[i + 1] + mag[i]) / h);
      }
      d = std::move(next);
      mag = std::move(next_mag);
    }
    const double sign = creep ? (order == 0 ? 1.0 : (order % 2 == 1 ? 1.0 : -1.0))
                              : (order % 2 == 0 ? 1.0 : -1.0);
    double w = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      const double v = sign_violation(d[i], sign);
      if (v > 0.0) w = std::max(w, mag[i] > 0.0 ? v / mag[i] : kInf);
      if (!std::isfinite(magnitude(d[i]))) w = kInf;
    }
    worst[static_cast<std::size_t>(order)] = w;
  }
  return worst;
}

template <class W>
void structural_checks(const KernelCoefficients<W>& c, bool creep, CheckReport& report) {
  double bad_rates = 0.0, unsorted = 0.0;
  for (std::size_t i = 0; i < c.modes.size(); ++i) {
    if (!(c.modes[i].first > 0.0) || !std::isfinite(c.modes[i].first)) bad_rates += 1.0;
    if (i > 0 && !(c.modes[i].first > c.modes[i - 1].first)) unsorted += 1.0;
  }
  report.add("rates_positive", bad_rates, 0.0);
  report.add("rates_sorted_distinct", unsorted, 0.0);

  if constexpr (std::is_same_v<W, double>) {
    double bad = 0.0;
    for (const auto& m : c.modes)
      if (!(m.second > 0.0)) bad += 1.0;
    report.add("weights_positive", bad, 0.0);
    const double neg = (c.first < 0.0 ? 1.0 : 0.0) + (c.second < 0.0 ? 1.0 : 0.0);
    report.add("coefficients_nonnegative", neg, 0.0);
    const bool zero = c.first == 0.0 && c.second == 0.0 && c.modes.empty();
    report.add("not_identically_zero", zero ? 1.0 : 0.0, 0.0);
  } else {
    double asym = 0.0;
    auto rel_asym = [](const Dense6& m) {
      const double s = m.cwiseAbs().maxCoeff();
      return s > 0.0 ? (m - m.transpose()).cwiseAbs().maxCoeff() / s : 0.0;
    };
    asym = std::max(rel_asym(c.first), rel_asym(c.second));
    for (const auto& m : c.modes) asym = std::max(asym, rel_asym(m.second));
    report.add("symmetric", asym, 1e-12);

    auto psd_violation = [](const Dense6& m) {
      const double n = sym_norm(m);
      return n > 0.0 ? std::max(0.0, -min_eig(m)) / n : 0.0;
    };
    double weights = 0.0, zero_weights = 0.0;
    Dense6 total = c.first + c.second;
    for (const auto& m : c.modes) {
      weights = std::max(weights, psd_violation(m.second));
      if (sym_norm(m.second) == 0.0) zero_weights += 1.0;
      total += m.second;
    }
    report.add("weights_psd", weights, kPsdTol);
    report.add("weights_nonzero", zero_weights, 0.0);
    report.add("coefficients_psd", std::max(psd_violation(c.first), psd_violation(c.second)), kPsdTol);
    report.add(creep ? "no_strain_free_stress_direction" : "no_stress_free_strain_direction",
               positive_definite(0.5 * (total + total.transpose())) ? 0.0 : 1.0, 0.0);
  }

  const auto grid = geometric_grid(1e-3 / max_rate_of(c), 1e3 / max_rate_of(c), 64);
  std::vector<W> values;
  values.reserve(grid.size());
  for (double t : grid) {
    W v = sample(c, creep, t);
    if constexpr (!std::is_same_v<W, double>) v = 0.5 * (v + v.transpose());
    values.push_back(v);
  }
  const auto viol = divided_difference_violations(grid, values, creep);
  const char* prefix = creep ? "bernstein_order_" : "cm_order_";
  for (int n = 0; n <= 3; ++n)
    report.add(prefix + std::to_string(n), viol[static_cast<std::size_t>(n)], kSignTol);
}

}  // namespace

CheckReport check_wellformed(const KernelData& data) {
  CheckReport report;
  std::visit([&](const auto& c) { structural_checks(c, data.creep, report); }, data.coefficients);
  return report;
}

CheckReport check_wellformed(const AnyKernel& kernel) { return check_wellformed(to_data(kernel)); }

// -- duality convolution -------------------------------------------------------

double duality_convolution(const ScalarRelaxation& r, const ScalarCreep& c, double t) {
  using detail::exp_diff;
  using detail::phi1;
  using detail::phi2;
  // C(tau) = alpha + b tau - sum w_j exp(-s_j tau)
  double alpha = c.instantaneous();
  for (const auto& m : c.modes()) alpha += m.weight / m.rate;
  const double b = c.fluidity();

  double total = r.newtonian() * eval_creep(c, t);
  const double a = r.equilibrium();
  if (a != 0.0) {
    double v = alpha * t + 0.5 * b * t * t;
    for (const auto& m : c.modes()) v -= (m.weight / m.rate) * phi1(m.rate, t);
    total += a * v;
  }
  for (const auto& mk : r.modes()) {
    double v = alpha * phi1(mk.rate, t) + b * phi2(mk.rate, t);
    for (const auto& mj : c.modes()) v -= (mj.weight / mj.rate) * exp_diff(mk.rate, mj.rate, t);
    total += mk.weight * v;
  }
  return total;
}

Dense6 duality_convolution(const MatrixRelaxation& r, const MatrixCreep& c, double t) {
  using detail::exp_diff;
  using detail::phi1;
  using detail::phi2;
  Dense6 alpha = c.instantaneous().dense();
  for (const auto& m : c.modes()) alpha += m.weight.dense() / m.rate;
  const Dense6 b = c.fluidity().dense();

  Dense6 total = r.newtonian().dense() * eval_creep(c, t).dense();
  const Dense6 a = r.equilibrium().dense();
  if (!r.equilibrium().is_zero()) {
    Dense6 v = alpha * t + b * (0.5 * t * t);
    for (const auto& m : c.modes()) v -= m.weight.dense() * (phi1(m.rate, t) / m.rate);
    total += a * v;
  }
  for (const auto& mk : r.modes()) {
    Dense6 v = alpha * phi1(mk.rate, t) + b * phi2(mk.rate, t);
    for (const auto& mj : c.modes()) v -= mj.weight.dense() * (exp_diff(mk.rate, mj.rate, t) / mj.rate);
    total += mk.weight.dense() * v;
  }
  return total;
}

namespace {

double pair_rate(double a, double b) {
  const double r = std::max(a, b);
  return r > 0.0 ? r : 1.0;
}

}  // namespace

double duality_residual(const ScalarRelaxation& r, const ScalarCreep& c, std::span<const double> grid) {
  const double floor = 1e-6 / pair_rate(r.max_rate(), c.max_rate());
  double worst = 0.0;
  for (double t : grid) {
    const double e = std::abs(duality_convolution(r, c, t) - t) / std::max(t, floor);
    worst = std::isnan(e) ? kInf : std::max(worst, e);
  }
  return worst;
}

double duality_residual(const MatrixRelaxation& r, const MatrixCreep& c, std::span<const double> grid) {
  const double floor = 1e-6 / pair_rate(r.max_rate(), c.max_rate());
  double worst = 0.0;
  for (double t : grid) {
    const Dense6 d = duality_convolution(r, c, t) - t * Dense6::Identity();
    const double e = spectral_norm(d) / std::max(t, floor);
    worst = std::isnan(e) ? kInf : std::max(worst, e);
  }
  return worst;
}

double duality_residual(const AnyKernel& a, const AnyKernel& b, std::span<const double> grid) {
  if (const auto* r = std::get_if<ScalarRelaxation>(&a))
    if (const auto* c = std::get_if<ScalarCreep>(&b)) return duality_residual(*r, *c, grid);
  if (const auto* r = std::get_if<ScalarRelaxation>(&b))
    if (const auto* c = std::get_if<ScalarCreep>(&a)) return duality_residual(*r, *c, grid);
  if (const auto* r = std::get_if<MatrixRelaxation>(&a))
    if (const auto* c = std::get_if<MatrixCreep>(&b)) return duality_residual(*r, *c, grid);
  if (const auto* r = std::get_if<MatrixRelaxation>(&b))
    if (const auto* c = std::get_if<MatrixCreep>(&a)) return duality_residual(*r, *c, grid);
  throw ValidationError("incompatible kernel kinds: " + kind_name(a) + " and " + kind_name(b));
}

double laplace_product_residual(const ScalarRelaxation& r, const ScalarCreep& c, std::span<const double> ps) {
  double worst = 0.0;
  for (double p : ps) {
    const double e = std::abs(laplace_times_p(r, p) * laplace_times_p(c, p) - 1.0);
    worst = std::isnan(e) ? kInf : std::max(worst, e);
  }
  return worst;
}

double laplace_product_residual(const MatrixRelaxation& r, const MatrixCreep& c, std::span<const double> ps) {
  double worst = 0.0;
  for (double p : ps) {
    const Dense6 prod = laplace_times_p(r, p).dense() * laplace_times_p(c, p).dense();
    const double e = spectral_norm(prod - Dense6::Identity());
    worst = std::isnan(e) ? kInf : std::max(worst, e);
  }
  return worst;
}

// -- limit identities ------------------------------------------------------------

CheckReport check_limit_identities(const ScalarRelaxation& r, const ScalarCreep& c, double tol) {
  CheckReport rep;
  const double rho = pair_rate(r.max_rate(), c.max_rate());
  const double beta = r.newtonian();
  double f0 = r.equilibrium();
  for (const auto& m : r.modes()) f0 += m.weight;
  const double f_inf = r.equilibrium();
  const LimitReport cl = creep_limits(c);
  const double h0 = c.instantaneous();
  const double h_slope0 = std::get<double>(cl.derivative_at_zero);
  const bool bounded = !is_infinite(cl.value_at_infinity);
  const double h_inf = bounded ? std::get<double>(cl.value_at_infinity) : kInf;

  if (beta > 0.0) {
    rep.add("t1_h0_vanishes", std::abs(h0) * (f0 + beta * rho), tol);
    rep.add("t1_newtonian_inverse_slope", std::abs(beta * h_slope0 - 1.0), tol);
  } else {
    rep.add("t1_h0_inverse_f0", std::abs(h0 * f0 - 1.0), tol);
  }
  if (f_inf > 0.0) {
    rep.add("t1_h_inf_inverse_f_inf", bounded ? std::abs(h_inf * f_inf - 1.0) : kInf, tol);
  } else {
    rep.add("t1_h_unbounded", bounded ? 1.0 : 0.0, tol);
  }

  if (h0 > 0.0) {
    rep.add("t2_newtonian_vanishes", beta * rho * h0, tol);
    rep.add("t2_f0_inverse_h0", std::abs(f0 * h0 - 1.0), tol);
  } else {
    rep.add("t2_newtonian_inverse_slope", std::abs(beta * h_slope0 - 1.0), tol);
  }
  if (bounded) {
    rep.add("t2_f_inf_inverse_h_inf", std::abs(f_inf * h_inf - 1.0), tol);
  } else {
    rep.add("t2_f_inf_vanishes", f_inf / (f0 + beta * rho), tol);
  }
  return rep;
}

CheckReport check_limit_identities(const MatrixRelaxation& r, const MatrixCreep& c, double tol) {
  CheckReport rep;
  const double rho = pair_rate(r.max_rate(), c.max_rate());
  const Dense6 n = r.newtonian().dense();
  const Dense6 f_inf = r.equilibrium().dense();
  Dense6 f0 = f_inf;
  for (const auto& m : r.modes()) f0 += m.weight.dense();
  const Dense6 a = c.instantaneous().dense();
  const Dense6 d = c.fluidity().dense();
  Dense6 slope0 = d;
  Dense6 plateau = a;
  for (const auto& m : c.modes()) {
    slope0 += m.weight.dense();
    plateau += m.weight.dense() / m.rate;
  }
  const double scale_r = sym_norm(n) * rho + sym_norm(f0);
  const bool n_zero = sym_norm(n) * rho <= tol * sym_norm(f0);
  const bool d_zero = sym_norm(d) <= tol * sym_norm(slope0);
  auto rel = [](const Dense6& x, const Dense6& ref) { return sym_norm(x - ref) / sym_norm(ref); };

  const double na = sym_norm(a);
  rep.add("t3_creep_psd_at_origin", na > 0.0 ? std::max(0.0, -min_eig(a)) / na : 0.0, tol);
  if (positive_definite(n)) {
    rep.add("t3_creep_vanishes_at_origin", na * scale_r, tol);
    rep.add("t3_creep_slope_inverse_newtonian", rel(slope0, inverse(n)), tol);
  } else if (n_zero && positive_definite(f0)) {
    rep.add("t3_creep_at_origin_inverse", rel(a, inverse(f0)), tol);
  }
  if (positive_definite(f_inf)) {
    const double unbounded = d_zero ? 0.0 : kInf;
    rep.add("t3_creep_at_infinity_inverse", unbounded + rel(plateau, inverse(f_inf)), tol);
  }

  if (positive_definite(a)) {
    rep.add("t4_relaxation_finite_at_origin", sym_norm(n) * rho * na, tol);
    rep.add("t4_relaxation_at_origin_inverse", rel(f0, inverse(a)), tol);
  }
  if (positive_definite(d)) {
    rep.add("t4_relaxation_vanishes_at_infinity", sym_norm(f_inf) / scale_r, tol);
  } else if (d_zero && positive_definite(plateau)) {
    rep.add("t4_relaxation_at_infinity_inverse", rel(f_inf, inverse(plateau)), tol);
  }
  return rep;
}

CheckReport check_limit_identities(const AnyKernel& a, const AnyKernel& b, double tol) {
  if (const auto* r = std::get_if<ScalarRelaxation>(&a))
    if (const auto* c = std::get_if<ScalarCreep>(&b)) return check_limit_identities(*r, *c, tol);
  if (const auto* r = std::get_if<ScalarRelaxation>(&b))
    if (const auto* c = std::get_if<ScalarCreep>(&a)) return check_limit_identities(*r, *c, tol);
  if (const auto* r = std::get_if<MatrixRelaxation>(&a))
    if (const auto* c = std::get_if<MatrixCreep>(&b)) return check_limit_identities(*r, *c, tol);
  if (const auto* r = std::get_if<MatrixRelaxation>(&b))
    if (const auto* c = std::get_if<MatrixCreep>(&a)) return check_limit_identities(*r, *c, tol);
  throw ValidationError("incompatible kernel kinds: " + kind_name(a) + " and " + kind_name(b));
}

}  // namespace viscodual

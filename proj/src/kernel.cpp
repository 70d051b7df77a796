#include "viscodual/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "viscodual/errors.hpp"

namespace viscodual {
namespace {

double magnitude(double w) { return w; }
double magnitude(const Matrix6& w) { return w.dense().trace(); }

void check_rate(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) throw ValidationError("rate must be positive");
}

void check_weight(double w, const char* what) {
  if (!std::isfinite(w)) throw ValidationError(std::string(what) + " must be finite");
  if (w < 0.0) throw ValidationError(std::string(what) + " must be positive");
}

void check_psd(const Matrix6& m, const char* what) {
  for (double x : m.packed())
    if (!std::isfinite(x)) throw ValidationError(std::string(what) + " must be finite");
  if (!m.is_psd(kPsdTol)) throw ValidationError(std::string(what) + " must be positive semidefinite");
}

// Sort by rate, merge near-coincident rates and drop negligible weights.
// Returns the number of merges.
template <class Mode>
int canonicalize(std::vector<Mode>& modes) {
  if (modes.empty()) return 0;
  std::sort(modes.begin(), modes.end(),
            [](const Mode& a, const Mode& b) { return a.rate < b.rate; });
  const double merge_gap = kMergeTol * modes.back().rate;

  int merges = 0;
  std::vector<Mode> merged;
  merged.reserve(modes.size());
  for (const Mode& m : modes) {
    if (!merged.empty() && m.rate - merged.back().rate < merge_gap) {
      Mode& last = merged.back();
      const double w0 = magnitude(last.weight);
      const double w1 = magnitude(m.weight);
      if (w0 + w1 > 0.0) last.rate = (w0 * last.rate + w1 * m.rate) / (w0 + w1);
      last.weight += m.weight;
      ++merges;
    } else {
      merged.push_back(m);
    }
  }

  double total = 0.0;
  for (const Mode& m : merged) total += magnitude(m.weight);
  std::erase_if(merged, [&](const Mode& m) { return magnitude(m.weight) <= kDropTol * total; });
  modes = std::move(merged);
  return merges;
}

Dense6 mode_sum(const std::vector<MatrixMode>& modes) {
  Dense6 s = Dense6::Zero();
  for (const auto& m : modes) s += m.weight.dense();
  return s;
}

void require_positive_time(double t) {
  if (!(t > 0.0)) throw std::invalid_argument("time must be positive");
}

void require_nonnegative_time(double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("time must be non-negative");
}

void require_positive_p(double p) {
  if (!(p > 0.0)) throw std::invalid_argument("Laplace variable must be positive");
}

}  // namespace

ScalarRelaxation::ScalarRelaxation(double newtonian, double equilibrium,
                                   std::vector<ScalarMode> modes)
    : newtonian_(newtonian), equilibrium_(equilibrium), modes_(std::move(modes)) {
  check_weight(newtonian_, "newtonian coefficient");
  check_weight(equilibrium_, "equilibrium modulus");
  for (const auto& m : modes_) {
    check_rate(m.rate);
    check_weight(m.weight, "weight");
  }
  merges_ = canonicalize(modes_);
  pure_newtonian_ = equilibrium_ == 0.0 && modes_.empty();
  if (pure_newtonian_ && newtonian_ == 0.0)
    throw ValidationError("relaxation kernel is identically zero");
}

ScalarCreep::ScalarCreep(double instantaneous, double fluidity, std::vector<ScalarMode> modes)
    : instantaneous_(instantaneous), fluidity_(fluidity), modes_(std::move(modes)) {
  check_weight(instantaneous_, "instantaneous compliance");
  check_weight(fluidity_, "fluidity");
  for (const auto& m : modes_) {
    check_rate(m.rate);
    check_weight(m.weight, "weight");
  }
  merges_ = canonicalize(modes_);
  if (instantaneous_ == 0.0 && fluidity_ == 0.0 && modes_.empty())
    throw ValidationError("creep function is identically zero");
}

MatrixRelaxation::MatrixRelaxation(Matrix6 newtonian, Matrix6 equilibrium,
                                   std::vector<MatrixMode> modes, bool strict)
    : newtonian_(newtonian), equilibrium_(equilibrium), modes_(std::move(modes)) {
  check_psd(newtonian_, "newtonian matrix");
  check_psd(equilibrium_, "equilibrium matrix");
  for (const auto& m : modes_) {
    check_rate(m.rate);
    check_psd(m.weight, "weight");
  }
  merges_ = canonicalize(modes_);
  if (strict && !nondegenerate())
    throw ValidationError("N + B + sum G_k is not positive definite");
}

bool MatrixRelaxation::nondegenerate() const {
  return Matrix6::from_upper(newtonian_.dense() + equilibrium_.dense() + mode_sum(modes_))
      .is_positive_definite(1e-12);
}

MatrixCreep::MatrixCreep(Matrix6 instantaneous, Matrix6 fluidity, std::vector<MatrixMode> modes,
                         bool strict)
    : instantaneous_(instantaneous), fluidity_(fluidity), modes_(std::move(modes)) {
  check_psd(instantaneous_, "instantaneous matrix");
  check_psd(fluidity_, "fluidity matrix");
  for (const auto& m : modes_) {
    check_rate(m.rate);
    check_psd(m.weight, "weight");
  }
  merges_ = canonicalize(modes_);
  if (strict && !nondegenerate())
    throw ValidationError("A + D + sum H_j is not positive definite");
}

bool MatrixCreep::nondegenerate() const {
  return Matrix6::from_upper(instantaneous_.dense() + fluidity_.dense() + mode_sum(modes_))
      .is_positive_definite(1e-12);
}

double eval_relaxation(const ScalarRelaxation& k, double t) {
  require_positive_time(t);
  double f = k.equilibrium();
  for (const auto& m : k.modes()) f += m.weight * std::exp(-m.rate * t);
  return f;
}

Matrix6 eval_relaxation(const MatrixRelaxation& k, double t) {
  require_positive_time(t);
  Matrix6 f = k.equilibrium();
  for (const auto& m : k.modes()) f += m.weight * std::exp(-m.rate * t);
  return f;
}

double eval_creep(const ScalarCreep& k, double t) {
  require_nonnegative_time(t);
  double h = k.instantaneous() + k.fluidity() * t;
  for (const auto& m : k.modes()) h += m.weight * -std::expm1(-m.rate * t) / m.rate;
  return h;
}

Matrix6 eval_creep(const MatrixCreep& k, double t) {
  require_nonnegative_time(t);
  Matrix6 c = k.instantaneous() + k.fluidity() * t;
  for (const auto& m : k.modes()) c += m.weight * (-std::expm1(-m.rate * t) / m.rate);
  return c;
}

double eval_creep_rate(const ScalarCreep& k, double t) {
  require_nonnegative_time(t);
  double d = k.fluidity();
  for (const auto& m : k.modes()) d += m.weight * std::exp(-m.rate * t);
  return d;
}

Matrix6 eval_creep_rate(const MatrixCreep& k, double t) {
  require_nonnegative_time(t);
  Matrix6 d = k.fluidity();
  for (const auto& m : k.modes()) d += m.weight * std::exp(-m.rate * t);
  return d;
}

double laplace_times_p(const ScalarRelaxation& k, double p) {
  require_positive_p(p);
  double v = k.newtonian() * p + k.equilibrium();
  for (const auto& m : k.modes()) v += m.weight * p / (p + m.rate);
  return v;
}

Matrix6 laplace_times_p(const MatrixRelaxation& k, double p) {
  require_positive_p(p);
  Matrix6 v = k.newtonian() * p + k.equilibrium();
  for (const auto& m : k.modes()) v += m.weight * (p / (p + m.rate));
  return v;
}

double laplace_times_p(const ScalarCreep& k, double p) {
  require_positive_p(p);
  double v = k.instantaneous() + k.fluidity() / p;
  for (const auto& m : k.modes()) v += m.weight / (p + m.rate);
  return v;
}

Matrix6 laplace_times_p(const MatrixCreep& k, double p) {
  require_positive_p(p);
  Matrix6 v = k.instantaneous() + k.fluidity() * (1.0 / p);
  for (const auto& m : k.modes()) v += m.weight * (1.0 / (p + m.rate));
  return v;
}

LimitReport relaxation_limits(const ScalarRelaxation& k) {
  double at_zero = k.equilibrium();
  double slope = 0.0;
  for (const auto& m : k.modes()) {
    at_zero += m.weight;
    slope -= m.weight * m.rate;
  }
  return LimitReport{at_zero, k.equilibrium(), slope, 0.0, LimitValue{k.newtonian()}};
}

LimitReport relaxation_limits(const MatrixRelaxation& k) {
  Matrix6 at_zero = k.equilibrium();
  Matrix6 slope;
  for (const auto& m : k.modes()) {
    at_zero += m.weight;
    slope -= m.weight * m.rate;
  }
  return LimitReport{at_zero, k.equilibrium(), slope, Matrix6::zero(), LimitValue{k.newtonian()}};
}

LimitReport creep_limits(const ScalarCreep& k) {
  double slope = k.fluidity();
  double plateau = k.instantaneous();
  for (const auto& m : k.modes()) {
    slope += m.weight;
    plateau += m.weight / m.rate;
  }
  LimitValue at_inf = k.fluidity() > 0.0 ? LimitValue{Infinite{}} : LimitValue{plateau};
  return LimitReport{k.instantaneous(), at_inf, slope, k.fluidity(), std::nullopt};
}

LimitReport creep_limits(const MatrixCreep& k) {
  Matrix6 slope = k.fluidity();
  Matrix6 plateau = k.instantaneous();
  for (const auto& m : k.modes()) {
    slope += m.weight;
    plateau += m.weight * (1.0 / m.rate);
  }
  // Any nonzero fluidity makes C(t) unbounded along some direction.
  LimitValue at_inf = k.fluidity().is_zero() ? LimitValue{plateau} : LimitValue{Infinite{}};
  return LimitReport{k.instantaneous(), at_inf, slope, k.fluidity(), std::nullopt};
}

std::string kind_name(const AnyKernel& k) {
  switch (k.index()) {
    case 0: return "scalar relaxation";
    case 1: return "scalar creep";
    case 2: return "matrix relaxation";
    default: return "matrix creep";
  }
}

}  // namespace viscodual

namespace viscodual {

AnyKernel to_kernel(const KernelData& data, bool strict) {
  if (const auto* s = std::get_if<KernelCoefficients<double>>(&data.coefficients)) {
    std::vector<ScalarMode> modes;
    for (const auto& [rate, w] : s->modes) modes.push_back({rate, w});
    if (data.creep) return ScalarCreep(s->first, s->second, std::move(modes));
    return ScalarRelaxation(s->first, s->second, std::move(modes));
  }
  const auto& m = std::get<KernelCoefficients<Dense6>>(data.coefficients);
  std::vector<MatrixMode> modes;
  for (const auto& [rate, w] : m.modes) modes.push_back({rate, Matrix6::from_dense(w)});
  const Matrix6 first = Matrix6::from_dense(m.first);
  const Matrix6 second = Matrix6::from_dense(m.second);
  if (data.creep) return MatrixCreep(first, second, std::move(modes), strict);
  return MatrixRelaxation(first, second, std::move(modes), strict);
}

KernelData to_data(const AnyKernel& kernel) {
  KernelData out;
  std::visit(
      [&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, ScalarRelaxation> || std::is_same_v<T, ScalarCreep>) {
          KernelCoefficients<double> c;
          if constexpr (std::is_same_v<T, ScalarRelaxation>) {
            c.first = k.newtonian();
            c.second = k.equilibrium();
          } else {
            out.creep = true;
            c.first = k.instantaneous();
            c.second = k.fluidity();
          }
          for (const auto& mode : k.modes()) c.modes.emplace_back(mode.rate, mode.weight);
          out.coefficients = std::move(c);
        } else {
          KernelCoefficients<Dense6> c;
          if constexpr (std::is_same_v<T, MatrixRelaxation>) {
            c.first = k.newtonian().dense();
            c.second = k.equilibrium().dense();
          } else {
            out.creep = true;
            c.first = k.instantaneous().dense();
            c.second = k.fluidity().dense();
          }
          for (const auto& mode : k.modes()) c.modes.emplace_back(mode.rate, mode.weight.dense());
          out.coefficients = std::move(c);
        }
      },
      kernel);
  return out;
}

}  // namespace viscodual

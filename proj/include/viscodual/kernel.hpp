#pragma once

#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "viscodual/matrix6.hpp"

namespace viscodual {

/// Modes whose rates differ by less than this fraction of the largest rate
/// are merged.
inline constexpr double kMergeTol = 1e-12;
/// Modes lighter than this fraction of the total mode weight are dropped.
inline constexpr double kDropTol = 1e-14;
/// PSD acceptance: smallest eigenvalue >= -kPsdTol * ||M||.
inline constexpr double kPsdTol = 1e-10;

struct ScalarMode {
  double rate = 0.0;
  double weight = 0.0;
  friend bool operator==(const ScalarMode&, const ScalarMode&) = default;
};

struct MatrixMode {
  double rate = 0.0;
  Matrix6 weight;
  friend bool operator==(const MatrixMode&, const MatrixMode&) = default;
};

/// f(t) = newtonian * u(t) + equilibrium + sum_k weight_k exp(-rate_k t),
/// where u is the convolution identity (a Dirac mass at 0).  The continuous
/// part is completely monotone by construction.
class ScalarRelaxation {
 public:
  /// Validates and canonicalizes (sort, merge, drop).  A kernel with no
  /// continuous part is accepted and flagged as pure-Newtonian.
  ScalarRelaxation(double newtonian, double equilibrium, std::vector<ScalarMode> modes);

  double newtonian() const { return newtonian_; }
  double equilibrium() const { return equilibrium_; }
  const std::vector<ScalarMode>& modes() const { return modes_; }
  bool is_pure_newtonian() const { return pure_newtonian_; }
  /// Number of mode merges performed during canonicalization.
  int merges() const { return merges_; }
  double max_rate() const { return modes_.empty() ? 0.0 : modes_.back().rate; }

  friend bool operator==(const ScalarRelaxation& a, const ScalarRelaxation& b) {
    return a.newtonian_ == b.newtonian_ && a.equilibrium_ == b.equilibrium_ && a.modes_ == b.modes_;
  }

 private:
  double newtonian_;
  double equilibrium_;
  std::vector<ScalarMode> modes_;
  bool pure_newtonian_ = false;
  int merges_ = 0;
};

/// h(t) = instantaneous + fluidity * t + sum_j (mass_j / rate_j)(1 - exp(-rate_j t)).
/// Mode weights are the masses of the retardation spectrum, so that
/// h'(0+) = fluidity + sum_j mass_j.
class ScalarCreep {
 public:
  ScalarCreep(double instantaneous, double fluidity, std::vector<ScalarMode> modes);

  double instantaneous() const { return instantaneous_; }
  double fluidity() const { return fluidity_; }
  const std::vector<ScalarMode>& modes() const { return modes_; }
  int merges() const { return merges_; }
  double max_rate() const { return modes_.empty() ? 0.0 : modes_.back().rate; }

  friend bool operator==(const ScalarCreep& a, const ScalarCreep& b) {
    return a.instantaneous_ == b.instantaneous_ && a.fluidity_ == b.fluidity_ && a.modes_ == b.modes_;
  }

 private:
  double instantaneous_;
  double fluidity_;
  std::vector<ScalarMode> modes_;
  int merges_ = 0;
};

/// R(t) = u(t) N + B + sum_k G_k exp(-r_k t) with N, B, G_k symmetric PSD.
class MatrixRelaxation {
 public:
  /// With `strict`, additionally requires N + B + sum G_k to be positive
  /// definite (no stress-free strain direction).
  MatrixRelaxation(Matrix6 newtonian, Matrix6 equilibrium, std::vector<MatrixMode> modes,
                   bool strict = false);

  const Matrix6& newtonian() const { return newtonian_; }
  const Matrix6& equilibrium() const { return equilibrium_; }
  const std::vector<MatrixMode>& modes() const { return modes_; }
  int merges() const { return merges_; }
  double max_rate() const { return modes_.empty() ? 0.0 : modes_.back().rate; }
  /// N + B + sum G_k positive definite.
  bool nondegenerate() const;

  friend bool operator==(const MatrixRelaxation& a, const MatrixRelaxation& b) {
    return a.newtonian_ == b.newtonian_ && a.equilibrium_ == b.equilibrium_ && a.modes_ == b.modes_;
  }

 private:
  Matrix6 newtonian_;
  Matrix6 equilibrium_;
  std::vector<MatrixMode> modes_;
  int merges_ = 0;
};

/// C(t) = A + t D + sum_j (H_j / s_j)(1 - exp(-s_j t)) with A, D, H_j PSD.
class MatrixCreep {
 public:
  /// With `strict`, additionally requires A + D + sum H_j to be positive
  /// definite (no strain-free stress direction).
  MatrixCreep(Matrix6 instantaneous, Matrix6 fluidity, std::vector<MatrixMode> modes,
              bool strict = false);

  const Matrix6& instantaneous() const { return instantaneous_; }
  const Matrix6& fluidity() const { return fluidity_; }
  const std::vector<MatrixMode>& modes() const { return modes_; }
  int merges() const { return merges_; }
  double max_rate() const { return modes_.empty() ? 0.0 : modes_.back().rate; }
  bool nondegenerate() const;

  friend bool operator==(const MatrixCreep& a, const MatrixCreep& b) {
    return a.instantaneous_ == b.instantaneous_ && a.fluidity_ == b.fluidity_ &&
           a.modes_ == b.modes_;
  }

 private:
  Matrix6 instantaneous_;
  Matrix6 fluidity_;
  std::vector<MatrixMode> modes_;
  int merges_ = 0;
};

using AnyKernel = std::variant<ScalarRelaxation, ScalarCreep, MatrixRelaxation, MatrixCreep>;

template <class W>
W zero_value() {
  if constexpr (std::is_same_v<W, double>) {
    return 0.0;
  } else {
    return W::Zero();
  }
}

/// Unvalidated coefficients exactly as supplied: `first` is the Newtonian
/// coefficient (relaxation) or instantaneous compliance (creep), `second` the
/// equilibrium modulus or fluidity.  Matrices are kept dense so that
/// asymmetric input can still be reported on.
template <class W>
struct KernelCoefficients {
  W first = zero_value<W>();
  W second = zero_value<W>();
  std::vector<std::pair<double, W>> modes;
};

struct KernelData {
  bool creep = false;
  std::variant<KernelCoefficients<double>, KernelCoefficients<Dense6>> coefficients;

  bool is_matrix() const { return coefficients.index() == 1; }
};

/// Validates and canonicalizes.  Matrices are symmetrized with mismatch
/// tolerance 1e-12.  Throws ValidationError.
AnyKernel to_kernel(const KernelData& data, bool strict = false);
KernelData to_data(const AnyKernel& kernel);

// -- evaluation -------------------------------------------------------------

/// Continuous part a + sum m_k exp(-r_k t); the Dirac coefficient is not
/// included.  Requires t > 0.
double eval_relaxation(const ScalarRelaxation& k, double t);
Matrix6 eval_relaxation(const MatrixRelaxation& k, double t);

/// Requires t >= 0.
double eval_creep(const ScalarCreep& k, double t);
Matrix6 eval_creep(const MatrixCreep& k, double t);
/// h'(t); requires t >= 0.
double eval_creep_rate(const ScalarCreep& k, double t);
Matrix6 eval_creep_rate(const MatrixCreep& k, double t);

/// p * Laplace transform of the full kernel (Dirac part included):
/// beta p + a + sum m_k p / (p + r_k).  Requires p > 0.
double laplace_times_p(const ScalarRelaxation& k, double p);
Matrix6 laplace_times_p(const MatrixRelaxation& k, double p);
/// p * Laplace transform of the creep function: a + b / p + sum nu_j / (p + s_j).
double laplace_times_p(const ScalarCreep& k, double p);
Matrix6 laplace_times_p(const MatrixCreep& k, double p);

// -- boundary values --------------------------------------------------------

struct Infinite {
  friend bool operator==(Infinite, Infinite) { return true; }
};

using LimitValue = std::variant<double, Matrix6, Infinite>;

inline bool is_infinite(const LimitValue& v) { return std::holds_alternative<Infinite>(v); }

struct LimitReport {
  LimitValue value_at_zero;
  LimitValue value_at_infinity;
  LimitValue derivative_at_zero;
  LimitValue derivative_at_infinity;
  /// Newtonian coefficient, present for relaxation kernels.
  std::optional<LimitValue> dirac;
};

/// f(0+) = a + sum m_k, f(inf) = a, f'(0+) = -sum m_k r_k, f'(inf) = 0.
LimitReport relaxation_limits(const ScalarRelaxation& k);
LimitReport relaxation_limits(const MatrixRelaxation& k);
/// h(0) = a, h'(0) = b + sum nu_j, h(inf) finite iff b = 0, h'(inf) = b.
LimitReport creep_limits(const ScalarCreep& k);
LimitReport creep_limits(const MatrixCreep& k);

std::string kind_name(const AnyKernel& k);

}  // namespace viscodual

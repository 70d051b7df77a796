#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "viscodual/kernel.hpp"

// Corpus-level drivers.  `serial` is the reference; `parallel` distributes
// items over OpenMP threads and must return identical results.
namespace viscodual {

struct DualizeOutcome {
  std::optional<AnyKernel> dual;
  /// what() of the exception if dualization failed.
  std::string error;
};

struct PairResidual {
  double convolution = 0.0;  ///< duality_residual on the pair's default time grid
  double laplace = 0.0;      ///< laplace_product_residual on 20 log-spaced p
};

namespace serial {
std::vector<DualizeOutcome> dualize_all(std::span<const AnyKernel> kernels);
/// Residuals of (kernels[i], duals[i]); a missing dual gives +inf.
std::vector<PairResidual> pair_residuals(std::span<const AnyKernel> kernels,
                                         std::span<const DualizeOutcome> duals);
/// (R * C)(t) at each t (scalar pairs only).
std::vector<double> convolution_grid(const ScalarRelaxation& r, const ScalarCreep& c,
                                     std::span<const double> times);
}  // namespace serial

namespace parallel {
std::vector<DualizeOutcome> dualize_all(std::span<const AnyKernel> kernels);
std::vector<PairResidual> pair_residuals(std::span<const AnyKernel> kernels,
                                         std::span<const DualizeOutcome> duals);
std::vector<double> convolution_grid(const ScalarRelaxation& r, const ScalarCreep& c,
                                     std::span<const double> times);
}  // namespace parallel

/// 20 log-spaced p on [1e-3, 1e3] times the pair's max rate.
std::vector<double> default_laplace_grid(double max_rate);

}  // namespace viscodual

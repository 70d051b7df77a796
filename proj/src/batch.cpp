#include "viscodual/batch.hpp"

#include <algorithm>
#include <limits>

#include "viscodual/duality.hpp"
#include "viscodual/verify.hpp"

namespace viscodual {
namespace {

DualizeOutcome dualize_one(const AnyKernel& k) {
  try {
    return {dualize(k), {}};
  } catch (const std::exception& e) {
    return {std::nullopt, e.what()};
  }
}

double rate_of(const AnyKernel& k) {
  return std::visit([](const auto& x) { return x.max_rate(); }, k);
}

template <class R, class C>
double laplace_residual_of(const AnyKernel& a, const AnyKernel& b, std::span<const double> ps) {
  const R* r = std::get_if<R>(&a);
  const C* c = std::get_if<C>(&b);
  if (!r) {
    r = std::get_if<R>(&b);
    c = std::get_if<C>(&a);
  }
  return laplace_product_residual(*r, *c, ps);
}

PairResidual residual_one(const AnyKernel& k, const DualizeOutcome& d) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (!d.dual) return {inf, inf};
  const double rate = std::max(rate_of(k), rate_of(*d.dual));
  const auto grid = default_time_grid(rate);
  const auto ps = default_laplace_grid(rate);
  PairResidual out;
  try {
    out.convolution = duality_residual(k, *d.dual, grid);
    const bool matrix = std::holds_alternative<MatrixRelaxation>(k) || std::holds_alternative<MatrixCreep>(k);
    out.laplace = matrix ? laplace_residual_of<MatrixRelaxation, MatrixCreep>(k, *d.dual, ps)
                         : laplace_residual_of<ScalarRelaxation, ScalarCreep>(k, *d.dual, ps);
  } catch (const std::exception&) {
    return {inf, inf};
  }
  return out;
}

}  // namespace

std::vector<double> default_laplace_grid(double max_rate) {
  const double rho = max_rate > 0.0 ? max_rate : 1.0;
  return geometric_grid(1e-3 * rho, 1e3 * rho, 20);
}

namespace serial {

std::vector<DualizeOutcome> dualize_all(std::span<const AnyKernel> kernels) {
  std::vector<DualizeOutcome> out;
  out.reserve(kernels.size());
  for (const auto& k : kernels) out.push_back(dualize_one(k));
  return out;
}

std::vector<PairResidual> pair_residuals(std::span<const AnyKernel> kernels,
                                         std::span<const DualizeOutcome> duals) {
  std::vector<PairResidual> out;
  out.reserve(kernels.size());
  for (std::size_t i = 0; i < kernels.size(); ++i) out.push_back(residual_one(kernels[i], duals[i]));
  return out;
}

std::vector<double> convolution_grid(const ScalarRelaxation& r, const ScalarCreep& c,
                                     std::span<const double> times) {
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(duality_convolution(r, c, t));
  return out;
}

}  // namespace serial

namespace parallel {

std::vector<DualizeOutcome> dualize_all(std::span<const AnyKernel> kernels) {
  std::vector<DualizeOutcome> out(kernels.size());
  const long n = static_cast<long>(kernels.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = dualize_one(kernels[static_cast<std::size_t>(i)]);
  return out;
}

std::vector<PairResidual> pair_residuals(std::span<const AnyKernel> kernels,
                                         std::span<const DualizeOutcome> duals) {
  std::vector<PairResidual> out(kernels.size());
  const long n = static_cast<long>(kernels.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    const auto j = static_cast<std::size_t>(i);
    out[j] = residual_one(kernels[j], duals[j]);
  }
  return out;
}

std::vector<double> convolution_grid(const ScalarRelaxation& r, const ScalarCreep& c,
                                     std::span<const double> times) {
  std::vector<double> out(times.size());
  const long n = static_cast<long>(times.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = duality_convolution(r, c, times[static_cast<std::size_t>(i)]);
  return out;
}

}  // namespace parallel
}  // namespace viscodual

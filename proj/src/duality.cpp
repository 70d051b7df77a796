#include "viscodual/duality.hpp"

#include <type_traits>

#include "viscodual/errors.hpp"

namespace viscodual {

ScalarCreep dualize_relaxation_to_creep(const ScalarRelaxation& k) {
  const RationalStieltjes s = invert_cbf(as_cbf(k));
  return ScalarCreep(s.constant, s.pole_at_zero_mass, s.modes);
}

ScalarRelaxation dualize_creep_to_relaxation(const ScalarCreep& k) {
  const RationalStieltjes s = invert_cbf(as_cbf(k));
  return ScalarRelaxation(s.constant, s.pole_at_zero_mass, s.modes);
}

MatrixCreep dualize_matrix_relaxation_to_creep(const MatrixRelaxation& k,
                                               ResidueDiagnostics* diagnostics) {
  if (!k.nondegenerate())
    throw ValidationError("relaxation kernel vanishes identically along some strain direction");
  const MatrixStieltjes s = invert_cbf(as_cbf(k), diagnostics);
  return MatrixCreep(s.constant, s.pole_at_zero, s.modes);
}

MatrixRelaxation dualize_matrix_creep_to_relaxation(const MatrixCreep& k,
                                                    ResidueDiagnostics* diagnostics) {
  if (!k.nondegenerate())
    throw ValidationError("creep function vanishes identically along some stress direction");
  const MatrixStieltjes s = invert_cbf(as_cbf(k), diagnostics);
  return MatrixRelaxation(s.constant, s.pole_at_zero, s.modes);
}

AnyKernel dualize(const AnyKernel& k) {
  return std::visit(
      [](const auto& kernel) -> AnyKernel {
        using T = std::decay_t<decltype(kernel)>;
        if constexpr (std::is_same_v<T, ScalarRelaxation>) {
          return dualize_relaxation_to_creep(kernel);
        } else if constexpr (std::is_same_v<T, ScalarCreep>) {
          return dualize_creep_to_relaxation(kernel);
        } else if constexpr (std::is_same_v<T, MatrixRelaxation>) {
          return dualize_matrix_relaxation_to_creep(kernel);
        } else {
          return dualize_matrix_creep_to_relaxation(kernel);
        }
      },
      k);
}

}  // namespace viscodual

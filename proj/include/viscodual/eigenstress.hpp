#pragma once

#include <vector>

#include "viscodual/kernel.hpp"

namespace viscodual {

/// One point of the shared relaxation spectrum.
struct SpectralPoint {
  double rate = 0.0;
  double mass = 0.0;
};

/// A fixed stress direction S_J together with its spectral coefficients
/// lambda_J(r_k) in [0, 1], one per spectral point.
struct EigenstressDirection {
  Vector6 direction;
  std::vector<double> lambda;
};

/// F(t) = B + sum_J f_J(t) S_J S_J^T with f_J(t) = sum_k lambda_J(r_k) m_k exp(-r_k t).
struct EigenstressBasis {
  std::vector<SpectralPoint> spectrum;
  std::vector<EigenstressDirection> directions;
};

/// Builds the relaxation kernel whose mode at r_k has weight
/// m_k * sum_J lambda_J(r_k) S_J S_J^T.  Throws ValidationError for a zero
/// direction, a coefficient outside [0, 1], a lambda list of the wrong length,
/// or more than six directions.
MatrixRelaxation assemble_eigenstress(const EigenstressBasis& basis, const Matrix6& equilibrium);

}  // namespace viscodual

#include "viscodual/eigenstress.hpp"

#include <cmath>

#include "viscodual/errors.hpp"

namespace viscodual {

MatrixRelaxation assemble_eigenstress(const EigenstressBasis& basis, const Matrix6& equilibrium) {
  if (basis.directions.size() > 6) throw ValidationError("at most six eigenstress directions");
  std::vector<MatrixMode> modes(basis.spectrum.size());
  for (std::size_t k = 0; k < basis.spectrum.size(); ++k) {
    const auto& point = basis.spectrum[k];
    if (!(point.mass >= 0.0) || !std::isfinite(point.mass))
      throw ValidationError("spectral mass must be non-negative");
    modes[k].rate = point.rate;
  }

  for (const auto& dir : basis.directions) {
    if (!dir.direction.allFinite() || dir.direction.squaredNorm() == 0.0)
      throw ValidationError("eigenstress direction must be nonzero");
    if (dir.lambda.size() != basis.spectrum.size())
      throw ValidationError("lambda list must have one entry per spectral point");
    const Matrix6 projector = Matrix6::outer(dir.direction);
    for (std::size_t k = 0; k < basis.spectrum.size(); ++k) {
      const double lambda = dir.lambda[k];
      if (!(lambda >= 0.0 && lambda <= 1.0))
        throw ValidationError("eigenstress coefficient must lie in [0, 1]");
      modes[k].weight += projector * (lambda * basis.spectrum[k].mass);
    }
  }
  // Equal rates collapse into one PSD mode during canonicalization.
  return MatrixRelaxation(Matrix6::zero(), equilibrium, std::move(modes));
}

}  // namespace viscodual

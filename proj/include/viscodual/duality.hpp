#pragma once

#include "viscodual/kernel.hpp"
#include "viscodual/rational.hpp"

namespace viscodual {

// Relaxation and creep kernels are dual when p R~(p) * p C~(p) = 1, i.e.
// (R * C)(t) = t.  With a discrete spectrum both sides are rational in p and
// the dual is obtained exactly in coefficient space:
//   p f~(p) is a complete Bernstein function, 1 / (p f~(p)) = p h~(p) is a
//   Stieltjes function whose poles and residues give the creep modes.
// Going back, p^2 h~(p) is again a complete Bernstein function and its
// reciprocal f~(p) is Stieltjes, so both directions share one inversion.

/// beta > 0  =>  h(0) = 0 and h'(0) = 1 / beta
/// beta = 0  =>  h(0) = 1 / f(0+)
/// f_inf > 0 =>  h(inf) = 1 / f_inf, otherwise h grows without bound.
ScalarCreep dualize_relaxation_to_creep(const ScalarRelaxation& k);

/// h(0) > 0  =>  beta = 0 and f(0+) = 1 / h(0)
/// h(0) = 0  =>  beta = 1 / h'(0)
ScalarRelaxation dualize_creep_to_relaxation(const ScalarCreep& k);

/// Requires N + B + sum G_k positive definite (ValidationError otherwise).
MatrixCreep dualize_matrix_relaxation_to_creep(const MatrixRelaxation& k,
                                               ResidueDiagnostics* diagnostics = nullptr);

/// Requires A + D + sum H_j positive definite, i.e. no nonzero stress leaves
/// the strain identically zero.
MatrixRelaxation dualize_matrix_creep_to_relaxation(const MatrixCreep& k,
                                                    ResidueDiagnostics* diagnostics = nullptr);

/// Dispatches on the kernel kind; relaxation maps to creep and back.
AnyKernel dualize(const AnyKernel& k);

}  // namespace viscodual

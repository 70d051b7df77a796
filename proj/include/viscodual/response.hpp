#pragma once

#include <span>
#include <utility>
#include <vector>

#include "viscodual/kernel.hpp"

namespace viscodual {

/// Piecewise-linear history through (times[i], values[i]); zero before 0 and
/// held at the last value after the last breakpoint.  times[0] must be 0 and
/// the times strictly increasing.  The value at 0 is the right limit, so a
/// nonzero values[0] is a jump from zero at t = 0.
template <class V>
struct History {
  std::vector<double> times;
  std::vector<V> values;

  /// Throws ValidationError if malformed.
  void validate() const;
  /// Right-continuous value; 0 for t < 0.
  V operator()(double t) const;
};

using StrainHistory = History<double>;
using TensorHistory = History<Vector6>;

/// On [start, next start): offset + slope (t - start) + sum c exp(-rate (t - start)).
template <class V>
struct SignalPiece {
  double start = 0.0;
  V offset{};
  V slope{};
  std::vector<std::pair<double, V>> decays;
};

/// Exact piecewise representation of a response, with Dirac masses
/// (time, weight) listed separately.  Zero before the first piece.
template <class V>
struct Signal {
  std::vector<SignalPiece<V>> pieces;
  std::vector<std::pair<double, V>> impulses;

  V operator()(double t) const;
};

template <class V>
struct ResponseSeries {
  std::vector<double> times;
  std::vector<V> values;
  /// Dirac masses in the response, as (time, weight).
  std::vector<std::pair<double, V>> impulses;
};

/// Stress sigma = R * d(epsilon) for a piecewise-linear strain history, in
/// closed form.  The Newtonian part contributes beta times the strain rate
/// (right derivative) and an impulse beta * epsilon(0+) at t = 0.
Signal<double> response_signal(const ScalarRelaxation& k, const StrainHistory& strain);
Signal<Vector6> response_signal(const MatrixRelaxation& k, const TensorHistory& strain);

/// response_signal sampled at `times`.
ResponseSeries<double> respond(const ScalarRelaxation& k, const StrainHistory& strain,
                               std::span<const double> times);
ResponseSeries<Vector6> respond(const MatrixRelaxation& k, const TensorHistory& strain,
                                std::span<const double> times);

/// Strain epsilon = C * d(sigma) for a stress given as a Signal (for example
/// the output of response_signal) or a piecewise-linear history.  Impulses in
/// the stress contribute C'(t - t_impulse) times their weight.
ResponseSeries<double> respond_creep(const ScalarCreep& c, const Signal<double>& stress,
                                     std::span<const double> times);
ResponseSeries<Vector6> respond_creep(const MatrixCreep& c, const Signal<Vector6>& stress,
                                      std::span<const double> times);
ResponseSeries<double> respond_creep(const ScalarCreep& c, const StrainHistory& stress,
                                     std::span<const double> times);
ResponseSeries<Vector6> respond_creep(const MatrixCreep& c, const TensorHistory& stress,
                                      std::span<const double> times);

/// A piecewise-linear history as a Signal with no decays.
template <class V>
Signal<V> to_signal(const History<V>& h);

}  // namespace viscodual

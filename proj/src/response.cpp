#include "viscodual/response.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "closed_form.hpp"
#include "viscodual/errors.hpp"

namespace viscodual {
namespace {

template <class V>
V zero_vec() {
  if constexpr (std::is_same_v<V, double>) {
    return 0.0;
  } else {
    return V::Zero();
  }
}

template <class V>
bool finite(const V& v) {
  if constexpr (std::is_same_v<V, double>) {
    return std::isfinite(v);
  } else {
    return v.allFinite();
  }
}

double as_w(double w) { return w; }
Dense6 as_w(const Matrix6& w) { return w.dense(); }

// Index of the last element of `starts` that is <= t, or -1.
template <class Seq, class Key>
long locate(const Seq& seq, double t, Key key) {
  auto it = std::upper_bound(seq.begin(), seq.end(), t,
                             [&](double x, const auto& e) { return x < key(e); });
  return static_cast<long>(it - seq.begin()) - 1;
}

// Shared body of the scalar and tensor stress responses.  W is the
// coefficient type, V the history value type.
template <class V, class K>
Signal<V> relaxation_signal(const K& k, const History<V>& h) {
  h.validate();
  const auto beta = as_w(k.newtonian());
  const auto a = as_w(k.equilibrium());
  const std::size_t n = h.times.size();

  // memory[m] = sum over past input of exp(-r (t_i - tau)) d(epsilon), at t_i.
  std::vector<V> memory(k.modes().size(), h.values[0]);
  Signal<V> out;
  if (n > 0) out.impulses.push_back({0.0, V(beta * h.values[0])});

  for (std::size_t i = 0; i < n; ++i) {
    const bool last = i + 1 == n;
    const double dt = last ? 0.0 : h.times[i + 1] - h.times[i];
    const V g = last ? zero_vec<V>() : V((h.values[i + 1] - h.values[i]) / dt);

    SignalPiece<V> piece;
    piece.start = h.times[i];
    piece.offset = V(beta * g + a * h.values[i]);
    piece.slope = V(a * g);
    for (std::size_t j = 0; j < k.modes().size(); ++j) {
      const auto& mode = k.modes()[j];
      const auto w = as_w(mode.weight);
      piece.offset += V(w * g) / mode.rate;
      piece.decays.push_back({mode.rate, V(w * (memory[j] - g / mode.rate))});
      if (!last) memory[j] = std::exp(-mode.rate * dt) * memory[j] + detail::phi1(mode.rate, dt) * g;
    }
    out.pieces.push_back(std::move(piece));
  }
  return out;
}

// epsilon(t) = C(0) sigma(t) + int_0^t C'(t - tau) sigma(tau) dtau + impulse terms,
// with C'(x) = b + sum nu exp(-s x).
template <class V, class K>
V creep_value(const K& c, const Signal<V>& sig, double t) {
  if (sig.pieces.empty() || t < sig.pieces.front().start) {
    V acc = zero_vec<V>();
    for (const auto& [time, weight] : sig.impulses)
      if (time <= t) acc += V(as_w(eval_creep_rate(c, t - time)) * weight);
    return acc;
  }
  const auto a = as_w(c.instantaneous());
  const auto b = as_w(c.fluidity());
  V acc = V(a * sig(t));
  for (std::size_t i = 0; i < sig.pieces.size(); ++i) {
    const auto& p = sig.pieces[i];
    if (p.start >= t) break;
    const double end = i + 1 < sig.pieces.size() ? std::min(t, sig.pieces[i + 1].start) : t;
    const double len = end - p.start;
    const double gap = t - end;

    V part = V(p.offset * len + p.slope * (0.5 * len * len));
    for (const auto& [rate, coef] : p.decays) part += detail::phi1(rate, len) * coef;
    acc += V(b * part);

    for (const auto& m : c.modes()) {
      const double s = m.rate;
      V inner = V(detail::phi1(s, len) * p.offset + detail::phi2(s, len) * p.slope);
      for (const auto& [rate, coef] : p.decays) inner += detail::exp_diff(s, rate, len) * coef;
      acc += V(as_w(m.weight) * inner) * std::exp(-s * gap);
    }
  }
  for (const auto& [time, weight] : sig.impulses)
    if (time <= t) acc += V(as_w(eval_creep_rate(c, t - time)) * weight);
  return acc;
}

template <class V>
ResponseSeries<V> sample_signal(const Signal<V>& sig, std::span<const double> times) {
  ResponseSeries<V> out;
  out.times.assign(times.begin(), times.end());
  for (double t : times) out.values.push_back(sig(t));
  out.impulses = sig.impulses;
  return out;
}

template <class V, class K>
ResponseSeries<V> sample_creep(const K& c, const Signal<V>& sig, std::span<const double> times) {
  ResponseSeries<V> out;
  out.times.assign(times.begin(), times.end());
  for (double t : times) out.values.push_back(creep_value(c, sig, t));
  return out;
}

}  // namespace

template <class V>
void History<V>::validate() const {
  if (times.empty()) throw ValidationError("history has no breakpoints");
  if (times.size() != values.size())
    throw ValidationError("history times and values differ in length");
  if (times[0] != 0.0) throw ValidationError("history must start at t = 0");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i])) throw ValidationError("history time must be finite");
    if (!finite(values[i])) throw ValidationError("history value must be finite");
    if (i > 0 && !(times[i] > times[i - 1]))
      throw ValidationError("history times must be strictly increasing (at index " +
                            std::to_string(i) + ")");
  }
}

template <class V>
V History<V>::operator()(double t) const {
  const long i = locate(times, t, [](double x) { return x; });
  if (i < 0) return zero_vec<V>();
  const auto k = static_cast<std::size_t>(i);
  if (k + 1 == times.size()) return values[k];
  const double u = (t - times[k]) / (times[k + 1] - times[k]);
  return V(values[k] + u * (values[k + 1] - values[k]));
}

template <class V>
V Signal<V>::operator()(double t) const {
  const long i = locate(pieces, t, [](const SignalPiece<V>& p) { return p.start; });
  if (i < 0) return zero_vec<V>();
  const auto& p = pieces[static_cast<std::size_t>(i)];
  const double x = t - p.start;
  V v = V(p.offset + x * p.slope);
  for (const auto& [rate, coef] : p.decays) v += std::exp(-rate * x) * coef;
  return v;
}

template <class V>
Signal<V> to_signal(const History<V>& h) {
  h.validate();
  Signal<V> out;
  for (std::size_t i = 0; i < h.times.size(); ++i) {
    SignalPiece<V> p;
    p.start = h.times[i];
    p.offset = h.values[i];
    p.slope = i + 1 < h.times.size()
                  ? V((h.values[i + 1] - h.values[i]) / (h.times[i + 1] - h.times[i]))
                  : zero_vec<V>();
    out.pieces.push_back(std::move(p));
  }
  return out;
}

template struct History<double>;
template struct History<Vector6>;
template struct Signal<double>;
template struct Signal<Vector6>;
template Signal<double> to_signal(const History<double>&);
template Signal<Vector6> to_signal(const History<Vector6>&);

Signal<double> response_signal(const ScalarRelaxation& k, const StrainHistory& strain) {
  return relaxation_signal(k, strain);
}

Signal<Vector6> response_signal(const MatrixRelaxation& k, const TensorHistory& strain) {
  return relaxation_signal(k, strain);
}

ResponseSeries<double> respond(const ScalarRelaxation& k, const StrainHistory& strain,
                               std::span<const double> times) {
  return sample_signal(response_signal(k, strain), times);
}

ResponseSeries<Vector6> respond(const MatrixRelaxation& k, const TensorHistory& strain,
                                std::span<const double> times) {
  return sample_signal(response_signal(k, strain), times);
}

ResponseSeries<double> respond_creep(const ScalarCreep& c, const Signal<double>& stress,
                                     std::span<const double> times) {
  return sample_creep(c, stress, times);
}

ResponseSeries<Vector6> respond_creep(const MatrixCreep& c, const Signal<Vector6>& stress,
                                      std::span<const double> times) {
  return sample_creep(c, stress, times);
}

ResponseSeries<double> respond_creep(const ScalarCreep& c, const StrainHistory& stress,
                                     std::span<const double> times) {
  return sample_creep(c, to_signal(stress), times);
}

ResponseSeries<Vector6> respond_creep(const MatrixCreep& c, const TensorHistory& stress,
                                      std::span<const double> times) {
  return sample_creep(c, to_signal(stress), times);
}

}  // namespace viscodual

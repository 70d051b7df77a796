#include "viscodual/rational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "viscodual/errors.hpp"

namespace viscodual {

RealPolynomial::RealPolynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

void RealPolynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
}

RealPolynomial RealPolynomial::from_negated_roots(std::span<const double> rates) {
  std::vector<double> c{1.0};
  for (double r : rates) {
    std::vector<double> next(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i] += r * c[i];
      next[i + 1] += c[i];
    }
    c = std::move(next);
  }
  return RealPolynomial(std::move(c));
}

double RealPolynomial::operator()(double p) const {
  double v = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) v = v * p + *it;
  return v;
}

RealPolynomial RealPolynomial::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<double> d(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = static_cast<double>(i) * coeffs_[i];
  return RealPolynomial(std::move(d));
}

RealPolynomial& RealPolynomial::operator+=(const RealPolynomial& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), 0.0);
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  trim();
  return *this;
}

RealPolynomial& RealPolynomial::operator*=(double s) {
  for (double& c : coeffs_) c *= s;
  trim();
  return *this;
}

RealPolynomial operator*(const RealPolynomial& a, const RealPolynomial& b) {
  if (a.coeffs_.empty() || b.coeffs_.empty()) return {};
  std::vector<double> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return RealPolynomial(std::move(c));
}

double RationalCbf::operator()(double p) const {
  double v = linear * p + constant;
  for (const auto& m : modes) v += m.weight * p / (p + m.rate);
  return v;
}

double RationalCbf::derivative(double p) const {
  double d = linear;
  for (const auto& m : modes) {
    const double x = p + m.rate;
    d += m.weight * m.rate / (x * x);
  }
  return d;
}

double RationalStieltjes::operator()(double p) const {
  double v = constant + pole_at_zero_mass / p;
  for (const auto& m : modes) v += m.weight / (p + m.rate);
  return v;
}

RationalCbf as_cbf(const ScalarRelaxation& k) {
  return RationalCbf{k.newtonian(), k.equilibrium(), k.modes()};
}

RationalCbf as_cbf(const ScalarCreep& k) {
  return RationalCbf{k.instantaneous(), k.fluidity(), k.modes()};
}

CbfPolynomials cbf_as_rational(const RationalCbf& q) {
  std::vector<double> rates;
  rates.reserve(q.modes.size());
  for (const auto& m : q.modes) rates.push_back(m.rate);
  RealPolynomial den = RealPolynomial::from_negated_roots(rates);

  RealPolynomial num = RealPolynomial({q.constant, q.linear}) * den;
  for (std::size_t k = 0; k < q.modes.size(); ++k) {
    std::vector<double> others;
    for (std::size_t j = 0; j < rates.size(); ++j)
      if (j != k) others.push_back(rates[j]);
    num += RealPolynomial({0.0, q.modes[k].weight}) * RealPolynomial::from_negated_roots(others);
  }
  return {num, den};
}

CbfPolynomials cbf_as_rational(const ScalarRelaxation& k) { return cbf_as_rational(as_cbf(k)); }

namespace {

// Q(-s) is strictly decreasing in s between consecutive poles; it runs from
// +inf (or Q(0) = constant at s = 0) down to -inf (or -inf as s -> inf when
// linear > 0).  Bisection keeps g(lo) > 0 >= g(hi).
double bracketed_root(const RationalCbf& q, double lo, double hi) {
  auto g = [&](double s) { return q(-s); };
  for (int it = 0; it < 400 && hi - lo > 1e-14 * hi; ++it) {
    const double mid = (lo > 0.0 && hi / lo > 4.0) ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
    const double v = g(mid);
    if (!std::isfinite(v)) throw NumericError("non-finite value inside root bracket");
    if (v > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double s = 0.5 * (lo + hi);
  const double slope = -q.derivative(-s);
  if (slope < 0.0) {
    const double polished = s - g(s) / slope;
    if (polished > lo && polished < hi) s = polished;
  }
  return s;
}

}  // namespace

std::vector<double> interlaced_roots(const RationalCbf& q) {
  std::vector<double> roots;
  const auto& modes = q.modes;
  const std::size_t n = modes.size();

  if (q.constant > 0.0) {
    if (n > 0) {
      roots.push_back(bracketed_root(q, 0.0, modes.front().rate));
    } else if (q.linear > 0.0) {
      roots.push_back(q.constant / q.linear);
      return roots;
    }
  }
  for (std::size_t k = 0; k + 1 < n; ++k)
    roots.push_back(bracketed_root(q, modes[k].rate, modes[k + 1].rate));

  if (q.linear > 0.0 && n > 0) {
    const double lo = modes.back().rate;
    double hi = 2.0 * lo;
    int grow = 0;
    while (q(-hi) > 0.0) {
      hi *= 2.0;
      if (++grow > 2000 || !std::isfinite(hi))
        throw NumericError("no sign change above the largest rate");
    }
    roots.push_back(bracketed_root(q, lo, hi));
  }

  const long expected = static_cast<long>(n) - (q.constant == 0.0 ? 1 : 0) + (q.linear > 0.0 ? 1 : 0);
  if (static_cast<long>(roots.size()) != std::max(expected, 0L)) {
    throw NumericError("root count " + std::to_string(roots.size()) + " differs from " +
                       std::to_string(expected));
  }
  return roots;
}

RationalStieltjes stieltjes_partial_fractions(const RationalCbf& q, std::span<const double> roots) {
  RationalStieltjes s;
  double total = q.constant;
  double low_freq = q.linear;
  for (const auto& m : q.modes) {
    total += m.weight;
    low_freq += m.weight / m.rate;
  }
  s.constant = q.linear > 0.0 ? 0.0 : 1.0 / total;
  s.pole_at_zero_mass = q.constant == 0.0 ? 1.0 / low_freq : 0.0;

  std::vector<double> masses;
  masses.reserve(roots.size());
  double scale = 0.0;
  for (double root : roots) {
    double magnitude = std::abs(q.linear * root) + std::abs(q.constant);
    for (const auto& m : q.modes) magnitude += std::abs(m.weight * root / (m.rate - root));
    if (!(std::abs(q(-root)) <= 1e-8 * magnitude))
      throw NumericError("value " + std::to_string(root) + " is not a zero of the kernel transform");
    masses.push_back(1.0 / q.derivative(-root));
    scale = std::max(scale, std::abs(masses.back()));
  }
  for (std::size_t j = 0; j < roots.size(); ++j) {
    if (!(masses[j] >= -1e-12 * scale))
      throw NumericError("negative residue at pole " + std::to_string(roots[j]));
    if (masses[j] > 0.0) s.modes.push_back({roots[j], masses[j]});
  }
  return s;
}

RationalStieltjes invert_cbf(const RationalCbf& q) {
  const auto roots = interlaced_roots(q);
  return stieltjes_partial_fractions(q, roots);
}

}  // namespace viscodual

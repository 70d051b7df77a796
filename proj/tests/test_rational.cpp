#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "viscodual/errors.hpp"
#include "viscodual/rational.hpp"

using namespace viscodual;
using doctest::Approx;

namespace {
const ScalarRelaxation maxwell(0.0, 0.0, {{1.0, 1.0}});
const ScalarRelaxation sls(0.0, 1.0, {{1.0, 1.0}});
const ScalarRelaxation two_mode(0.0, 0.0, {{1.0, 1.0}, {3.0, 1.0}});

std::vector<double> v(std::initializer_list<double> x) { return x; }
}  // namespace

TEST_CASE("numerator and denominator of p f~(p)") {
  // hand expansions
  auto m = cbf_as_rational(maxwell);
  CHECK(m.numerator.coeffs() == v({0.0, 1.0}));
  CHECK(m.denominator.coeffs() == v({1.0, 1.0}));
  auto s = cbf_as_rational(sls);
  CHECK(s.numerator.coeffs() == v({1.0, 2.0}));
  CHECK(s.denominator.coeffs() == v({1.0, 1.0}));
  auto d = cbf_as_rational(ScalarRelaxation(1.0, 0.0, {{1.0, 1.0}}));
  CHECK(d.numerator.coeffs() == v({0.0, 2.0, 1.0}));
  CHECK(d.denominator.coeffs() == v({1.0, 1.0}));
  // N(0) = a prod r_k
  auto t = cbf_as_rational(ScalarRelaxation(0.0, 2.0, {{3.0, 1.0}, {5.0, 1.0}}));
  CHECK(t.numerator(0.0) == 30.0);
}

TEST_CASE("polynomial helpers") {
  const RealPolynomial p({1.0, 2.0, 3.0});
  CHECK(p(2.0) == 17.0);
  CHECK(p.derivative().coeffs() == v({2.0, 6.0}));
  CHECK((p * RealPolynomial({0.0, 1.0})).coeffs() == v({0.0, 1.0, 2.0, 3.0}));
  CHECK((p + RealPolynomial({0.0, 0.0, -3.0})).degree() == 1);
  CHECK(RealPolynomial().degree() == -1);
}

TEST_CASE("interlaced roots of the worked examples") {
  // N = p(2p + 4) for the two-mode fluid
  const auto r2 = interlaced_roots(as_cbf(two_mode));
  REQUIRE(r2.size() == 1);
  CHECK(r2[0] == Approx(2.0).epsilon(1e-14));
  const auto r1 = interlaced_roots(as_cbf(sls));
  REQUIRE(r1.size() == 1);
  CHECK(r1[0] == Approx(0.5).epsilon(1e-14));
  CHECK(interlaced_roots(as_cbf(maxwell)).empty());
}

TEST_CASE("partial fractions of the worked examples") {
  auto m = invert_cbf(as_cbf(maxwell));  // (p + 1)/p
  CHECK(m.constant == 1.0);
  CHECK(m.pole_at_zero_mass == 1.0);
  CHECK(m.modes.empty());

  auto s = invert_cbf(as_cbf(sls));  // (p + 1)/(2p + 1)
  CHECK(s.constant == 0.5);
  CHECK(s.pole_at_zero_mass == 0.0);
  REQUIRE(s.modes.size() == 1);
  CHECK(s.modes[0].rate == Approx(0.5).epsilon(1e-14));
  CHECK(s.modes[0].weight == Approx(0.25).epsilon(1e-14));

  auto f = invert_cbf(as_cbf(two_mode));  // (p+1)(p+3) / (2p(p+2))
  CHECK(f.constant == 0.5);
  CHECK(f.pole_at_zero_mass == Approx(0.75).epsilon(1e-14));
  REQUIRE(f.modes.size() == 1);
  CHECK(f.modes[0].rate == Approx(2.0).epsilon(1e-14));
  CHECK(f.modes[0].weight == Approx(0.25).epsilon(1e-14));
}

TEST_CASE("partial fractions reject a wrong root") {
  const std::vector<double> bad{0.7};
  CHECK_THROWS_AS(stieltjes_partial_fractions(as_cbf(sls), bad), NumericError);
}

namespace {

// Bracket index of x among the sorted poles (0 = below the first pole).
int slot(const std::vector<ScalarMode>& poles, double x) {
  int i = 0;
  while (i < static_cast<int>(poles.size()) && poles[static_cast<std::size_t>(i)].rate < x) ++i;
  return i;
}

}  // namespace

TEST_CASE("property: count law, interlacing and companion-matrix oracle") {
  support::Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const auto k = support::random_scalar_relaxation(rng);
    const auto roots = interlaced_roots(as_cbf(k));
    const long n = static_cast<long>(k.modes().size());
    const long expected = n - (k.equilibrium() == 0.0 ? 1 : 0) + (k.newtonian() > 0.0 ? 1 : 0);
    CHECK(static_cast<long>(roots.size()) == std::max(expected, 0L));

    // one root per gap; (0, r1) used iff a > 0, (rn, inf) iff beta > 0
    std::vector<int> slots;
    for (double s : roots) slots.push_back(slot(k.modes(), s));
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (i > 0) CHECK(slots[i] == slots[i - 1] + 1);
      for (const auto& m : k.modes()) CHECK(roots[i] != m.rate);
    }
    if (!roots.empty()) {
      CHECK((slots.front() == 0) == (k.equilibrium() > 0.0));
      CHECK((slots.back() == static_cast<int>(n)) == (k.newtonian() > 0.0));
    }

    const auto oracle = support::companion_root_oracle(k);
    REQUIRE(oracle.size() == roots.size());
    for (std::size_t i = 0; i < roots.size(); ++i) CHECK(std::abs(roots[i] - oracle[i]) <= 1e-9 * oracle[i]);
  }
}

TEST_CASE("property: residues are nonnegative and reconstruct D/N") {
  support::Rng rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    const auto k = support::random_scalar_relaxation(rng);
    const RationalCbf q = as_cbf(k);
    const RationalStieltjes s = invert_cbf(q);
    CHECK(s.constant >= 0.0);
    CHECK(s.pole_at_zero_mass >= 0.0);
    for (const auto& m : s.modes) CHECK(m.weight > 0.0);
    const auto poly = cbf_as_rational(q);
    const double rho = k.max_rate() > 0.0 ? k.max_rate() : 1.0;
    for (int i = 0; i < 20; ++i) {
      const double p = rho * 1e-3 * std::pow(1e6, i / 19.0);
      const double expected = poly.denominator(p) / poly.numerator(p);
      CHECK(std::abs(s(p) - expected) <= 1e-10 * std::abs(expected));
    }
  }
}

// -- matrix ------------------------------------------------------------------

namespace {

Matrix6 diag(double x) { return Matrix6::identity() * x; }

}  // namespace

TEST_CASE("matrix polynomial of the worked examples") {
  auto dash = matrix_cbf_as_polynomial(MatrixRelaxation(diag(1), Matrix6::zero(), {}));
  REQUIRE(dash.numerator.degree() == 1);
  CHECK(dash.numerator.coeffs()[0] == Matrix6::zero());
  CHECK(dash.numerator.coeffs()[1] == diag(1));
  CHECK(dash.denominator.coeffs() == v({1.0}));

  auto mx = matrix_cbf_as_polynomial(MatrixRelaxation(Matrix6::zero(), Matrix6::zero(), {{1.0, diag(1)}}));
  REQUIRE(mx.numerator.degree() == 1);
  CHECK(mx.numerator.coeffs()[1] == diag(1));
  CHECK(mx.numerator.coeffs()[0] == Matrix6::zero());
  CHECK(mx.denominator.coeffs() == v({1.0, 1.0}));

  auto s = matrix_cbf_as_polynomial(MatrixRelaxation(Matrix6::zero(), diag(1), {{1.0, diag(1)}}));
  CHECK(s.numerator.coeffs()[0] == diag(1));
  CHECK(s.numerator.coeffs()[1] == diag(2));
  CHECK(s.denominator.coeffs() == v({1.0, 1.0}));

  Vector6 e1 = Vector6::Unit(0);
  CHECK_THROWS_AS(matrix_cbf_as_polynomial(MatrixRelaxation(Matrix6::zero(), Matrix6::outer(e1), {})),
                  ValidationError);
}

TEST_CASE("pencil roots of the worked examples") {
  auto sls = as_cbf(MatrixRelaxation(Matrix6::zero(), diag(1), {{1.0, diag(1)}}));
  auto roots = matrix_pencil_roots(sls);
  REQUIRE(roots.size() == 1);
  CHECK(roots[0].rate == Approx(0.5).epsilon(1e-14));
  CHECK(roots[0].null_vectors.cols() == 6);

  auto dash = as_cbf(MatrixRelaxation(diag(1), Matrix6::zero(), {}));
  CHECK(matrix_pencil_roots(dash).empty());

  const Vector6 e1 = Vector6::Unit(0);
  auto rank1 = as_cbf(MatrixRelaxation(Matrix6::zero(), diag(1), {{1.0, Matrix6::outer(e1)}}));
  auto r1 = matrix_pencil_roots(rank1);
  REQUIRE(r1.size() == 1);
  CHECK(r1[0].rate == Approx(0.5).epsilon(1e-14));
  REQUIRE(r1[0].null_vectors.cols() == 1);
  CHECK(std::abs(std::abs(r1[0].null_vectors(0, 0)) - 1.0) < 1e-12);
}

TEST_CASE("matrix residues of the worked examples") {
  auto s = invert_cbf(as_cbf(MatrixRelaxation(Matrix6::zero(), diag(1), {{1.0, diag(1)}})));
  CHECK((s.constant - diag(0.5)).max_abs() < 1e-14);
  CHECK(s.pole_at_zero.max_abs() < 1e-14);
  REQUIRE(s.modes.size() == 1);
  CHECK(s.modes[0].rate == Approx(0.5));
  CHECK((s.modes[0].weight - diag(0.25)).max_abs() < 1e-14);

  auto d = invert_cbf(as_cbf(MatrixRelaxation(diag(1), Matrix6::zero(), {})));
  CHECK(d.constant.max_abs() < 1e-14);
  CHECK((d.pole_at_zero - diag(1)).max_abs() < 1e-14);
  CHECK(d.modes.empty());

  // block case: component 1 is an SLS, the rest elastic with modulus 1
  const Vector6 e1 = Vector6::Unit(0);
  auto b = invert_cbf(as_cbf(MatrixRelaxation(Matrix6::zero(), diag(1), {{1.0, Matrix6::outer(e1)}})));
  CHECK((b.constant - Matrix6::diagonal({0.5, 1, 1, 1, 1, 1})).max_abs() < 1e-13);
  REQUIRE(b.modes.size() == 1);
  CHECK((b.modes[0].weight - Matrix6::outer(e1) * 0.25).max_abs() < 1e-13);
}

TEST_CASE("property: matrix residues are PSD before clipping and reconstruct the inverse") {
  support::Rng rng(13);
  for (int trial = 0; trial < 40; ++trial) {
    const auto k = support::random_matrix_relaxation(rng);
    const MatrixCbf q = as_cbf(k);
    ResidueDiagnostics diag;
    const MatrixStieltjes s = invert_cbf(q, &diag);
    CHECK(diag.min_relative_eigenvalue >= -1e-10);
    const double rho = k.max_rate() > 0.0 ? k.max_rate() : 1.0;
    for (int i = 0; i < 20; ++i) {
      const double p = rho * 1e-3 * std::pow(1e6, i / 19.0);
      const Dense6 inv = q(p).inverse();
      CHECK((s(p) - inv).norm() <= 1e-9 * inv.norm());
    }
  }
}

#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "viscodual/duality.hpp"
#include "viscodual/errors.hpp"
#include "viscodual/verify.hpp"

using namespace viscodual;

namespace {

KernelData scalar_data(bool creep, double first, double second, std::vector<std::pair<double, double>> modes) {
  KernelData d;
  d.creep = creep;
  d.coefficients = KernelCoefficients<double>{first, second, std::move(modes)};
  return d;
}

}  // namespace

TEST_CASE("check report bookkeeping") {
  CheckReport r;
  r.add("a", 0.5, 1.0);
  r.add("b", 2.0, 1.0);
  r.add("c", NAN, 1.0);
  CHECK(r.find("a")->pass);
  CHECK_FALSE(r.find("b")->pass);
  CHECK_FALSE(r.find("c")->pass);
  CHECK(r.failures() == 2);
  CHECK_THROWS(r.add("a", 0.0, 1.0));
}

TEST_CASE("well-formedness of valid kernels") {
  const CheckReport maxwell = check_wellformed(scalar_data(false, 0, 0, {{1, 1}}));
  CHECK(maxwell.all_passed());
  CHECK(maxwell.find("cm_order_3") != nullptr);
  const CheckReport creep = check_wellformed(scalar_data(true, 0.5, 0.75, {{2, 0.25}}));
  CHECK(creep.all_passed());
  CHECK(creep.find("bernstein_order_2") != nullptr);

  support::Rng rng(41);
  for (int i = 0; i < 50; ++i) {
    CHECK(check_wellformed(AnyKernel(support::random_scalar_relaxation(rng))).all_passed());
    CHECK(check_wellformed(AnyKernel(support::random_scalar_creep(rng))).all_passed());
  }
  for (int i = 0; i < 10; ++i) {
    const auto k = support::random_matrix_relaxation(rng);
    CHECK(check_wellformed(AnyKernel(k)).all_passed());
    CHECK(check_wellformed(AnyKernel(dualize_matrix_relaxation_to_creep(k))).all_passed());
  }
}

TEST_CASE("negative weight fails the structural and sampled checks") {
  const CheckReport r = check_wellformed(scalar_data(false, 0, 0, {{1, -0.5}}));
  CHECK_FALSE(r.find("weights_positive")->pass);
  CHECK_FALSE(r.find("cm_order_0")->pass);
  CHECK_FALSE(r.all_passed());
}

TEST_CASE("structural failures are reported, not thrown") {
  const CheckReport r = check_wellformed(scalar_data(false, 0, 1, {{2, 1}, {-1, 1}}));
  CHECK_FALSE(r.find("rates_positive")->pass);
  CHECK_FALSE(r.find("rates_sorted_distinct")->pass);
  CHECK_FALSE(check_wellformed(scalar_data(true, -1, 0, {})).find("coefficients_nonnegative")->pass);
  CHECK_FALSE(check_wellformed(scalar_data(false, 0, 0, {})).find("not_identically_zero")->pass);
}

TEST_CASE("non-monotone creep data fails the Bernstein check") {
  // h(t) = 1 + t - 2 t = 1 - t is decreasing: mode mass negative
  const CheckReport r = check_wellformed(scalar_data(true, 1, 0, {{1, -1}}));
  CHECK_FALSE(r.all_passed());
  CHECK_FALSE(r.find("bernstein_order_1")->pass);
}

TEST_CASE("matrix weight slightly outside the PSD cone fails") {
  // rank-one minus a small perturbation: eigenvalues (1, -1e-6)
  const Vector6 e1 = Vector6::Unit(0), e2 = Vector6::Unit(1);
  KernelData d;
  d.creep = false;
  KernelCoefficients<Dense6> c;
  c.second = Dense6::Identity();
  c.modes.push_back({1.0, e1 * e1.transpose() - 1e-6 * e2 * e2.transpose()});
  d.coefficients = c;
  const CheckReport r = check_wellformed(d);
  CHECK_FALSE(r.find("weights_psd")->pass);
  CHECK(r.find("symmetric")->pass);

  Dense6 asym = Dense6::Identity();
  asym(0, 1) = 1e-3;
  std::get<1>(d.coefficients).second = asym;
  CHECK_FALSE(check_wellformed(d).find("symmetric")->pass);
}

TEST_CASE("duality residual on closed-form pairs") {
  const ScalarRelaxation maxwell(0, 0, {{1, 1}});
  const ScalarCreep h(1, 1, {});
  // e^{-t} * (1 + t) = t
  for (double t : {1e-3, 0.5, 3.0, 40.0}) CHECK(std::abs(duality_convolution(maxwell, h, t) - t) <= 1e-14 * std::max(t, 1.0));
  const std::vector<double> grid{0.1, 1.0, 10.0};
  CHECK(duality_residual(maxwell, h, grid) <= 1e-14);
  CHECK(duality_residual(ScalarRelaxation(1, 0, {}), ScalarCreep(0, 1, {}), grid) == 0.0);
  const ScalarRelaxation sls(0, 1, {{1, 1}});
  CHECK(duality_residual(sls, dualize_relaxation_to_creep(sls), grid) <= 1e-12);
  // a wrong pair is detected
  CHECK(duality_residual(sls, h, grid) > 1e-2);
  CHECK_THROWS_AS(duality_residual(AnyKernel(sls), AnyKernel(sls), grid), ValidationError);
  CHECK(duality_residual(AnyKernel(h), AnyKernel(maxwell), grid) <= 1e-14);
}

TEST_CASE("near-equal rates use the degenerate branch without cancellation") {
  // f = e^{-t}, h with a mode at rate 1 (1 + 1e-10): compare with the exact equal-rate value
  const ScalarRelaxation r(0, 0, {{1.0, 1.0}});
  const ScalarCreep c1(0, 0, {{1.0, 1.0}});
  const ScalarCreep c2(0, 0, {{1.0 + 1e-10, 1.0}});
  for (double t : {0.5, 2.0, 10.0}) {
    const double a = duality_convolution(r, c1, t);
    const double b = duality_convolution(r, c2, t);
    CHECK(std::abs(a - b) <= 1e-9 * std::abs(a));
    // (e^{-t} * (1 - e^{-t}))(t) = 1 - e^{-t} - t e^{-t}
    CHECK(std::abs(a - (1.0 - std::exp(-t) - t * std::exp(-t))) <= 1e-15);
  }
}

TEST_CASE("quadrature oracle agrees with the closed-form convolution") {
  support::Rng rng(42);
  for (int trial = 0; trial < 5; ++trial) {
    const auto r = support::random_scalar_relaxation(rng, 4);
    const auto c = support::random_scalar_creep(rng, 4);
    const double rho = support::rate_scale(r, c);
    for (double t : geometric_grid(1e-2 / rho, 1e2 / rho, 9)) {
      const double closed = duality_convolution(r, c, t);
      CHECK(std::abs(closed - support::quadrature_convolution(r, c, t)) <= 1e-6 * std::abs(closed));
    }
  }
}

TEST_CASE("limit identities on the worked pairs") {
  const auto sls = check_limit_identities(ScalarRelaxation(0, 1, {{1, 1}}), ScalarCreep(0.5, 0, {{0.5, 0.25}}), 1e-8);
  CHECK(sls.all_passed());
  CHECK(sls.find("t1_h0_inverse_f0") != nullptr);
  CHECK(sls.find("t1_h_inf_inverse_f_inf") != nullptr);

  const auto dash = check_limit_identities(ScalarRelaxation(1, 0, {}), ScalarCreep(0, 1, {}), 1e-8);
  CHECK(dash.all_passed());
  CHECK(dash.find("t1_h0_vanishes") != nullptr);
  CHECK(dash.find("t1_newtonian_inverse_slope") != nullptr);

  const auto mx = check_limit_identities(ScalarRelaxation(0, 0, {{1, 1}}), ScalarCreep(1, 1, {}), 1e-8);
  CHECK(mx.all_passed());
  CHECK(mx.find("t1_h_unbounded") != nullptr);
  CHECK(mx.find("t2_f_inf_vanishes") != nullptr);

  // mismatched pair fails
  CHECK_FALSE(check_limit_identities(ScalarRelaxation(0, 1, {{1, 1}}), ScalarCreep(1, 1, {}), 1e-8).all_passed());
}

TEST_CASE("matrix limit identities select clauses by structure") {
  const Matrix6 i = Matrix6::identity();
  const auto dash = check_limit_identities(MatrixRelaxation(i, Matrix6::zero(), {}), MatrixCreep(Matrix6::zero(), i, {}), 1e-8);
  CHECK(dash.all_passed());
  CHECK(dash.find("t3_creep_slope_inverse_newtonian") != nullptr);
  CHECK(dash.find("t4_relaxation_vanishes_at_infinity") != nullptr);

  const auto sls = check_limit_identities(MatrixRelaxation(Matrix6::zero(), i, {{1.0, i}}),
                                          MatrixCreep(i * 0.5, Matrix6::zero(), {{0.5, i * 0.25}}), 1e-8);
  CHECK(sls.all_passed());
  CHECK(sls.find("t3_creep_at_origin_inverse") != nullptr);
  CHECK(sls.find("t3_creep_at_infinity_inverse") != nullptr);
  CHECK(sls.find("t4_relaxation_at_origin_inverse") != nullptr);
  CHECK(sls.find("t4_relaxation_at_infinity_inverse") != nullptr);

  const auto wrong = check_limit_identities(MatrixRelaxation(Matrix6::zero(), i, {{1.0, i}}),
                                            MatrixCreep(i * 0.4, Matrix6::zero(), {{0.5, i * 0.25}}), 1e-8);
  CHECK_FALSE(wrong.all_passed());
}

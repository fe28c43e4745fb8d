#include <cmath>
#include <functional>
#include <numbers>

#include <gtest/gtest.h>

#include "nlnt/errors.hpp"
#include "nlnt/limiters.hpp"
#include "nlnt/models.hpp"
#include "nlnt/nonlocal.hpp"
#include "nlnt/schemes.hpp"

namespace nlnt {
namespace {

constexpr double kPi = std::numbers::pi;

// Dense trapezoidal rule for int omega(z) f(x + z) dz over the support.
double dense_correlation(const KernelSpec& k, const std::function<double(double)>& f, double x,
                         int points = 4000) {
  const double h = (k.eta2 - k.eta1) / points;
  double acc = 0.5 * (k(k.eta1) * f(x + k.eta1) + k(k.eta2) * f(x + k.eta2));
  for (int i = 1; i < points; ++i) {
    const double z = k.eta1 + i * h;
    acc += k(z) * f(x + z);
  }
  return acc * h;
}

double max_abs_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

TEST(NonlocalField, ConstantAndZero) {
  const QuadratureWeights w = build_weights(make_kernel("constant", 0.2), 0.05);
  const Field c(40, 0.42), zero(40, 0.0);
  for (Boundary bc : {Boundary::Periodic, Boundary::ConstantExtension}) {
    for (double v : eval_nonlocal_field(c, zero, w, bc)) EXPECT_EQ(v, 0.42);
  }
  for (double v : eval_nonlocal_field(zero, zero, w, Boundary::Periodic)) EXPECT_EQ(v, 0.0);
}

TEST(NonlocalField, LengthMismatchIsContractError) {
  const QuadratureWeights w = build_weights(make_kernel("constant", 0.2), 0.05);
  EXPECT_THROW(eval_nonlocal_field(Field(40, 1.0), Field(39, 0.0), w, Boundary::Periodic),
               ContractError);
  EXPECT_THROW(eval_nonlocal_space_derivative(Field(40, 1.0), Field(41, 0.0),
                                              make_kernel("linear", 0.2), 0.05, Boundary::Periodic),
               ContractError);
}

TEST(NonlocalField, SmoothDataConvergesAtSecondOrder) {
  const auto u = [](double x) { return 0.5 + 0.3 * std::sin(2.0 * kPi * x); };
  for (const char* name : {"constant", "linear", "concave"}) {
    const KernelSpec k = make_kernel(name, 0.2);
    std::vector<double> err;
    for (int J : {40, 80, 160, 320}) {
      const Grid g(0.0, 1.0, J);
      const SystemState s = init_cell_averages([&](int, double x) { return u(x); }, 1, g);
      const Field slopes = minmod_slopes(s[0], g.dx(), Boundary::Periodic);
      const Field R = eval_nonlocal_field(s[0], slopes, build_weights(k, g.dx()), Boundary::Periodic);
      double e = 0.0;
      for (int j = 0; j < J; ++j) {
        e = std::max(e, std::abs(R[static_cast<std::size_t>(j)] - dense_correlation(k, u, g.center(j))));
      }
      err.push_back(e);
    }
    for (std::size_t i = 1; i < err.size(); ++i) {
      EXPECT_GE(std::log2(err[i - 1] / err[i]), 1.8) << name << " level " << i;
    }
  }
}

TEST(NonlocalTimeDerivative, ConstantInputs) {
  const QuadratureWeights w = build_weights(make_kernel("constant", 0.2), 0.05);
  for (double v : eval_nonlocal_time_derivative(Field(40, 0.0), w, Boundary::Periodic)) {
    EXPECT_EQ(v, 0.0);
  }
  for (double v : eval_nonlocal_time_derivative(Field(40, -1.5), w, Boundary::Periodic)) {
    EXPECT_EQ(v, -1.5);
  }
}

// R_t = -omega * dF/dx for the Arrhenius flux, against a dense quadrature of
// the exact derivative of the smooth profile.
TEST(NonlocalTimeDerivative, ArrheniusMatchesExactRateAtFirstOrder) {
  const double eta = 0.2;
  const KernelSpec k = make_kernel("constant", eta);
  const auto rho = [](double x) { return 0.5 + 0.3 * std::sin(2.0 * kPi * x); };
  const auto drho = [](double x) { return 0.6 * kPi * std::cos(2.0 * kPi * x); };
  const auto R = [&](double x) { return dense_correlation(k, rho, x, 400); };
  const auto dR = [&](double x) { return (rho(x + eta) - rho(x)) / eta; };
  const auto dFdx = [&](double x) {
    const double r = rho(x), e = std::exp(-R(x));
    return (1.0 - 2.0 * r) * drho(x) * e - r * (1.0 - r) * e * dR(x);
  };
  const ModelDef model = make_arrhenius(eta, "constant");
  std::vector<double> err;
  for (int J : {40, 80, 160, 320}) {
    const Grid g(0.0, 1.0, J);
    const SystemState s = init_cell_averages([&](int, double x) { return rho(x); }, 1, g);
    const Stepper stepper(model, g, Boundary::Periodic, parse_scheme("NT-v1"));
    StepTrace trace;
    (void)stepper.step(s, 1e-4, &trace);
    const NonlocalOperator op(model, g, Boundary::Periodic, false);
    const auto Rt = op.time_derivative({trace.rates, {}});
    double e = 0.0;
    for (int j = 0; j < J; ++j) {
      const double exact = -dense_correlation(k, dFdx, g.center(j), 400);
      e = std::max(e, std::abs(Rt[0][static_cast<std::size_t>(j)] - exact));
    }
    err.push_back(e);
  }
  EXPECT_LT(err.back(), 0.05);
  for (std::size_t i = 1; i < err.size(); ++i) {
    EXPECT_GE(std::log2(err[i - 1] / err[i]), 0.9) << "refinement " << i;
  }
}

TEST(NonlocalSpaceDerivative, ConstantStateVanishesAtSecondOrder) {
  const KernelSpec k = make_kernel("concave", 0.2);
  std::vector<double> err;
  for (int J : {40, 80, 160, 320}) {
    const Field u(static_cast<std::size_t>(J), 0.7), s(static_cast<std::size_t>(J), 0.0);
    const Field d = eval_nonlocal_space_derivative(u, s, k, 1.0 / J, Boundary::Periodic);
    err.push_back(max_abs_diff(d, Field(d.size(), 0.0)));
  }
  for (std::size_t i = 1; i < err.size(); ++i) {
    if (err[i] <= 1e-13) continue;  // exact up to rounding
    EXPECT_GE(std::log2(err[i - 1] / err[i]), 1.9) << "refinement " << i;
  }
  // Constant and linear kernels integrate omega' exactly.
  const Field u(40, 0.7), s(40, 0.0);
  for (double v : eval_nonlocal_space_derivative(u, s, make_kernel("linear", 0.2), 0.025,
                                                 Boundary::Periodic)) {
    EXPECT_NEAR(v, 0.0, 1e-13);
  }
}

TEST(NonlocalSpaceDerivative, MatchesCentralDifferenceOfR) {
  const KernelSpec k = make_kernel("linear", 0.2);
  std::vector<double> err;
  for (int J : {40, 80, 160, 320}) {
    const Grid g(0.0, 1.0, J);
    const SystemState st = init_cell_averages(
        [](int, double x) { return 0.5 + 0.3 * std::sin(2.0 * kPi * x); }, 1, g);
    const Field s = minmod_slopes(st[0], g.dx(), Boundary::Periodic);
    const Field R = eval_nonlocal_field(st[0], s, build_weights(k, g.dx()), Boundary::Periodic);
    const Field d = eval_nonlocal_space_derivative(st[0], s, k, g.dx(), Boundary::Periodic);
    double e = 0.0;
    for (long j = 0; j < J; ++j) {
      const double fd = (ghost_value(R, j + 1, Boundary::Periodic) -
                         ghost_value(R, j - 1, Boundary::Periodic)) / (2.0 * g.dx());
      e = std::max(e, std::abs(d[static_cast<std::size_t>(j)] - fd));
    }
    err.push_back(e);
  }
  for (std::size_t i = 1; i < err.size(); ++i) {
    EXPECT_GE(std::log2(err[i - 1] / err[i]), 1.5) << "refinement " << i;
  }
}

TEST(NonlocalSpaceDerivative, ZeroStateAndMissingDerivative) {
  const Field z(40, 0.0);
  for (double v :
       eval_nonlocal_space_derivative(z, z, make_kernel("linear", 0.2), 0.025, Boundary::Periodic)) {
    EXPECT_EQ(v, 0.0);
  }
  KernelSpec k = make_kernel("linear", 0.2);
  k.omega_prime = nullptr;
  EXPECT_THROW(eval_nonlocal_space_derivative(z, z, k, 0.025, Boundary::Periodic), ConfigError);
}

class OperatorMethod : public ::testing::TestWithParam<BandCorrelator::Method> {};

TEST_P(OperatorMethod, MatchesSingleBandReference) {
  const ModelDef model = make_keyfitz_kranzer(0.5);
  const Grid g(0.0, 4.0, 160);
  const SystemState st = init_cell_averages(
      [](int k, double x) { return (k == 0 ? 0.3 : 0.6) + 0.2 * std::sin(kPi * x / 2.0 + k); }, 2,
      g);
  const SlopeField sl = cell_slopes(st, g, Boundary::ZeroExtension);
  const NonlocalOperator op(model, g, Boundary::ZeroExtension, true, GetParam());
  const auto R = op.field({st.values, sl.slopes});
  const auto dR = op.space_derivative({st.values, sl.slopes});
  const auto Rt = op.time_derivative({st.values, {}});
  for (int l = 0; l < 2; ++l) {
    const auto& term = model.nonlocal[static_cast<std::size_t>(l)].terms.front();
    const auto& u = st[term.source];
    const auto& s = sl[term.source];
    const QuadratureWeights w = build_weights(term.kernel, g.dx());
    EXPECT_LT(max_abs_diff(R[static_cast<std::size_t>(l)],
                           eval_nonlocal_field(u, s, w, Boundary::ZeroExtension)), 1e-12);
    EXPECT_LT(max_abs_diff(Rt[static_cast<std::size_t>(l)],
                           eval_nonlocal_time_derivative(u, w, Boundary::ZeroExtension)), 1e-12);
    EXPECT_LT(max_abs_diff(dR[static_cast<std::size_t>(l)],
                           eval_nonlocal_space_derivative(u, s, term.kernel, g.dx(),
                                                          Boundary::ZeroExtension)), 1e-10);
  }
}

INSTANTIATE_TEST_SUITE_P(DirectAndFft, OperatorMethod,
                         ::testing::Values(BandCorrelator::Method::Direct,
                                           BandCorrelator::Method::Fft));

TEST(NonlocalOperator, WithoutDerivativeBandsRejectsSpaceDerivative) {
  const Grid g(0.0, 1.0, 40);
  const NonlocalOperator op(make_arrhenius(0.2), g, Boundary::Periodic, false);
  const std::vector<Field> v{Field(40, 0.5)};
  EXPECT_THROW(op.space_derivative({v, {}}), ContractError);
}

}  // namespace
}  // namespace nlnt

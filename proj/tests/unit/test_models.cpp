#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "nlnt/errors.hpp"
#include "nlnt/initial_data.hpp"
#include "nlnt/limiters.hpp"
#include "nlnt/kernels.hpp"
#include "nlnt/models.hpp"
#include "nlnt/nonlocal.hpp"
#include "nlnt/schemes.hpp"

namespace nlnt {
namespace {

std::vector<ModelDef> zoo() {
  std::vector<ModelDef> out;
  for (const auto& name : model_names()) out.push_back(make_model({name, 0.0, ""}));
  return out;
}

TEST(Models, RegistryAndDefaults) {
  EXPECT_EQ(model_names().size(), 5u);
  for (const ModelDef& m : zoo()) EXPECT_NO_THROW(m.validate()) << m.name;
  EXPECT_EQ(default_eta("garz"), 0.1);
  EXPECT_EQ(default_kernel("nonlocal-euler"), "symmetric-parabola");
  EXPECT_THROW(make_model({"burgers", 0.0, ""}), ConfigError);
  EXPECT_THROW(make_model({"keyfitz-kranzer", 0.5, "linear"}), KernelError);
  EXPECT_THROW(make_arrhenius(0.2, "symmetric-parabola"), KernelError);
  for (const auto& name : model_names()) {
    EXPECT_THROW(make_model({name, -1.0, ""}), ConfigError) << name;
  }
}

TEST(Models, DeclaredMinimumIsAZeroOfTheFlux) {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (const ModelDef& m : zoo()) {
    if (!m.rho_min) continue;
    std::vector<double> R(static_cast<std::size_t>(m.nonlocal_count()));
    for (int i = 0; i < 1000; ++i) {
      for (double& r : R) r = u(gen);
      for (int k = 0; k < m.species(); ++k) {
        ASSERT_LE(std::abs(m.flux(k, *m.rho_min, R)), 1e-12) << m.name;
      }
    }
  }
}

TEST(Models, ProductFormMatchesFluxAndGradient) {
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (const ModelDef& m : zoo()) {
    if (!m.product) continue;
    const ProductForm& p = *m.product;
    const std::size_t nl = static_cast<std::size_t>(m.nonlocal_count());
    std::vector<double> R(nl), grad(nl), Rp(nl), Rm(nl);
    for (int i = 0; i < 1000; ++i) {
      for (double& r : R) r = u(gen);
      const double rho = u(gen);
      for (int k = 0; k < m.species(); ++k) {
        ASSERT_NEAR(m.flux(k, rho, R), p.g(k, rho) * p.velocity(k, R), 1e-12) << m.name;
        p.velocity_gradient(k, R, grad);
        for (std::size_t l = 0; l < nl; ++l) {
          Rp = R;
          Rm = R;
          Rp[l] += 1e-5;
          Rm[l] -= 1e-5;
          const double fd = (p.velocity(k, Rp) - p.velocity(k, Rm)) / 2e-5;
          ASSERT_NEAR(grad[l], fd, 1e-6 * std::max(1.0, std::abs(fd))) << m.name << " k=" << k;
        }
      }
    }
  }
}

TEST(KeyfitzKranzer, Examples) {
  const ModelDef m = make_keyfitz_kranzer(0.5);
  EXPECT_EQ(m.species(), 2);
  EXPECT_EQ(m.nonlocal_count(), 2);
  EXPECT_FALSE(m.has_source());
  const std::vector<double> zero{0.0, 0.0}, R{0.3, 0.4};
  EXPECT_EQ(m.flux(0, 0.0, R), 0.0);
  EXPECT_EQ(m.product->velocity(0, zero), 1.0);
  EXPECT_NEAR(m.flux(1, 2.0, R), 2.0 * std::pow(1.0 - 0.25, 3), 1e-15);
  // Constant species convolve to themselves, up to the weight-sum defect of the C1 kernel.
  const Grid g(0.0, 4.0, 80);
  const double wsum = build_weights(make_kernel("kk-power52", 0.5), g.dx()).sum();
  SystemState s(2, 80);
  s[0].assign(80, 0.3);
  s[1].assign(80, 0.8);
  const NonlocalOperator op(m, g, Boundary::Periodic, false);
  const auto Rc = op.field({s.values, {}});
  for (std::size_t j = 0; j < 80; ++j) {
    EXPECT_NEAR(Rc[0][j], 0.3 * wsum, 1e-14);
    EXPECT_NEAR(Rc[1][j], 0.8 * wsum, 1e-14);
  }
}

TEST(Arrhenius, Examples) {
  const ModelDef m = make_arrhenius(0.2, "concave");
  for (double r : {-1.0, 0.0, 0.5, 3.0}) {
    const std::vector<double> R{r};
    EXPECT_EQ(m.flux(0, 0.0, R), 0.0);
    EXPECT_EQ(m.flux(0, 1.0, R), 0.0);
  }
  EXPECT_EQ(m.product->velocity(0, std::vector<double>{0.0}), 1.0);
  EXPECT_EQ(*m.rho_min, 0.0);
  EXPECT_EQ(*m.rho_max, 1.0);
  EXPECT_NEAR(m.nonlocal[0].terms[0].kernel(0.0), 3.0 / (2.0 * 0.2), 1e-12);
}

TEST(Multilane, SourceExamples) {
  const ModelDef m = make_multilane(0.5);
  std::vector<double> out(2);
  m.source(std::vector<double>{0.4, 0.7}, std::vector<double>{0.3, 0.3}, out);
  EXPECT_EQ(out[0], 0.0);
  EXPECT_EQ(out[1], 0.0);
  m.source(std::vector<double>{0.0, 0.0}, std::vector<double>{0.1, 0.8}, out);
  EXPECT_EQ(out[0], 0.0);
  EXPECT_EQ(out[1], 0.0);
  // Lane 1 is faster (dv = v(R2) - v(R1) < 0): mass moves to lane 1 at rate dv rho2 (1 - rho1).
  m.source(std::vector<double>{0.2, 0.6}, std::vector<double>{0.1, 0.8}, out);
  const double dv = (1.0 - 0.64) - (1.0 - 0.01);
  EXPECT_NEAR(out[1], dv * 0.6 * 0.8, 1e-15);
  EXPECT_NEAR(out[0], -out[1], 0.0);
}

TEST(Multilane, SourceIsAntisymmetric) {
  const ModelDef m = make_multilane(0.5);
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-0.5, 1.5);
  std::vector<double> rho(2), R(2), out(2);
  for (int i = 0; i < 10000; ++i) {
    for (double& v : rho) v = u(gen);
    for (double& v : R) v = u(gen);
    m.source(rho, R, out);
    ASSERT_EQ(out[0], -out[1]);
  }
}

TEST(NonlocalEuler, Examples) {
  const ModelDef m = make_nonlocal_euler(0.05);
  EXPECT_EQ(m.nonlocal_count(), 1);
  EXPECT_EQ(m.nonlocal[0].terms[0].source, 1);
  EXPECT_EQ(m.flux(0, 0.0, std::vector<double>{0.7}), 0.0);
  EXPECT_EQ(m.flux(1, 0.6, std::vector<double>{0.7}), 0.18);
  // u constant: R = (sum w) u, relaxation only through the weight-sum defect.
  const Grid g(-1.0, 1.0, 80);
  const double wsum = build_weights(make_kernel("symmetric-parabola", 0.05), g.dx()).sum();
  SystemState s(2, 80);
  s[0].assign(80, 0.5);
  s[1].assign(80, -0.3);
  const NonlocalOperator op(m, g, Boundary::Periodic, false);
  const auto R = op.field({s.values, {}});
  const auto S = source_values(m, s.values, R);
  for (std::size_t j = 0; j < 80; ++j) {
    EXPECT_NEAR(R[0][j], -0.3 * wsum, 1e-14);
    EXPECT_NEAR(S[1][j], 0.5 * (-0.3 * wsum + 0.3), 1e-14);
  }
}

TEST(NonlocalEuler, SmoothDataIsSubcritical) {
  const InitialData& d = find_initial_data("euler-smooth");
  const double h = 1e-6;
  for (int i = 0; i <= 200; ++i) {
    const double x = d.x_left + (d.x_right - d.x_left) * i / 200.0;
    const double du = (d.profile(1, x + h) - d.profile(1, x - h)) / (2.0 * h);
    const double expected = 0.2 - 0.2 * std::sin(std::numbers::pi * x);
    EXPECT_NEAR(du + d.profile(0, x), expected, 1e-6) << x;
    EXPECT_GE(du + d.profile(0, x), -1e-9) << x;
  }
}

TEST(Garz, MarkerExamples) {
  EXPECT_NEAR(7.0 / 400.0 / 0.05, 0.35, 1e-15);
  EXPECT_NEAR(garz_velocity(0.05, 0.35), 0.05, 1e-15);
  const ModelDef m = make_garz();
  SystemState s(2, 4);
  s[0] = {0.05, 0.05, 0.05, 0.05};
  s[1] = {7.0 / 400.0, 7.0 / 400.0, 1.0 / 25.0, 1.0 / 25.0};
  const OutputColumns cols = output_columns(m, s);
  ASSERT_EQ(cols.names, std::vector<std::string>{"w"});
  EXPECT_NEAR(cols.values[0][0], 0.35, 1e-15);
  EXPECT_NEAR(cols.values[0][3], 0.8, 1e-15);
  EXPECT_TRUE(output_columns(make_arrhenius(0.2), SystemState(1, 4, 0.1)).names.empty());
}

TEST(Garz, DerivedFieldValues) {
  const ModelDef m = make_garz();
  const Grid g(0.0, 1.0, 20);
  SystemState s(2, 20);
  for (int j = 0; j < 20; ++j) {
    s[0][static_cast<std::size_t>(j)] = 0.1 + 0.01 * j;
    s[1][static_cast<std::size_t>(j)] = 0.05 + 0.002 * j * j;
  }
  const DerivedFieldValues d = derived_field_evaluate(m, s, {}, g.dx(), Boundary::Periodic);
  for (std::size_t j = 0; j < 20; ++j) {
    EXPECT_NEAR(d.value[j], s[1][j] / s[0][j] - 6.0 * s[0][j], 1e-15);
  }
  EXPECT_TRUE(d.time_integrand.empty());
  EXPECT_EQ(d.slopes, minmod_slopes(d.value, g.dx(), Boundary::Periodic));
}

TEST(Garz, ConstantStateHasZeroIntegrandAndIsFixed) {
  const ModelDef m = make_garz();
  const Grid g(0.0, 1.0, 40);
  SystemState s(2, 40);
  s[0].assign(40, 0.3);
  s[1].assign(40, 0.3 * 0.7);
  const std::vector<Field> rates{Field(40, 0.0), Field(40, 0.0)};
  const DerivedFieldValues d = derived_field_evaluate(m, s, rates, g.dx(), Boundary::Periodic);
  for (double v : d.time_integrand) EXPECT_EQ(v, 0.0);
  for (double v : d.value) EXPECT_NEAR(v, 0.7 - 1.8, 1e-15);
  const SystemState next = nt_step(s, m, g, Boundary::Periodic, parse_scheme("NT-v1"), 1e-3);
  for (int k = 0; k < 2; ++k) {
    for (std::size_t j = 0; j < 40; ++j) EXPECT_NEAR(next[k][j], s[k][j], 1e-15);
  }
}

TEST(Garz, IntegrandIsChainRule) {
  const ModelDef m = make_garz();
  const Grid g(0.0, 1.0, 8);
  SystemState s(2, 8);
  s[0].assign(8, 0.2);
  s[1].assign(8, 0.1);
  const std::vector<Field> rates{Field(8, 0.5), Field(8, -0.25)};
  const DerivedFieldValues d = derived_field_evaluate(m, s, rates, g.dx(), Boundary::Periodic);
  // du/drho = -6 - q/rho^2 = -8.5, du/dq = 1/rho = 5
  for (double v : d.time_integrand) EXPECT_NEAR(v, 0.5 * -8.5 + -0.25 * 5.0, 1e-13);
}

TEST(Garz, DerivedConvolutionConvergesAtSecondOrder) {
  const ModelDef m = make_garz();
  const KernelSpec& k = m.nonlocal[0].terms[0].kernel;
  const double pi = std::numbers::pi;
  const auto rho = [&](double x) { return 0.4 + 0.1 * std::sin(2.0 * pi * x); };
  const auto q = [&](double x) { return rho(x) * (0.9 + 0.05 * std::cos(2.0 * pi * x)); };
  const auto v = [&](double x) { return q(x) / rho(x) - 6.0 * rho(x); };
  std::vector<double> err;
  for (int J : {40, 80, 160, 320}) {
    const Grid g(0.0, 1.0, J);
    const SystemState s =
        init_cell_averages([&](int sp, double x) { return sp == 0 ? rho(x) : q(x); }, 2, g);
    const Stepper st(m, g, Boundary::Periodic, parse_scheme("NT-v1"));
    const auto R = st.nonlocal_field(s);
    double e = 0.0;
    for (int j = 0; j < J; ++j) {
      const int n = 4000;
      const double h = k.eta2 / n;
      double acc = 0.5 * (k(0.0) * v(g.center(j)) + k(k.eta2) * v(g.center(j) + k.eta2));
      for (int i = 1; i < n; ++i) acc += k(i * h) * v(g.center(j) + i * h);
      e = std::max(e, std::abs(R[0][static_cast<std::size_t>(j)] - acc * h));
    }
    err.push_back(e);
  }
  for (std::size_t i = 1; i < err.size(); ++i) {
    EXPECT_GE(std::log2(err[i - 1] / err[i]), 1.8) << "refinement " << i;
  }
}

TEST(Lipschitz, SampledBoundsOnSimpleBoxes) {
  // Arrhenius on [0,1]: |dF/drho| = |1 - 2 rho| e^{-R} <= 1, |dF/dR| <= 1/4.
  const ModelDef a = make_arrhenius(0.2);
  const StateBox box{{0.0}, {1.0}};
  EXPECT_NEAR(flux_lipschitz(a, box), 1.0, 0.05);
  EXPECT_EQ(source_lipschitz(a, box), 0.0);
  const StateBox rbox = nonlocal_box(a, box);
  EXPECT_EQ(rbox.lo, std::vector<double>{0.0});
  EXPECT_EQ(rbox.hi, std::vector<double>{1.0});
  EXPECT_GT(source_lipschitz(make_multilane(0.5), StateBox{{0.0, 0.0}, {1.0, 1.0}}), 0.0);
  EXPECT_NEAR(local_flux_sensitivity(a, 0, 0.0, std::vector<double>{0.0}), 1.0, 1e-6);
}

TEST(ModelDef, StructuralValidation) {
  ModelDef m;
  m.name = "broken";
  EXPECT_THROW(m.validate(), ModelError);
  m.species_names = {"a"};
  EXPECT_THROW(m.validate(), ModelError);
  m.flux = [](int, double r, std::span<const double>) { return r; };
  EXPECT_NO_THROW(m.validate());
  NonlocalTerm t;
  t.source = 3;
  t.kernel = make_kernel("constant", 0.1);
  m.nonlocal = {NonlocalComponent{{t}}};
  EXPECT_THROW(m.validate(), ModelError);
  m.nonlocal[0].terms[0].source = NonlocalTerm::kDerivedSource;
  EXPECT_THROW(m.validate(), ModelError);
}

}  // namespace
}  // namespace nlnt

#include <cmath>

#include <gtest/gtest.h>

#include "nlnt/errors.hpp"
#include "nlnt/kernels.hpp"

namespace nlnt {
namespace {

// Beta(7/2, 7/2) = Gamma(7/2)^2 / Gamma(7), cross-checked by mpmath quadrature
// (tests/oracles/hand_step.py).
constexpr double kKkRawIntegral = 0.015339807878856412;
constexpr double kKkScale = 65.18986469044033;

TEST(Kernels, KkRawIntegralIsBetaFunction) {
  KernelSpec raw;
  raw.name = "raw";
  raw.omega = [](double x) { return std::pow(-x * (1.0 + x), 2.5); };
  raw.eta1 = -1.0;
  raw.eta2 = 0.0;
  EXPECT_NEAR(kernel_integral(raw), kKkRawIntegral, 1e-14);
  EXPECT_NEAR(std::tgamma(3.5) * std::tgamma(3.5) / std::tgamma(7.0), kKkRawIntegral, 1e-16);
}

TEST(Kernels, KkKernelIsNormalizedWithScaleL) {
  const KernelSpec k = make_kernel("kk-power52", 1.0);
  EXPECT_NEAR(kernel_integral(k), 1.0, 1e-12);
  EXPECT_NEAR(k(-0.5), kKkScale * std::pow(0.25, 2.5), 1e-10);
  EXPECT_EQ(k.eta1, -1.0);
  EXPECT_EQ(k.eta2, 0.0);
}

TEST(Kernels, BuiltinsAreUnitAndAnalytic) {
  for (const auto& name : kernel_names()) {
    for (double eta : {0.1, 0.5, 1.0}) {
      const KernelSpec k = make_kernel(name, eta);
      EXPECT_NEAR(kernel_integral(k), 1.0, 1e-12) << name << " eta=" << eta;
      ASSERT_TRUE(k.has_derivative());
      // omega' against central differences at interior points
      for (double t : {0.2, 0.5, 0.7}) {
        const double x = k.eta1 + t * (k.eta2 - k.eta1);
        const double h = 1e-6 * eta;
        const double fd = (k(x + h) - k(x - h)) / (2.0 * h);
        EXPECT_NEAR(k.omega_prime(x), fd, 1e-5 * (1.0 + std::abs(fd))) << name << " x=" << x;
      }
    }
  }
}

TEST(Kernels, NormalizingUnitKernelsChangesNothing) {
  const KernelSpec c = make_kernel("constant", 0.2);
  const KernelSpec nc = normalize_kernel(c);
  EXPECT_NEAR(nc(0.1), 5.0, 1e-12);
  const double eta = 0.3;
  const KernelSpec p = make_kernel("symmetric-parabola", eta);
  const KernelSpec np = normalize_kernel(p);
  for (double x : {-0.2, 0.0, 0.25}) {
    EXPECT_NEAR(np(x), 3.0 * (eta * eta - x * x) / (4.0 * eta * eta * eta), 1e-12);
  }
}

TEST(Kernels, ConcaveValueAtZero) {
  const double eta = 0.2;
  EXPECT_NEAR(make_kernel("concave", eta)(0.0), 3.0 / (2.0 * eta), 1e-12);
}

TEST(Kernels, BadDefinitionsAreKernelErrors) {
  KernelSpec zero;
  zero.name = "zero";
  zero.omega = [](double) { return 0.0; };
  zero.eta2 = 1.0;
  EXPECT_THROW(normalize_kernel(zero), KernelError);
  KernelSpec negative = zero;
  negative.omega = [](double) { return -1.0; };
  EXPECT_THROW(normalize_kernel(negative), KernelError);
  KernelSpec off = zero;
  off.omega = [](double) { return 1.0; };
  off.eta1 = 0.1;
  off.eta2 = 0.5;
  EXPECT_THROW(off.validate(), KernelError);
  EXPECT_THROW(make_kernel("gaussian", 0.1), KernelError);
  EXPECT_THROW(make_kernel("constant", 0.0), KernelError);
  // KernelError is a configuration error.
  EXPECT_THROW(make_kernel("constant", -1.0), ConfigError);
}

TEST(Weights, ConstantKernelHandEvaluation) {
  const QuadratureWeights w = build_weights(make_kernel("constant", 0.2), 0.1);
  EXPECT_EQ(w.n1, 0);
  EXPECT_EQ(w.n2, 2);
  EXPECT_DOUBLE_EQ(w.left_weight, 0.25);
  ASSERT_EQ(w.interior.size(), 1u);
  EXPECT_DOUBLE_EQ(w.interior[0], 0.5);
  EXPECT_DOUBLE_EQ(w.right_weight, 0.25);
  EXPECT_EQ(w.sum(), 1.0);
  EXPECT_EQ(w.taps(), (std::vector<double>{0.25, 0.5, 0.25}));
  EXPECT_EQ(w.min_offset(), 0);
  EXPECT_EQ(w.max_offset(), 2);
}

TEST(Weights, LinearKernelHandEvaluation) {
  // omega(x) = 10 (1 - 5x) at 0.025, 0.1, 0.175: 8.75, 5, 1.25
  const QuadratureWeights w = build_weights(make_kernel("linear", 0.2), 0.1);
  EXPECT_NEAR(w.left_weight, 0.4375, 1e-15);
  ASSERT_EQ(w.interior.size(), 1u);
  EXPECT_NEAR(w.interior[0], 0.5, 1e-15);
  EXPECT_NEAR(w.right_weight, 0.0625, 1e-15);
  EXPECT_NEAR(w.sum(), 1.0, 1e-15);
}

TEST(Weights, SymmetricSupportOffsets) {
  const QuadratureWeights w = build_weights(make_kernel("symmetric-parabola", 0.05), 0.0125);
  EXPECT_EQ(w.n1, 4);
  EXPECT_EQ(w.n2, 4);
  EXPECT_EQ(w.interior.size(), 7u);
  EXPECT_EQ(w.taps().size(), 9u);
}

TEST(Weights, PiecewiseLinearKernelsSumExactly) {
  for (double dx : {0.1, 0.05, 0.025, 0.0125}) {
    EXPECT_NEAR(build_weights(make_kernel("constant", 0.2), dx).sum(), 1.0, 1e-14) << dx;
    EXPECT_NEAR(build_weights(make_kernel("linear", 0.2), dx).sum(), 1.0, 1e-14) << dx;
  }
}

TEST(Weights, SmoothKernelsSumToOneAtSecondOrder) {
  for (const char* name : {"concave", "symmetric-parabola", "kk-power52"}) {
    const KernelSpec k = make_kernel(name, 0.5);
    std::vector<double> defect;
    for (double dx : {0.05, 0.025, 0.0125, 0.00625}) {
      defect.push_back(std::abs(build_weights(k, dx).sum() - 1.0));
    }
    for (std::size_t i = 1; i < defect.size(); ++i) {
      EXPECT_GE(std::log2(defect[i - 1] / defect[i]), 1.9) << name << " refinement " << i;
    }
  }
}

TEST(Weights, NonIntegerRatioIsRejected) {
  const KernelSpec k = make_kernel("constant", 0.15);
  try {
    (void)build_weights(k, 0.1);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("1.5"), std::string::npos) << e.what();
  }
  EXPECT_NO_THROW(build_weights(k, 0.05));
}

TEST(Weights, DerivativeWeightsNeedDerivative) {
  KernelSpec k = make_kernel("linear", 0.2);
  const QuadratureWeights dw = build_derivative_weights(k, 0.1);
  EXPECT_NEAR(dw.sum(), -2.0 / 0.04 * 0.2, 1e-12);  // integral of omega' = -omega(0)
  k.omega_prime = nullptr;
  EXPECT_THROW(build_derivative_weights(k, 0.1), ConfigError);
}

}  // namespace
}  // namespace nlnt

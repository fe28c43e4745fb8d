#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace nlnt {

using PointFunction = std::function<double(double)>;

/// Nonnegative kernel with compact support [eta1, eta2], eta1 <= 0 <= eta2.
/// `omega` is only ever evaluated inside the closed support.
struct KernelSpec {
  std::string name;
  PointFunction omega;
  PointFunction omega_prime;  // empty when the derivative is unavailable
  double eta1 = 0.0;
  double eta2 = 0.0;
  bool claims_unit_integral = false;

  bool has_derivative() const { return static_cast<bool>(omega_prime); }
  double operator()(double x) const { return omega(x); }

  /// Throws KernelError when the support is degenerate or excludes 0.
  void validate() const;
};

/// Integral of omega over its support (adaptive Gauss-Kronrod, 1e-12 rel).
double kernel_integral(const KernelSpec& spec);

/// Rescale to unit integral. Throws KernelError if the integral is not
/// positive.
KernelSpec normalize_kernel(const KernelSpec& spec);

/// Built-in kernels by name: constant, linear, concave (all on [0, eta]),
/// symmetric-parabola (on [-eta, eta]) and kk-power52 (on [-eta, 0],
/// normalized numerically). All come with analytic derivatives.
KernelSpec make_kernel(std::string_view name, double eta);
std::vector<std::string> kernel_names();

/// Discrete weights of the midpoint-rule convolution for one (l, k) pair.
///
/// The convolution at cell j is
///   left * (u_{j-n1} + dx/4 s_{j-n1})
///   + sum_{l=-n1}^{n2-2} interior[l+n1] * u_{j+l+1}
///   + right * (u_{j+n2} - dx/4 s_{j+n2}).
struct QuadratureWeights {
  int n1 = 0;
  int n2 = 0;
  double dx = 0.0;
  double left_weight = 0.0;
  double right_weight = 0.0;
  std::vector<double> interior;  // offsets -n1+1 .. n2-1

  /// Dense taps over offsets -n1..n2 (left/right folded in); the slope
  /// corrections are applied separately.
  std::vector<double> taps() const;
  double sum() const;
  int min_offset() const { return -n1; }
  int max_offset() const { return n2; }
};

/// Support-to-grid ratios; throws ConfigError unless both are integers to
/// within 1e-9.
std::pair<int, int> support_cells(const KernelSpec& spec, double dx);

QuadratureWeights build_weights(const KernelSpec& spec, double dx);

/// Same nodes as build_weights but sampling omega'. Throws ConfigError if
/// the kernel has no derivative.
QuadratureWeights build_derivative_weights(const KernelSpec& spec, double dx);

}  // namespace nlnt

#include "nlnt/kernels.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <sstream>

#include "nlnt/errors.hpp"

namespace nlnt {

void KernelSpec::validate() const {
  if (!omega) throw KernelError("kernel '" + name + "': missing omega");
  if (!(eta1 <= 0.0 && eta2 >= 0.0) || eta1 == eta2) {
    std::ostringstream msg;
    msg << "kernel '" << name << "': support [" << eta1 << ", " << eta2
        << "] must contain 0 and have positive length";
    throw KernelError(msg.str());
  }
}

double kernel_integral(const KernelSpec& spec) {
  spec.validate();
  double error = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [&](double x) { return spec.omega(x); }, spec.eta1, spec.eta2, 15, 1e-12, &error);
  return value;
}

KernelSpec normalize_kernel(const KernelSpec& spec) {
  const double integral = kernel_integral(spec);
  if (!(integral > 0.0) || !std::isfinite(integral)) {
    std::ostringstream msg;
    msg << "kernel '" << spec.name << "': integral " << integral << " is not positive";
    throw KernelError(msg.str());
  }
  KernelSpec out = spec;
  const double scale = 1.0 / integral;
  out.omega = [f = spec.omega, scale](double x) { return scale * f(x); };
  if (spec.omega_prime) {
    out.omega_prime = [f = spec.omega_prime, scale](double x) { return scale * f(x); };
  }
  out.claims_unit_integral = true;
  return out;
}

KernelSpec make_kernel(std::string_view name, double eta) {
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw KernelError("kernel '" + std::string(name) + "': eta must be positive");
  }
  KernelSpec k;
  k.name = std::string(name);
  if (name == "constant") {
    k.omega = [eta](double) { return 1.0 / eta; };
    k.omega_prime = [](double) { return 0.0; };
    k.eta1 = 0.0;
    k.eta2 = eta;
    k.claims_unit_integral = true;
  } else if (name == "linear") {
    k.omega = [eta](double x) { return 2.0 / eta * (1.0 - x / eta); };
    k.omega_prime = [eta](double) { return -2.0 / (eta * eta); };
    k.eta1 = 0.0;
    k.eta2 = eta;
    k.claims_unit_integral = true;
  } else if (name == "concave") {
    const double e3 = eta * eta * eta;
    k.omega = [eta, e3](double x) { return 3.0 * (eta * eta - x * x) / (2.0 * e3); };
    k.omega_prime = [e3](double x) { return -3.0 * x / e3; };
    k.eta1 = 0.0;
    k.eta2 = eta;
    k.claims_unit_integral = true;
  } else if (name == "symmetric-parabola") {
    const double e3 = eta * eta * eta;
    k.omega = [eta, e3](double x) { return 3.0 * (eta * eta - x * x) / (4.0 * e3); };
    k.omega_prime = [e3](double x) { return -3.0 * x / (2.0 * e3); };
    k.eta1 = -eta;
    k.eta2 = eta;
    k.claims_unit_integral = true;
  } else if (name == "kk-power52") {
    k.omega = [eta](double x) {
      const double b = -x * (eta + x);
      return b > 0.0 ? std::pow(b, 2.5) : 0.0;
    };
    k.omega_prime = [eta](double x) {
      const double b = -x * (eta + x);
      return b > 0.0 ? 2.5 * std::pow(b, 1.5) * (-eta - 2.0 * x) : 0.0;
    };
    k.eta1 = -eta;
    k.eta2 = 0.0;
    return normalize_kernel(k);
  } else {
    throw KernelError("unknown kernel '" + std::string(name) + "'");
  }
  return k;
}

std::vector<std::string> kernel_names() {
  return {"constant", "linear", "concave", "symmetric-parabola", "kk-power52"};
}

std::vector<double> QuadratureWeights::taps() const {
  std::vector<double> t(static_cast<std::size_t>(n1 + n2 + 1), 0.0);
  t.front() += left_weight;
  t.back() += right_weight;
  for (std::size_t i = 0; i < interior.size(); ++i) t[i + 1] += interior[i];
  return t;
}

double QuadratureWeights::sum() const {
  double s = left_weight + right_weight;
  for (double w : interior) s += w;
  return s;
}

std::pair<int, int> support_cells(const KernelSpec& spec, double dx) {
  spec.validate();
  const double r1 = -spec.eta1 / dx;
  const double r2 = spec.eta2 / dx;
  const double n1 = std::round(r1);
  const double n2 = std::round(r2);
  if (std::abs(r1 - n1) > 1e-9 || std::abs(r2 - n2) > 1e-9) {
    std::ostringstream msg;
    msg.precision(12);
    msg << "kernel '" << spec.name << "': support [" << spec.eta1 << ", " << spec.eta2
        << "] is not an integer multiple of dx = " << dx << " (ratios " << r1 << ", " << r2
        << "); rounding the end cells up is not implemented";
    throw ConfigError(msg.str());
  }
  return {static_cast<int>(n1), static_cast<int>(n2)};
}

namespace {

QuadratureWeights sample_weights(const PointFunction& f, int n1, int n2, double dx) {
  QuadratureWeights w;
  w.n1 = n1;
  w.n2 = n2;
  w.dx = dx;
  w.left_weight = 0.5 * dx * f((0.25 - n1) * dx);
  w.right_weight = 0.5 * dx * f((n2 - 0.25) * dx);
  for (int l = -n1; l <= n2 - 2; ++l) w.interior.push_back(dx * f((l + 1) * dx));
  return w;
}

}  // namespace

QuadratureWeights build_weights(const KernelSpec& spec, double dx) {
  const auto [n1, n2] = support_cells(spec, dx);
  return sample_weights(spec.omega, n1, n2, dx);
}

QuadratureWeights build_derivative_weights(const KernelSpec& spec, double dx) {
  if (!spec.has_derivative()) {
    throw ConfigError("kernel '" + spec.name +
                      "' has no derivative; v2 flux slopes are unavailable");
  }
  const auto [n1, n2] = support_cells(spec, dx);
  return sample_weights(spec.omega_prime, n1, n2, dx);
}

}  // namespace nlnt

#include "nlnt/models.hpp"

#include <algorithm>
#include <cmath>

#include "nlnt/errors.hpp"
#include "nlnt/limiters.hpp"

namespace nlnt {

namespace {

void require_eta(const char* model, double eta) {
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw ConfigError(std::string(model) + ": eta must be positive, got " + std::to_string(eta));
  }
}

NonlocalTerm species_term(int k, const KernelSpec& kernel) {
  NonlocalTerm t;
  t.source = k;
  t.kernel = kernel;
  return t;
}

double kk_velocity(double a, double b) {
  const double c = 1.0 - a * a - b * b;
  return c * c * c;
}

double lane_velocity(double r) { return 1.0 - r * r; }

double floored(double rho) { return std::max(rho, kGarzDensityFloor); }

}  // namespace

double garz_velocity(double rho, double w) { return w - 6.0 * rho; }

ModelDef make_keyfitz_kranzer(double eta) {
  require_eta("keyfitz-kranzer", eta);
  const KernelSpec kernel = make_kernel("kk-power52", eta);
  ModelDef m;
  m.name = "keyfitz-kranzer";
  m.species_names = {"rho1", "rho2"};
  m.flux = [](int, double rho, std::span<const double> R) { return rho * kk_velocity(R[0], R[1]); };
  ProductForm pf;
  pf.g = [](int, double rho) { return rho; };
  pf.velocity = [](int, std::span<const double> R) { return kk_velocity(R[0], R[1]); };
  pf.velocity_gradient = [](int, std::span<const double> R, std::span<double> grad) {
    const double c = 1.0 - R[0] * R[0] - R[1] * R[1];
    const double d = 3.0 * c * c;
    grad[0] = -2.0 * R[0] * d;
    grad[1] = -2.0 * R[1] * d;
  };
  m.product = std::move(pf);
  m.nonlocal = {NonlocalComponent{{species_term(0, kernel)}},
                NonlocalComponent{{species_term(1, kernel)}}};
  m.rho_min = 0.0;
  m.validate();
  return m;
}

ModelDef make_arrhenius(double eta, std::string_view kernel_shape) {
  require_eta("arrhenius", eta);
  if (kernel_shape != "constant" && kernel_shape != "linear" && kernel_shape != "concave") {
    throw KernelError("arrhenius: kernel must be constant, linear or concave, got '" +
                      std::string(kernel_shape) + "'");
  }
  const KernelSpec kernel = make_kernel(kernel_shape, eta);
  ModelDef m;
  m.name = "arrhenius";
  m.species_names = {"rho"};
  m.flux = [](int, double rho, std::span<const double> R) {
    return rho * (1.0 - rho) * std::exp(-R[0]);
  };
  ProductForm pf;
  pf.g = [](int, double rho) { return rho * (1.0 - rho); };
  pf.velocity = [](int, std::span<const double> R) { return std::exp(-R[0]); };
  pf.velocity_gradient = [](int, std::span<const double> R, std::span<double> grad) {
    grad[0] = -std::exp(-R[0]);
  };
  m.product = std::move(pf);
  m.nonlocal = {NonlocalComponent{{species_term(0, kernel)}}};
  m.rho_min = 0.0;
  m.rho_max = 1.0;
  m.validate();
  return m;
}

ModelDef make_multilane(double eta, std::string_view kernel_shape) {
  require_eta("multilane", eta);
  const KernelSpec kernel = make_kernel(kernel_shape, eta);
  ModelDef m;
  m.name = "multilane";
  m.species_names = {"rho1", "rho2"};
  m.flux = [](int k, double rho, std::span<const double> R) {
    return rho * lane_velocity(R[static_cast<std::size_t>(k)]);
  };
  ProductForm pf;
  pf.g = [](int, double rho) { return rho; };
  pf.velocity = [](int k, std::span<const double> R) {
    return lane_velocity(R[static_cast<std::size_t>(k)]);
  };
  pf.velocity_gradient = [](int k, std::span<const double> R, std::span<double> grad) {
    std::fill(grad.begin(), grad.end(), 0.0);
    grad[static_cast<std::size_t>(k)] = -2.0 * R[static_cast<std::size_t>(k)];
  };
  m.product = std::move(pf);
  m.source = [](std::span<const double> rho, std::span<const double> R, std::span<double> out) {
    const double dv = lane_velocity(R[1]) - lane_velocity(R[0]);
    const double s = dv >= 0.0 ? dv * rho[0] * (1.0 - rho[1]) : dv * rho[1] * (1.0 - rho[0]);
    out[0] = -s;
    out[1] = s;
  };
  m.nonlocal = {NonlocalComponent{{species_term(0, kernel)}},
                NonlocalComponent{{species_term(1, kernel)}}};
  m.rho_min = 0.0;
  m.rho_max = 1.0;
  m.validate();
  return m;
}

ModelDef make_nonlocal_euler(double eta, std::string_view kernel_shape) {
  require_eta("nonlocal-euler", eta);
  const KernelSpec kernel = make_kernel(kernel_shape, eta);
  ModelDef m;
  m.name = "nonlocal-euler";
  m.species_names = {"rho", "u"};
  m.flux = [](int k, double v, std::span<const double> R) {
    return k == 0 ? v * R[0] : 0.5 * v * v;
  };
  // The u-flux has V == 1, so the v2 slope of u^2/2 is the plain minmod one.
  ProductForm pf;
  pf.g = [](int k, double v) { return k == 0 ? v : 0.5 * v * v; };
  pf.velocity = [](int k, std::span<const double> R) { return k == 0 ? R[0] : 1.0; };
  pf.velocity_gradient = [](int k, std::span<const double>, std::span<double> grad) {
    grad[0] = k == 0 ? 1.0 : 0.0;
  };
  m.product = std::move(pf);
  m.source = [](std::span<const double> v, std::span<const double> R, std::span<double> out) {
    out[0] = 0.0;
    out[1] = v[0] * (R[0] - v[1]);
  };
  m.nonlocal = {NonlocalComponent{{species_term(1, kernel)}}};
  m.validate();
  return m;
}

ModelDef make_garz(double eta, std::string_view kernel_shape) {
  require_eta("garz", eta);
  const KernelSpec kernel = make_kernel(kernel_shape, eta);
  ModelDef m;
  m.name = "garz";
  m.species_names = {"rho", "q"};
  m.flux = [](int, double v, std::span<const double> R) { return v * R[0]; };
  DerivedField d;
  d.name = "v";
  d.value = [](std::span<const double> x) {
    const double rho = floored(x[0]);
    return garz_velocity(x[0], x[1] / rho);
  };
  d.gradient = [](std::span<const double> x, std::span<double> grad) {
    const double rho = floored(x[0]);
    grad[0] = -6.0 - x[1] / (rho * rho);
    grad[1] = 1.0 / rho;
  };
  m.derived = std::move(d);
  NonlocalTerm t;
  t.source = NonlocalTerm::kDerivedSource;
  t.kernel = kernel;
  m.nonlocal = {NonlocalComponent{{t}}};
  m.validate();
  return m;
}

std::vector<std::string> model_names() {
  return {"keyfitz-kranzer", "arrhenius", "multilane", "nonlocal-euler", "garz"};
}

double default_eta(std::string_view model) {
  if (model == "keyfitz-kranzer") return 0.5;
  if (model == "arrhenius") return 0.2;
  if (model == "multilane") return 0.5;
  if (model == "nonlocal-euler") return 0.05;
  if (model == "garz") return 0.1;
  throw ConfigError("unknown model '" + std::string(model) + "'");
}

std::string default_kernel(std::string_view model) {
  if (model == "keyfitz-kranzer") return "kk-power52";
  if (model == "arrhenius") return "constant";
  if (model == "multilane") return "linear";
  if (model == "nonlocal-euler") return "symmetric-parabola";
  if (model == "garz") return "linear";
  throw ConfigError("unknown model '" + std::string(model) + "'");
}

ModelDef make_model(const ModelParams& params) {
  if (!(params.eta >= 0.0)) throw ConfigError("eta must be positive (0 selects the default)");
  const double eta = params.eta > 0.0 ? params.eta : default_eta(params.name);
  const std::string kernel = params.kernel.empty() ? default_kernel(params.name) : params.kernel;
  if (params.name == "keyfitz-kranzer") {
    if (kernel != "kk-power52") {
      throw KernelError("keyfitz-kranzer only supports the kk-power52 kernel");
    }
    return make_keyfitz_kranzer(eta);
  }
  if (params.name == "arrhenius") return make_arrhenius(eta, kernel);
  if (params.name == "multilane") return make_multilane(eta, kernel);
  if (params.name == "nonlocal-euler") return make_nonlocal_euler(eta, kernel);
  if (params.name == "garz") return make_garz(eta, kernel);
  throw ConfigError("unknown model '" + params.name + "'");
}

OutputColumns output_columns(const ModelDef& model, const SystemState& state) {
  OutputColumns out;
  if (model.name == "garz") {
    Field w(static_cast<std::size_t>(state.cells()));
    for (std::size_t j = 0; j < w.size(); ++j) w[j] = state[1][j] / floored(state[0][j]);
    out.names.push_back("w");
    out.values.push_back(std::move(w));
  }
  return out;
}

DerivedFieldValues derived_field_evaluate(const ModelDef& model, const SystemState& state,
                                          std::span<const Field> rates, double dx, Boundary bc) {
  if (!model.derived) {
    throw ContractError("model '" + model.name + "' has no derived field");
  }
  if (!rates.empty() && static_cast<int>(rates.size()) != state.species()) {
    throw ContractError("derived_field_evaluate: one rate field per species expected");
  }
  const DerivedField& d = *model.derived;
  const auto n = static_cast<std::size_t>(state.cells());
  const auto N = static_cast<std::size_t>(state.species());
  DerivedFieldValues out;
  out.value.resize(n);
  if (!rates.empty()) out.time_integrand.resize(n);
  std::vector<double> x(N), grad(N);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < N; ++k) x[k] = state.values[k][j];
    out.value[j] = d.value(x);
    if (rates.empty()) continue;
    d.gradient(x, grad);
    double acc = 0.0;
    for (std::size_t k = 0; k < N; ++k) acc += grad[k] * rates[k][j];
    out.time_integrand[j] = acc;
  }
  out.slopes = minmod_slopes(out.value, dx, bc);
  return out;
}

}  // namespace nlnt

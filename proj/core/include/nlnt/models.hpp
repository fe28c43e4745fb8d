#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nlnt/grid.hpp"
#include "nlnt/model.hpp"

namespace nlnt {

/// Two species, both transported with v(omega*rho^1, omega*rho^2) where
/// v(a, b) = (1 - a^2 - b^2)^3 and omega is the backward kk-power52 kernel.
ModelDef make_keyfitz_kranzer(double eta);

/// Scalar look-ahead model F = rho (1 - rho) exp(-omega*rho) with a
/// forward kernel on [0, eta]: "constant", "linear" or "concave".
ModelDef make_arrhenius(double eta, std::string_view kernel_shape = "constant");

/// Two lanes with velocity 1 - R^2 and a lane-changing source driven by
/// the velocity difference. Linear decreasing kernel on [0, eta].
ModelDef make_multilane(double eta, std::string_view kernel_shape = "linear");

/// Pressureless Euler with nonlocal velocity alignment; species (rho, u),
/// R = omega*u with the symmetric parabola kernel. The u-equation is
/// written in conservative form u_t + (u^2/2)_x = rho (R - u).
ModelDef make_nonlocal_euler(double eta, std::string_view kernel_shape = "symmetric-parabola");

/// Generalized Aw-Rascle-Zhang model with the convolution taken of the
/// velocity v(rho, w) = w - 6 rho, w = q / rho. Species (rho, q).
ModelDef make_garz(double eta = 0.1, std::string_view kernel_shape = "linear");

/// Lower bound on rho in the GARZ marker division.
inline constexpr double kGarzDensityFloor = 1e-12;

/// GARZ velocity v(rho, w) = w - 6 rho.
double garz_velocity(double rho, double w);

struct ModelParams {
  std::string name;
  double eta = 0.0;         // 0: model default
  std::string kernel;       // empty: model default
};

/// Registry names: keyfitz-kranzer, arrhenius, multilane, nonlocal-euler, garz.
ModelDef make_model(const ModelParams& params);
std::vector<std::string> model_names();
double default_eta(std::string_view model);
std::string default_kernel(std::string_view model);

/// Extra per-cell output columns (e.g. the GARZ marker w = q / rho).
struct OutputColumns {
  std::vector<std::string> names;
  std::vector<Field> values;
};
OutputColumns output_columns(const ModelDef& model, const SystemState& state);

/// Values of the derived field, its minmod slopes and the chain-rule time
/// derivative integrand sum_k du/drho_k (S_k - sigma_k).
struct DerivedFieldValues {
  Field value;
  Field slopes;
  Field time_integrand;
};

/// `rates[k]` holds S_k - sigma_k per cell; with empty `rates` the
/// integrand is left empty.
DerivedFieldValues derived_field_evaluate(const ModelDef& model, const SystemState& state,
                                          std::span<const Field> rates, double dx, Boundary bc);

}  // namespace nlnt

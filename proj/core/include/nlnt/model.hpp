#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nlnt/kernels.hpp"

namespace nlnt {

/// F_k(rho^k, R).
using FluxFn = std::function<double(int k, double rho, std::span<const double> R)>;
/// out[k] = S_k(rho, R) for all species at once.
using SourceFn =
    std::function<void(std::span<const double> rho, std::span<const double> R, std::span<double> out)>;

/// F_k(rho, R) = g_k(rho) V_k(R), with the gradient of V_k in R.
struct ProductForm {
  std::function<double(int k, double rho)> g;
  std::function<double(int k, std::span<const double> R)> velocity;
  std::function<void(int k, std::span<const double> R, std::span<double> grad)> velocity_gradient;
};

/// A scalar field u(rho) that is convolved instead of a species, together
/// with its gradient in the conserved variables.
struct DerivedField {
  std::string name;
  std::function<double(std::span<const double> rho)> value;
  std::function<void(std::span<const double> rho, std::span<double> grad)> gradient;
};

/// One kernel applied to one source: a species index, or kDerivedSource.
struct NonlocalTerm {
  static constexpr int kDerivedSource = -1;
  int source = 0;
  KernelSpec kernel;
};

/// R^l = sum over its terms of omega^{l,k} * source.
struct NonlocalComponent {
  std::vector<NonlocalTerm> terms;
};

/// Per-species state ranges used for Lipschitz bounds.
struct StateBox {
  std::vector<double> lo;
  std::vector<double> hi;
};

struct ModelDef {
  std::string name;
  std::vector<std::string> species_names;
  FluxFn flux;
  std::optional<ProductForm> product;
  SourceFn source;  // empty: S == 0
  std::vector<NonlocalComponent> nonlocal;
  std::optional<DerivedField> derived;
  std::optional<double> rho_min;
  std::optional<double> rho_max;

  int species() const { return static_cast<int>(species_names.size()); }
  int nonlocal_count() const { return static_cast<int>(nonlocal.size()); }
  bool has_source() const { return static_cast<bool>(source); }

  /// Structural checks: flux present, term sources in range, derived field
  /// present when referenced.
  void validate() const;
};

/// Ranges of each R^l implied by a state box: for nonnegative unit kernels
/// the convolution stays in the range of its source.
StateBox nonlocal_box(const ModelDef& model, const StateBox& box);

/// Sampled bound on |dF_k/drho| + sum_l |dF_k/dR_l| over the box (central
/// differences on a tensor grid of `samples` points per axis).
double flux_lipschitz(const ModelDef& model, const StateBox& box, int samples = 9);

/// Sampled bound on sum_i |dS_k/drho_i| + sum_l |dS_k/dR_l|; 0 without a
/// source.
double source_lipschitz(const ModelDef& model, const StateBox& box, int samples = 7);

/// Pointwise characteristic-type bound at one (rho, R) pair, used by the
/// runtime CFL monitor.
double local_flux_sensitivity(const ModelDef& model, int k, double rho,
                              std::span<const double> R);

}  // namespace nlnt

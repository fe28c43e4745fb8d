#pragma once

#include <optional>
#include <span>
#include <vector>

#include "nlnt/correlator.hpp"
#include "nlnt/grid.hpp"
#include "nlnt/kernels.hpp"
#include "nlnt/model.hpp"

namespace nlnt {

/// Single-band evaluations by direct summation. These are the reference
/// implementations; NonlocalOperator produces the same numbers faster.

/// R_j = left (u_{j-n1} + dx/4 s_{j-n1}) + sum interior u + right (u_{j+n2} - dx/4 s_{j+n2}).
Field eval_nonlocal_field(std::span<const double> u, std::span<const double> s,
                          const QuadratureWeights& w, Boundary bc);

/// Same bands without end-slope corrections.
Field eval_nonlocal_time_derivative(std::span<const double> f, const QuadratureWeights& w,
                                    Boundary bc);

/// Derivative of the convolution: boundary terms omega(eta2) u_{j+n2} -
/// omega(eta1) u_{j-n1} minus the omega' bands (with end-slope corrections).
Field eval_nonlocal_space_derivative(std::span<const double> u, std::span<const double> s,
                                     const KernelSpec& spec, double dx, Boundary bc);

/// Inputs for one evaluation of every R^l. `slopes` may be empty (no
/// end-slope corrections); the derived entries are only read by models
/// with a derived field.
struct NonlocalSources {
  std::span<const Field> values;
  std::span<const Field> slopes;
  const Field* derived = nullptr;
  const Field* derived_slopes = nullptr;
};

/// All nonlocal terms of a model on one grid: weights and correlators are
/// built once and reused every step.
class NonlocalOperator {
 public:
  NonlocalOperator(const ModelDef& model, const Grid& grid, Boundary bc, bool with_space_derivative,
                   BandCorrelator::Method method = BandCorrelator::Method::Auto);

  int components() const { return static_cast<int>(components_.size()); }
  bool has_space_derivative() const { return with_space_derivative_; }

  std::vector<Field> field(const NonlocalSources& in) const;
  std::vector<Field> time_derivative(const NonlocalSources& in) const;
  /// Throws ContractError when built without derivative bands.
  std::vector<Field> space_derivative(const NonlocalSources& in) const;

 private:
  struct Term {
    int source;
    QuadratureWeights weights;
    BandCorrelator band;
    std::optional<QuadratureWeights> dweights;
    std::optional<BandCorrelator> dband;
    double omega_left = 0.0;
    double omega_right = 0.0;
  };

  std::span<const double> source_of(const Term& t, const NonlocalSources& in, bool slopes) const;
  void add_slope_corrections(const QuadratureWeights& w, std::span<const double> s, double sign,
                             std::span<double> out) const;

  std::vector<std::vector<Term>> components_;
  int cells_;
  double dx_;
  Boundary bc_;
  bool with_space_derivative_;
};

}  // namespace nlnt

#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nlnt/grid.hpp"
#include "nlnt/limiters.hpp"
#include "nlnt/model.hpp"
#include "nlnt/nonlocal.hpp"

namespace nlnt {

enum class SchemeKind { NT, LxF1, LxF2 };
enum class SlopeVariant { V1, V2 };

struct SchemeConfig {
  SchemeKind scheme = SchemeKind::NT;
  SlopeVariant slopes = SlopeVariant::V1;
  double theta = 1.0;  // LxF numerical diffusion
  ClipConfig clip;

  /// Throws ConfigError for theta outside (0, 1] or v2 on a model without
  /// a product form.
  void validate(const ModelDef& model) const;
};

/// 1 for LxF1, 1/3 for LxF2; unused by NT.
double default_theta(SchemeKind kind);

/// Accepts "NT-v1", "NT-v2", "NT" (v1), "LxF1", "LxF2" (case-insensitive);
/// theta is set to default_theta.
SchemeConfig parse_scheme(std::string_view label);
/// "NT-v1", "NT-v2", "LxF1" or "LxF2".
std::string scheme_label(const SchemeConfig& config);

/// Values at t^{n+1/2}: species, nonlocal terms and the flux and source
/// evaluated there.
struct HalfStepState {
  std::vector<Field> rho;
  std::vector<Field> R;
  std::vector<Field> flux;
  std::vector<Field> source;
};

/// S_k(rho_j, R_j) for every species; zeros when the model has no source.
std::vector<Field> source_values(const ModelDef& model, std::span<const Field> rho,
                                 std::span<const Field> R);

/// S_k - sigma_k per cell.
std::vector<Field> source_minus_slope(const ModelDef& model, const SystemState& state,
                                      std::span<const Field> R, const SlopeField& sigma);

/// rho + dt/2 (S - sigma) and R + dt/2 R_t, plus flux and source there.
HalfStepState half_step(const SystemState& state, const ModelDef& model, std::span<const Field> R,
                        const SlopeField& sigma, std::span<const Field> R_t, double dt);

/// Staggered averages at x_{j+1/2}, t^{n+1}; entry j belongs to j+1/2.
std::vector<Field> staggered_predictor(const SystemState& state, const SlopeField& cell_s,
                                       const HalfStepState& half, double lambda, double dt,
                                       Boundary bc, double dx);

/// Projection of the staggered averages back onto the cell centers.
SystemState nonstaggered_projection(const SystemState& state, const SlopeField& cell_s,
                                    std::span<const Field> staggered,
                                    const SlopeField& staggered_s, const HalfStepState& half,
                                    double lambda, double dt, Boundary bc, double dx);

/// Intermediate NT quantities of one step, kept for diagnostics.
struct StepTrace {
  double dt = 0.0;
  double lambda = 0.0;
  std::vector<Field> cell_slopes;
  std::vector<Field> rates;  // S - sigma
  std::vector<Field> R;
  HalfStepState half;
  std::vector<Field> staggered;
  std::vector<Field> staggered_slopes;
};

/// One scheme bound to a model, grid and boundary; nonlocal weights are
/// built once. step() is const but uses internal scratch buffers, so one
/// Stepper must not be shared between threads.
class Stepper {
 public:
  Stepper(ModelDef model, const Grid& grid, Boundary bc, SchemeConfig config,
          BandCorrelator::Method method = BandCorrelator::Method::Auto);

  SystemState step(const SystemState& state, double dt, StepTrace* trace = nullptr) const;

  /// Nonlocal terms of `state` with slope corrections (zero slopes for LxF1).
  std::vector<Field> nonlocal_field(const SystemState& state) const;

  /// Pointwise bound max_{j,k} |dF_k/drho| + sum_l |dF_k/dR_l| on `state`.
  double runtime_flux_bound(const SystemState& state) const;

  const ModelDef& model() const { return model_; }
  const Grid& grid() const { return grid_; }
  Boundary boundary() const { return bc_; }
  const SchemeConfig& config() const { return config_; }

 private:
  struct Nonlocal {
    std::vector<Field> R;
    Field derived;
    Field derived_slopes;
  };

  Nonlocal evaluate_nonlocal(const SystemState& state, const SlopeField* slopes) const;
  SystemState nt(const SystemState& state, double dt, StepTrace* trace) const;
  SystemState lxf1(const SystemState& state, double dt) const;
  SystemState lxf2(const SystemState& state, double dt) const;
  std::vector<Field> lxf2_rate(const SystemState& state, double lambda) const;

  ModelDef model_;
  Grid grid_;
  Boundary bc_;
  SchemeConfig config_;
  NonlocalOperator op_;
};

SystemState nt_step(const SystemState& state, const ModelDef& model, const Grid& grid,
                    Boundary bc, const SchemeConfig& config, double dt);
SystemState lxf1_step(const SystemState& state, const ModelDef& model, const Grid& grid,
                      Boundary bc, const SchemeConfig& config, double dt);
SystemState lxf2_step(const SystemState& state, const ModelDef& model, const Grid& grid,
                      Boundary bc, const SchemeConfig& config, double dt);

}  // namespace nlnt

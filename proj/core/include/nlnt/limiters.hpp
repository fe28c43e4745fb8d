#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "nlnt/grid.hpp"

namespace nlnt {

struct ModelDef;

/// minmod(a, b): the argument of smaller magnitude when both share a sign,
/// zero otherwise. Ties return a.
inline double minmod(double a, double b) {
  if (a * b <= 0.0) return 0.0;
  return std::abs(a) <= std::abs(b) ? a : b;
}

/// Three-argument minmod: zero unless all signs agree, else the argument of
/// smallest magnitude.
inline double minmod(double a, double b, double c) {
  if (a > 0.0 && b > 0.0 && c > 0.0) return std::min(a, std::min(b, c));
  if (a < 0.0 && b < 0.0 && c < 0.0) return std::max(a, std::max(b, c));
  return 0.0;
}

/// Slope clipping |dx * s| <= C dx^delta. Off by default.
struct ClipConfig {
  bool enabled = false;
  double C = 1.0;
  double delta = 0.5;

  double cap(double dx) const { return C * std::pow(dx, delta); }
  void validate() const;
};

/// minmod(forward, backward, sign(backward) * cap), all in undivided
/// differences.
inline double minmod3_clipped(double forward, double backward, double cap) {
  const double sign = backward > 0.0 ? 1.0 : (backward < 0.0 ? -1.0 : 0.0);
  return minmod(forward, backward, sign * cap);
}

enum class SlopeKind { Cell, FluxV1, FluxV2, Staggered };

struct SlopeField {
  std::vector<Field> slopes;
  SlopeKind kind = SlopeKind::Cell;

  const Field& operator[](int k) const { return slopes[static_cast<std::size_t>(k)]; }
  Field& operator[](int k) { return slopes[static_cast<std::size_t>(k)]; }
};

/// Limited derivative of one field: minmod of the one-sided differences
/// divided by dx, neighbours resolved through `bc`.
Field minmod_slopes(std::span<const double> u, double dx, Boundary bc,
                    const ClipConfig& clip = {});

SlopeField cell_slopes(const SystemState& state, const Grid& grid, Boundary bc,
                       const ClipConfig& clip = {});

/// Point values F_k(rho_j^k, R_j) for every species.
std::vector<Field> flux_values(const ModelDef& model, const SystemState& state,
                               std::span<const Field> R);

/// sigma_j^k = minmod of the flux differences / dx.
SlopeField flux_slopes_v1(const ModelDef& model, const SystemState& state,
                          std::span<const Field> R, const Grid& grid, Boundary bc,
                          const ClipConfig& clip = {});

/// sigma_j^k = minmod(dg)/dx * V_k(R_j) + g_k(rho_j) sum_l dV_k/dR_l * dxR_j^l.
/// Throws ConfigError when the model has no product form.
SlopeField flux_slopes_v2(const ModelDef& model, const SystemState& state,
                          std::span<const Field> R, std::span<const Field> dxR,
                          const Grid& grid, Boundary bc);

/// Slopes of the staggered averages; entry j belongs to x_{j+1/2}.
SlopeField staggered_slopes(std::span<const Field> staggered, const Grid& grid, Boundary bc,
                            const ClipConfig& clip = {});

}  // namespace nlnt

#include "nlnt/limiters.hpp"

#include <cmath>

#include "nlnt/errors.hpp"
#include "nlnt/model.hpp"

namespace nlnt {

void ClipConfig::validate() const {
  if (!enabled) return;
  if (!(C > 0.0)) throw ConfigError("clip: C must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("clip: delta must lie in (0, 1)");
}

Field minmod_slopes(std::span<const double> u, double dx, Boundary bc, const ClipConfig& clip) {
  const long n = static_cast<long>(u.size());
  Field s(u.size());
  const double cap = clip.enabled ? clip.cap(dx) : 0.0;
  for (long j = 0; j < n; ++j) {
    const double here = u[static_cast<std::size_t>(j)];
    const double backward = here - ghost_value(u, j - 1, bc);
    const double forward = ghost_value(u, j + 1, bc) - here;
    const double limited =
        clip.enabled ? minmod3_clipped(forward, backward, cap) : minmod(forward, backward);
    s[static_cast<std::size_t>(j)] = limited / dx;
  }
  return s;
}

SlopeField cell_slopes(const SystemState& state, const Grid& grid, Boundary bc,
                       const ClipConfig& clip) {
  SlopeField out;
  out.kind = SlopeKind::Cell;
  for (const Field& u : state.values) out.slopes.push_back(minmod_slopes(u, grid.dx(), bc, clip));
  return out;
}

std::vector<Field> flux_values(const ModelDef& model, const SystemState& state,
                               std::span<const Field> R) {
  const int n = state.cells();
  const std::size_t m = R.size();
  for (const Field& r : R) {
    if (static_cast<int>(r.size()) != n) throw ContractError("flux: nonlocal field length");
  }
  std::vector<Field> F(static_cast<std::size_t>(state.species()), Field(static_cast<std::size_t>(n)));
  std::vector<double> rj(m);
  for (int j = 0; j < n; ++j) {
    const auto jj = static_cast<std::size_t>(j);
    for (std::size_t l = 0; l < m; ++l) rj[l] = R[l][jj];
    for (int k = 0; k < state.species(); ++k) {
      const double f = model.flux(k, state[k][jj], rj);
      if (!std::isfinite(f)) {
        throw ModelError("model '" + model.name + "': non-finite flux for species " +
                         std::to_string(k) + " at cell " + std::to_string(j));
      }
      F[static_cast<std::size_t>(k)][jj] = f;
    }
  }
  return F;
}

SlopeField flux_slopes_v1(const ModelDef& model, const SystemState& state,
                          std::span<const Field> R, const Grid& grid, Boundary bc,
                          const ClipConfig& clip) {
  SlopeField out;
  out.kind = SlopeKind::FluxV1;
  for (const Field& f : flux_values(model, state, R)) {
    out.slopes.push_back(minmod_slopes(f, grid.dx(), bc, clip));
  }
  return out;
}

SlopeField flux_slopes_v2(const ModelDef& model, const SystemState& state,
                          std::span<const Field> R, std::span<const Field> dxR,
                          const Grid& grid, Boundary bc) {
  if (!model.product) {
    throw ConfigError("model '" + model.name +
                      "' has no product form g(rho) V(R); v2 flux slopes are unavailable");
  }
  if (R.size() != dxR.size()) throw ContractError("flux_slopes_v2: R and dxR differ in size");
  const ProductForm& pf = *model.product;
  const int n = state.cells();
  const std::size_t m = R.size();

  SlopeField out;
  out.kind = SlopeKind::FluxV2;
  std::vector<double> rj(m), grad(m);
  for (int k = 0; k < state.species(); ++k) {
    Field g(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) g[static_cast<std::size_t>(j)] = pf.g(k, state[k][static_cast<std::size_t>(j)]);
    Field sigma = minmod_slopes(g, grid.dx(), bc);
    for (int j = 0; j < n; ++j) {
      const auto jj = static_cast<std::size_t>(j);
      for (std::size_t l = 0; l < m; ++l) rj[l] = R[l][jj];
      pf.velocity_gradient(k, rj, grad);
      double transport = 0.0;
      for (std::size_t l = 0; l < m; ++l) transport += grad[l] * dxR[l][jj];
      sigma[jj] = sigma[jj] * pf.velocity(k, rj) + g[jj] * transport;
      if (!std::isfinite(sigma[jj])) {
        throw ModelError("model '" + model.name + "': non-finite v2 slope at cell " +
                         std::to_string(j));
      }
    }
    out.slopes.push_back(std::move(sigma));
  }
  return out;
}

SlopeField staggered_slopes(std::span<const Field> staggered, const Grid& grid, Boundary bc,
                            const ClipConfig& clip) {
  SlopeField out;
  out.kind = SlopeKind::Staggered;
  for (const Field& u : staggered) out.slopes.push_back(minmod_slopes(u, grid.dx(), bc, clip));
  return out;
}

}  // namespace nlnt

#include "nlnt/entropy.hpp"

#include <algorithm>
#include <cmath>

#include "nlnt/errors.hpp"

namespace nlnt {

namespace {

double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace

Field entropy_inequality_lhs(const ModelDef& model, const Grid& grid, Boundary bc,
                             const SystemState& prev, const SystemState& next,
                             const StepTrace& trace, double zeta) {
  if (model.species() != 1) {
    throw ConfigError("entropy residual: only scalar models are supported, '" + model.name +
                      "' has " + std::to_string(model.species()) + " species");
  }
  if (trace.rates.empty() || trace.half.R.size() != static_cast<std::size_t>(model.nonlocal_count())) {
    throw ContractError("entropy residual: step trace is incomplete (NT steps only)");
  }
  const long n = prev.cells();
  const double dx = grid.dx(), dt = trace.dt, lambda = trace.lambda;
  const Field& u = prev[0];
  const Field& s = trace.cell_slopes[0];
  const Field& ss = trace.staggered_slopes[0];
  const Field& r = trace.rates[0];
  const Field& Sh = trace.half.source[0];
  const std::vector<Field>& Rh = trace.half.R;
  const std::size_t m = Rh.size();

  std::vector<double> rj(m);
  auto flux_at = [&](double value, long j) {
    for (std::size_t l = 0; l < m; ++l) rj[l] = ghost_value(Rh[l], j, bc);
    return model.flux(0, value + 0.5 * dt * ghost_value(r, j, bc), rj);
  };
  // G_{j+1/2}(a, b): the numerical flux of the projection through x_{j+1/2}.
  auto G = [&](long j, double a, double b) {
    return (0.25 * (a - b) + dx / 16.0 * (ghost_value(s, j + 1, bc) + ghost_value(s, j, bc)) +
            0.125 * dx * ghost_value(ss, j, bc) +
            0.5 * lambda * (flux_at(b, j + 1) + flux_at(a, j))) /
           lambda;
  };
  auto entropy_flux = [&](long j, double a, double b) {
    return G(j, std::max(a, zeta), std::max(b, zeta)) - G(j, std::min(a, zeta), std::min(b, zeta));
  };

  Field lhs(static_cast<std::size_t>(n));
  for (long j = 0; j < n; ++j) {
    const double un = next[0][static_cast<std::size_t>(j)];
    const double uj = u[static_cast<std::size_t>(j)];
    const double um = ghost_value(u, j - 1, bc), up = ghost_value(u, j + 1, bc);
    const double bracket =
        dx / 16.0 * (ghost_value(s, j + 1, bc) - ghost_value(s, j - 1, bc)) +
        0.125 * dx * (ghost_value(ss, j, bc) - ghost_value(ss, j - 1, bc)) +
        0.5 * lambda * (flux_at(zeta, j + 1) - flux_at(zeta, j - 1)) -
        0.25 * dt *
            (ghost_value(Sh, j + 1, bc) + 2.0 * Sh[static_cast<std::size_t>(j)] +
             ghost_value(Sh, j - 1, bc));
    lhs[static_cast<std::size_t>(j)] =
        std::abs(un - zeta) - std::abs(uj - zeta) + sgn(un - zeta) * bracket +
        lambda * (entropy_flux(j, uj, up) - entropy_flux(j - 1, um, uj));
  }
  return lhs;
}

double entropy_residual(const ModelDef& model, const Grid& grid, Boundary bc,
                        const SystemState& prev, const SystemState& next, const StepTrace& trace,
                        std::span<const double> zetas) {
  double worst = 0.0;
  for (double zeta : zetas) {
    const Field lhs = entropy_inequality_lhs(model, grid, bc, prev, next, trace, zeta);
    for (double v : lhs) worst = std::max(worst, v);
  }
  return worst;
}

}  // namespace nlnt

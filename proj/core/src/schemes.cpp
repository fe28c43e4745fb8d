#include "nlnt/schemes.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "nlnt/errors.hpp"
#include "nlnt/models.hpp"

namespace nlnt {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::size_t sz(long j) { return static_cast<std::size_t>(j); }

std::vector<Field> fluxes_at(const ModelDef& model, std::span<const Field> rho,
                             std::span<const Field> R) {
  const std::size_t n = rho.front().size();
  std::vector<Field> F(rho.size(), Field(n));
  std::vector<double> rj(R.size());
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t l = 0; l < R.size(); ++l) rj[l] = R[l][j];
    for (std::size_t k = 0; k < rho.size(); ++k) {
      const double f = model.flux(static_cast<int>(k), rho[k][j], rj);
      if (!std::isfinite(f)) {
        throw ModelError("model '" + model.name + "': non-finite flux for species " +
                         std::to_string(k) + " at cell " + std::to_string(j));
      }
      F[k][j] = f;
    }
  }
  return F;
}

void require_finite(const SystemState& s, const char* scheme) {
  for (int k = 0; k < s.species(); ++k) {
    for (std::size_t j = 0; j < s[k].size(); ++j) {
      if (!std::isfinite(s[k][j])) {
        throw NumericalError(std::string(scheme) + ": non-finite value in species " +
                             std::to_string(k) + " at cell " + std::to_string(j));
      }
    }
  }
}

}  // namespace

void SchemeConfig::validate(const ModelDef& model) const {
  if (!(theta > 0.0 && theta <= 1.0)) {
    throw ConfigError("scheme: diffusion theta must lie in (0, 1], got " + std::to_string(theta));
  }
  clip.validate();
  if (scheme == SchemeKind::NT && slopes == SlopeVariant::V2 && !model.product) {
    throw ConfigError("model '" + model.name +
                      "' has no product form g(rho) V(R); use NT-v1 instead of NT-v2");
  }
}

SchemeConfig parse_scheme(std::string_view label) {
  const std::string s = lower(label);
  SchemeConfig c;
  if (s == "nt" || s == "nt-v1") {
    c.scheme = SchemeKind::NT;
    c.slopes = SlopeVariant::V1;
  } else if (s == "nt-v2") {
    c.scheme = SchemeKind::NT;
    c.slopes = SlopeVariant::V2;
  } else if (s == "lxf1" || s == "lxf") {
    c.scheme = SchemeKind::LxF1;
  } else if (s == "lxf2") {
    c.scheme = SchemeKind::LxF2;
  } else {
    throw ConfigError("unknown scheme '" + std::string(label) +
                      "' (expected NT-v1, NT-v2, LxF1 or LxF2)");
  }
  c.theta = default_theta(c.scheme);
  return c;
}

double default_theta(SchemeKind kind) {
  // With theta = 1 the reconstructed LxF flux leaves the odd-even mode
  // undamped and LxF2 drops to first order on fine grids.
  return kind == SchemeKind::LxF2 ? 1.0 / 3.0 : 1.0;
}

std::string scheme_label(const SchemeConfig& config) {
  switch (config.scheme) {
    case SchemeKind::NT:
      return config.slopes == SlopeVariant::V1 ? "NT-v1" : "NT-v2";
    case SchemeKind::LxF1:
      return "LxF1";
    case SchemeKind::LxF2:
      return "LxF2";
  }
  return "?";
}

std::vector<Field> source_values(const ModelDef& model, std::span<const Field> rho,
                                 std::span<const Field> R) {
  const std::size_t N = rho.size();
  const std::size_t n = rho.front().size();
  std::vector<Field> S(N, Field(n, 0.0));
  if (!model.has_source()) return S;
  std::vector<double> rj(N), Rj(R.size()), out(N);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < N; ++k) rj[k] = rho[k][j];
    for (std::size_t l = 0; l < R.size(); ++l) Rj[l] = R[l][j];
    model.source(rj, Rj, out);
    for (std::size_t k = 0; k < N; ++k) {
      if (!std::isfinite(out[k])) {
        throw ModelError("model '" + model.name + "': non-finite source for species " +
                         std::to_string(k) + " at cell " + std::to_string(j));
      }
      S[k][j] = out[k];
    }
  }
  return S;
}

std::vector<Field> source_minus_slope(const ModelDef& model, const SystemState& state,
                                      std::span<const Field> R, const SlopeField& sigma) {
  std::vector<Field> rates = source_values(model, state.values, R);
  for (std::size_t k = 0; k < rates.size(); ++k) {
    for (std::size_t j = 0; j < rates[k].size(); ++j) rates[k][j] -= sigma.slopes[k][j];
  }
  return rates;
}

namespace {

HalfStepState half_from_rates(const SystemState& state, const ModelDef& model,
                              std::span<const Field> R, std::span<const Field> rates,
                              std::span<const Field> R_t, double dt) {
  HalfStepState h;
  const double c = 0.5 * dt;
  h.rho = state.values;
  for (std::size_t k = 0; k < h.rho.size(); ++k) {
    for (std::size_t j = 0; j < h.rho[k].size(); ++j) h.rho[k][j] += c * rates[k][j];
  }
  h.R.assign(R.begin(), R.end());
  for (std::size_t l = 0; l < h.R.size(); ++l) {
    for (std::size_t j = 0; j < h.R[l].size(); ++j) h.R[l][j] += c * R_t[l][j];
  }
  h.flux = fluxes_at(model, h.rho, h.R);
  h.source = source_values(model, h.rho, h.R);
  return h;
}

}  // namespace

HalfStepState half_step(const SystemState& state, const ModelDef& model, std::span<const Field> R,
                        const SlopeField& sigma, std::span<const Field> R_t, double dt) {
  const std::vector<Field> rates = source_minus_slope(model, state, R, sigma);
  return half_from_rates(state, model, R, rates, R_t, dt);
}

std::vector<Field> staggered_predictor(const SystemState& state, const SlopeField& cell_s,
                                       const HalfStepState& half, double lambda, double dt,
                                       Boundary bc, double dx) {
  const long n = state.cells();
  std::vector<Field> st(static_cast<std::size_t>(state.species()), Field(sz(n)));
  for (int k = 0; k < state.species(); ++k) {
    const Field& u = state[k];
    const Field& s = cell_s[k];
    const Field& F = half.flux[static_cast<std::size_t>(k)];
    const Field& S = half.source[static_cast<std::size_t>(k)];
    Field& out = st[static_cast<std::size_t>(k)];
    for (long j = 0; j < n; ++j) {
      const double u1 = ghost_value(u, j + 1, bc);
      const double s1 = ghost_value(s, j + 1, bc);
      const double F1 = ghost_value(F, j + 1, bc);
      const double S1 = ghost_value(S, j + 1, bc);
      out[sz(j)] = 0.5 * (u[sz(j)] + u1) + 0.125 * dx * (s[sz(j)] - s1) -
                   lambda * (F1 - F[sz(j)]) + 0.5 * dt * (S1 + S[sz(j)]);
    }
  }
  return st;
}

SystemState nonstaggered_projection(const SystemState& state, const SlopeField& cell_s,
                                    std::span<const Field> staggered,
                                    const SlopeField& staggered_s, const HalfStepState& half,
                                    double lambda, double dt, Boundary bc, double dx) {
  (void)staggered;
  const long n = state.cells();
  SystemState next(state.species(), static_cast<int>(n));
  for (int k = 0; k < state.species(); ++k) {
    const Field& u = state[k];
    const Field& s = cell_s[k];
    const Field& ss = staggered_s[k];
    const Field& F = half.flux[static_cast<std::size_t>(k)];
    const Field& S = half.source[static_cast<std::size_t>(k)];
    Field& out = next[k];
    for (long j = 0; j < n; ++j) {
      const double um = ghost_value(u, j - 1, bc), up = ghost_value(u, j + 1, bc);
      const double sm = ghost_value(s, j - 1, bc), sp = ghost_value(s, j + 1, bc);
      const double ssm = ghost_value(ss, j - 1, bc);
      const double Fm = ghost_value(F, j - 1, bc), Fp = ghost_value(F, j + 1, bc);
      const double Sm = ghost_value(S, j - 1, bc), Sp = ghost_value(S, j + 1, bc);
      out[sz(j)] = 0.25 * (um + 2.0 * u[sz(j)] + up) - dx / 16.0 * (sp - sm) -
                   0.125 * dx * (ss[sz(j)] - ssm) - 0.5 * lambda * (Fp - Fm) +
                   0.25 * dt * (Sp + 2.0 * S[sz(j)] + Sm);
    }
  }
  return next;
}

Stepper::Stepper(ModelDef model, const Grid& grid, Boundary bc, SchemeConfig config,
                 BandCorrelator::Method method)
    : model_(std::move(model)),
      grid_(grid),
      bc_(bc),
      config_(config),
      op_((config_.validate(model_), model_), grid_, bc_,
          config_.scheme == SchemeKind::NT && config_.slopes == SlopeVariant::V2, method) {}

Stepper::Nonlocal Stepper::evaluate_nonlocal(const SystemState& state,
                                             const SlopeField* slopes) const {
  Nonlocal nl;
  NonlocalSources src;
  src.values = state.values;
  if (slopes != nullptr) src.slopes = slopes->slopes;
  if (model_.derived) {
    DerivedFieldValues d = derived_field_evaluate(model_, state, {}, grid_.dx(), bc_);
    nl.derived = std::move(d.value);
    if (slopes != nullptr) nl.derived_slopes = std::move(d.slopes);
    src.derived = &nl.derived;
    if (slopes != nullptr) src.derived_slopes = &nl.derived_slopes;
  }
  nl.R = op_.field(src);
  return nl;
}

std::vector<Field> Stepper::nonlocal_field(const SystemState& state) const {
  if (config_.scheme == SchemeKind::LxF1) return evaluate_nonlocal(state, nullptr).R;
  const SlopeField s = cell_slopes(state, grid_, bc_, config_.clip);
  return evaluate_nonlocal(state, &s).R;
}

double Stepper::runtime_flux_bound(const SystemState& state) const {
  const std::vector<Field> R = nonlocal_field(state);
  std::vector<double> rj(R.size());
  double bound = 0.0;
  for (int j = 0; j < state.cells(); ++j) {
    for (std::size_t l = 0; l < R.size(); ++l) rj[l] = R[l][sz(j)];
    for (int k = 0; k < state.species(); ++k) {
      bound = std::max(bound, local_flux_sensitivity(model_, k, state[k][sz(j)], rj));
    }
  }
  return bound;
}

SystemState Stepper::step(const SystemState& state, double dt, StepTrace* trace) const {
  if (state.cells() != grid_.cells()) {
    throw ContractError("step: state has " + std::to_string(state.cells()) +
                        " cells, grid has " + std::to_string(grid_.cells()));
  }
  if (state.species() != model_.species()) throw ContractError("step: species count mismatch");
  if (!(dt >= 0.0)) throw ContractError("step: negative time step");
  if (dt == 0.0) return state;
  SystemState next;
  switch (config_.scheme) {
    case SchemeKind::NT:
      next = nt(state, dt, trace);
      break;
    case SchemeKind::LxF1:
      next = lxf1(state, dt);
      break;
    case SchemeKind::LxF2:
      next = lxf2(state, dt);
      break;
  }
  next.time = state.time + dt;
  require_finite(next, scheme_label(config_).c_str());
  return next;
}

SystemState Stepper::nt(const SystemState& state, double dt, StepTrace* trace) const {
  const double dx = grid_.dx();
  const double lambda = dt / dx;
  const SlopeField s = cell_slopes(state, grid_, bc_, config_.clip);
  Nonlocal nl = evaluate_nonlocal(state, &s);

  SlopeField sigma;
  if (config_.slopes == SlopeVariant::V1) {
    sigma = flux_slopes_v1(model_, state, nl.R, grid_, bc_, config_.clip);
  } else {
    NonlocalSources src{state.values, s.slopes, nullptr, nullptr};
    if (model_.derived) {
      src.derived = &nl.derived;
      src.derived_slopes = &nl.derived_slopes;
    }
    const std::vector<Field> dxR = op_.space_derivative(src);
    sigma = flux_slopes_v2(model_, state, nl.R, dxR, grid_, bc_);
  }

  const std::vector<Field> rates = source_minus_slope(model_, state, nl.R, sigma);
  NonlocalSources rsrc;
  rsrc.values = rates;
  Field derived_rate;
  if (model_.derived) {
    derived_rate = derived_field_evaluate(model_, state, rates, dx, bc_).time_integrand;
    rsrc.derived = &derived_rate;
  }
  const std::vector<Field> R_t = op_.time_derivative(rsrc);

  HalfStepState half = half_from_rates(state, model_, nl.R, rates, R_t, dt);
  std::vector<Field> st = staggered_predictor(state, s, half, lambda, dt, bc_, dx);
  const SlopeField ss = staggered_slopes(st, grid_, bc_, config_.clip);
  SystemState next = nonstaggered_projection(state, s, st, ss, half, lambda, dt, bc_, dx);

  if (trace != nullptr) {
    trace->dt = dt;
    trace->lambda = lambda;
    trace->cell_slopes = s.slopes;
    trace->rates = rates;
    trace->R = std::move(nl.R);
    trace->half = std::move(half);
    trace->staggered = std::move(st);
    trace->staggered_slopes = ss.slopes;
  }
  return next;
}

SystemState Stepper::lxf1(const SystemState& state, double dt) const {
  const double dx = grid_.dx();
  const double lambda = dt / dx;
  const double nu = config_.theta / (2.0 * lambda);
  const std::vector<Field> R = evaluate_nonlocal(state, nullptr).R;
  const std::vector<Field> F = fluxes_at(model_, state.values, R);
  const std::vector<Field> S = source_values(model_, state.values, R);
  const long n = state.cells();
  SystemState next(state.species(), static_cast<int>(n));
  Field H(sz(n + 1));
  for (int k = 0; k < state.species(); ++k) {
    const Field& u = state[k];
    const Field& f = F[static_cast<std::size_t>(k)];
    // H[i] is the flux through x_{i-1/2}.
    for (long i = 0; i <= n; ++i) {
      const double ul = ghost_value(u, i - 1, bc_), ur = ghost_value(u, i, bc_);
      const double fl = ghost_value(f, i - 1, bc_), fr = ghost_value(f, i, bc_);
      H[sz(i)] = 0.5 * (fl + fr) - nu * (ur - ul);
    }
    for (long j = 0; j < n; ++j) {
      next[k][sz(j)] = u[sz(j)] - lambda * (H[sz(j + 1)] - H[sz(j)]) +
                       dt * S[static_cast<std::size_t>(k)][sz(j)];
    }
  }
  return next;
}

std::vector<Field> Stepper::lxf2_rate(const SystemState& state, double lambda) const {
  const double dx = grid_.dx();
  const double nu = config_.theta / (2.0 * lambda);
  const SlopeField s = cell_slopes(state, grid_, bc_, config_.clip);
  const std::vector<Field> R = evaluate_nonlocal(state, &s).R;
  const std::vector<Field> S = source_values(model_, state.values, R);
  const long n = state.cells();
  const std::size_t m = R.size();
  const int N = state.species();

  // Interface nonlocal values, entry i at x_{i-1/2}.
  std::vector<std::vector<double>> Ri(sz(n + 1), std::vector<double>(m));
  for (long i = 0; i <= n; ++i) {
    for (std::size_t l = 0; l < m; ++l) {
      Ri[sz(i)][l] = 0.5 * (ghost_value(R[l], i - 1, bc_) + ghost_value(R[l], i, bc_));
    }
  }
  std::vector<Field> L(static_cast<std::size_t>(N), Field(sz(n)));
  Field H(sz(n + 1));
  for (int k = 0; k < N; ++k) {
    const Field& u = state[k];
    const Field& sk = s[k];
    for (long i = 0; i <= n; ++i) {
      const double minus = ghost_value(u, i - 1, bc_) + 0.5 * dx * ghost_value(sk, i - 1, bc_);
      const double plus = ghost_value(u, i, bc_) - 0.5 * dx * ghost_value(sk, i, bc_);
      const auto& r = Ri[sz(i)];
      H[sz(i)] = 0.5 * (model_.flux(k, minus, r) + model_.flux(k, plus, r)) - nu * (plus - minus);
    }
    const Field& Sk = S[static_cast<std::size_t>(k)];
    for (long j = 0; j < n; ++j) {
      const double src =
          0.25 * (ghost_value(Sk, j - 1, bc_) + 2.0 * Sk[sz(j)] + ghost_value(Sk, j + 1, bc_));
      L[static_cast<std::size_t>(k)][sz(j)] = -(H[sz(j + 1)] - H[sz(j)]) / dx + src;
    }
  }
  return L;
}

SystemState Stepper::lxf2(const SystemState& state, double dt) const {
  const double lambda = dt / grid_.dx();
  const std::vector<Field> L0 = lxf2_rate(state, lambda);
  SystemState mid = state;
  for (int k = 0; k < state.species(); ++k) {
    for (std::size_t j = 0; j < mid[k].size(); ++j) mid[k][j] += dt * L0[static_cast<std::size_t>(k)][j];
  }
  require_finite(mid, "LxF2");
  const std::vector<Field> L1 = lxf2_rate(mid, lambda);
  SystemState next(state.species(), state.cells());
  for (int k = 0; k < state.species(); ++k) {
    for (std::size_t j = 0; j < next[k].size(); ++j) {
      next[k][j] = 0.5 * (state[k][j] + mid[k][j] + dt * L1[static_cast<std::size_t>(k)][j]);
    }
  }
  return next;
}

SystemState nt_step(const SystemState& state, const ModelDef& model, const Grid& grid,
                    Boundary bc, const SchemeConfig& config, double dt) {
  SchemeConfig c = config;
  c.scheme = SchemeKind::NT;
  return Stepper(model, grid, bc, c).step(state, dt);
}

SystemState lxf1_step(const SystemState& state, const ModelDef& model, const Grid& grid,
                      Boundary bc, const SchemeConfig& config, double dt) {
  SchemeConfig c = config;
  c.scheme = SchemeKind::LxF1;
  return Stepper(model, grid, bc, c).step(state, dt);
}

SystemState lxf2_step(const SystemState& state, const ModelDef& model, const Grid& grid,
                      Boundary bc, const SchemeConfig& config, double dt) {
  SchemeConfig c = config;
  c.scheme = SchemeKind::LxF2;
  return Stepper(model, grid, bc, c).step(state, dt);
}

}  // namespace nlnt

#include "nlnt/time_control.hpp"

#include <algorithm>
#include <limits>

#include "nlnt/errors.hpp"

namespace nlnt {

TimeStepMode parse_time_step_mode(std::string_view name) {
  if (name == "flux" || name == "flux-only") return TimeStepMode::FluxOnly;
  if (name == "positivity" || name == "positivity-preserving") {
    return TimeStepMode::PositivityPreserving;
  }
  throw ConfigError("unknown time-step mode '" + std::string(name) +
                    "' (expected flux or positivity)");
}

std::string to_string(TimeStepMode mode) {
  return mode == TimeStepMode::FluxOnly ? "flux" : "positivity";
}

void TimeController::validate() const {
  if (!(safety > 0.0 && safety <= 1.0)) {
    throw ConfigError("time control: safety factor must lie in (0, 1]");
  }
  if (!(cfl_limit > 0.0)) throw ConfigError("time control: cfl_limit must be positive");
  if (!(t_final >= 0.0)) throw ConfigError("time control: final time must be non-negative");
  if (mode == TimeStepMode::PositivityPreserving) {
    if (!(kappa > 0.0 && tau > 0.0)) {
      throw ConfigError("time control: kappa and tau must be positive");
    }
    if (kappa + tau > kNtCflLimit * (1.0 + 1e-12)) {
      throw ConfigError("time control: kappa + tau must not exceed (sqrt(2)-1)/2");
    }
  }
}

double max_stable_dt(const TimeController& controller, const Grid& grid, double lip_flux,
                     double lip_source) {
  if (!(lip_flux > 0.0) || !std::isfinite(lip_flux)) {
    throw ModelError("time control: flux Lipschitz bound must be positive and finite");
  }
  if (controller.mode == TimeStepMode::FluxOnly) {
    return controller.safety * controller.cfl_limit * grid.dx() / lip_flux;
  }
  double dt = controller.kappa * grid.dx() / lip_flux;
  if (lip_source > 0.0) dt = std::min(dt, 2.0 * controller.tau / lip_source);
  return controller.safety * dt;
}

double clamp_to_final(const TimeController& controller, double t, double dt) {
  const double remaining = controller.t_final - t;
  if (remaining <= 0.0) return 0.0;
  if (dt >= remaining - 1e-12 * std::max(1.0, controller.t_final)) return remaining;
  return dt;
}

}  // namespace nlnt

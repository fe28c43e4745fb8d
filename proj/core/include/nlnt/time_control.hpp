#pragma once

#include <cmath>
#include <string>
#include <string_view>

#include "nlnt/grid.hpp"

namespace nlnt {

/// (sqrt(2) - 1) / 2, the stability bound on lambda * L_F for the NT scheme.
inline const double kNtCflLimit = (std::sqrt(2.0) - 1.0) / 2.0;

enum class TimeStepMode { FluxOnly, PositivityPreserving };

TimeStepMode parse_time_step_mode(std::string_view name);
std::string to_string(TimeStepMode mode);

struct TimeController {
  double cfl_limit = kNtCflLimit;
  double safety = 1.0;
  TimeStepMode mode = TimeStepMode::FluxOnly;
  // Positivity mode: dt L_S / 2 <= tau, lambda L_F <= kappa.
  double kappa = kNtCflLimit / 2.0;
  double tau = kNtCflLimit / 2.0;
  double t_final = 0.0;
  // Recompute dt every step from the pointwise flux bound of the current
  // state (never above the initial bound's step).
  bool adaptive = false;

  /// Throws ConfigError for safety outside (0, 1], negative limits or
  /// kappa + tau above the NT bound.
  void validate() const;
};

/// Largest admissible step for Lipschitz bounds L_F (flux) and L_S
/// (source; only used in positivity mode).
double max_stable_dt(const TimeController& controller, const Grid& grid, double lip_flux,
                     double lip_source = 0.0);

/// Shortens `dt` so that `t + dt` never passes the final time. Steps that
/// would leave a sliver below 1e-12 relative are stretched to land on T.
double clamp_to_final(const TimeController& controller, double t, double dt);

}  // namespace nlnt

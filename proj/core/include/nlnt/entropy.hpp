#pragma once

#include <span>

#include "nlnt/grid.hpp"
#include "nlnt/model.hpp"
#include "nlnt/schemes.hpp"

namespace nlnt {

/// Left-hand side of the discrete cell entropy inequality of one NT step
/// for the Kruzkov entropy |rho - zeta|, per cell. `trace` must come from
/// the step that produced `next` from `prev`. Scalar models only.
Field entropy_inequality_lhs(const ModelDef& model, const Grid& grid, Boundary bc,
                             const SystemState& prev, const SystemState& next,
                             const StepTrace& trace, double zeta);

/// max(0, max_j lhs_j) over all given zeta.
double entropy_residual(const ModelDef& model, const Grid& grid, Boundary bc,
                        const SystemState& prev, const SystemState& next, const StepTrace& trace,
                        std::span<const double> zetas);

}  // namespace nlnt

#include <algorithm>

#include <gtest/gtest.h>

#include "nlnt/entropy.hpp"
#include "nlnt/errors.hpp"
#include "nlnt/initial_data.hpp"
#include "nlnt/models.hpp"
#include "nlnt/time_control.hpp"

namespace nlnt {
namespace {

struct ArrheniusRun {
  ModelDef model = make_arrhenius(0.2, "constant");
  Grid grid{-1.0, 1.0, 320};
  SystemState state;
  double dt = 0.0;
  Stepper stepper{model, grid, Boundary::Periodic, parse_scheme("NT-v2")};

  ArrheniusRun() {
    state = init_cell_averages(find_initial_data("arrhenius-discontinuous").profile, 1, grid);
    dt = max_stable_dt(TimeController{}, grid, 1.0);
  }
};

TEST(Entropy, ZetaOutsideTheRangeReducesToConservation) {
  ArrheniusRun run;
  // The scheme keeps rho in [0, 1].
  for (int n = 0; n < 40; ++n) {
    StepTrace trace;
    const SystemState next = run.stepper.step(run.state, run.dt, &trace);
    for (double zeta : {-0.5, 1.5}) {
      const Field lhs =
          entropy_inequality_lhs(run.model, run.grid, Boundary::Periodic, run.state, next, trace, zeta);
      for (double v : lhs) ASSERT_LE(std::abs(v), 1e-10) << "step " << n << " zeta " << zeta;
    }
    run.state = next;
  }
}

TEST(Entropy, DiscontinuousArrheniusHasNoViolation) {
  ArrheniusRun run;
  const std::vector<double> zetas{0.1, 0.6, 1.1};
  double worst = 0.0;
  for (int n = 0; n < 200; ++n) {
    StepTrace trace;
    const SystemState next = run.stepper.step(run.state, run.dt, &trace);
    worst = std::max(worst, entropy_residual(run.model, run.grid, Boundary::Periodic, run.state,
                                             next, trace, zetas));
    run.state = next;
  }
  EXPECT_LE(worst, 1e-10);
}

TEST(Entropy, RejectsSystemsAndIncompleteTraces) {
  const ModelDef kk = make_keyfitz_kranzer(0.5);
  const Grid g(0.0, 4.0, 40);
  const SystemState s(2, 40, 0.1);
  StepTrace trace;
  EXPECT_THROW(entropy_inequality_lhs(kk, g, Boundary::Periodic, s, s, trace, 0.5), ConfigError);
  const ModelDef a = make_arrhenius(0.2);
  const SystemState s1(1, 40, 0.1);
  EXPECT_THROW(entropy_inequality_lhs(a, Grid(0.0, 1.0, 40), Boundary::Periodic, s1, s1, trace, 0.5),
               ContractError);
}

}  // namespace
}  // namespace nlnt

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "nlnt/grid.hpp"

namespace nlnt {

/// A named initial profile together with the domain it is posed on.
struct InitialData {
  std::string name;
  std::string model;  // model the profile belongs to
  int species = 1;
  InitialProfile profile;
  double x_left = -1.0;
  double x_right = 1.0;
  std::string description;
};

/// Benchmark profiles: kk-smooth, kk-discontinuous, arrhenius-smooth,
/// arrhenius-discontinuous, multilane-smooth, multilane-discontinuous,
/// euler-smooth, euler-riemann, garz-smooth and garz-jump.
const InitialData& find_initial_data(std::string_view name);
std::vector<std::string> initial_data_names();

/// One expression per species (see Expression for the grammar).
InitialProfile inline_profile(const std::vector<std::string>& expressions);

/// Multilane bump q(y) = 4 y^2 (1 - y^2) on (0, 1), zero elsewhere.
double multilane_bump(double y);

}  // namespace nlnt

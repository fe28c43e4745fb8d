#include "nlnt/grid.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "nlnt/errors.hpp"

namespace nlnt {

Grid::Grid(double x_left, double x_right, int cells)
    : x_left_(x_left), x_right_(x_right), cells_(cells), dx_(0.0) {
  if (!std::isfinite(x_left) || !std::isfinite(x_right) || !(x_right > x_left)) {
    throw ConfigError("grid: domain must satisfy x_left < x_right");
  }
  // Staggered slopes reach j +- 2.
  if (cells < 4) {
    throw ConfigError("grid: at least 4 cells are required, got " + std::to_string(cells));
  }
  dx_ = (x_right - x_left) / cells;
}

std::vector<double> Grid::centers() const {
  std::vector<double> x(static_cast<std::size_t>(cells_));
  for (int j = 0; j < cells_; ++j) x[static_cast<std::size_t>(j)] = center(j);
  return x;
}

SystemState::SystemState(int species, int cells, double fill)
    : values(static_cast<std::size_t>(species), Field(static_cast<std::size_t>(cells), fill)) {}

SystemState::SystemState(std::vector<Field> v, double t) : values(std::move(v)), time(t) {}

void SystemState::validate() const {
  const std::size_t n = values.empty() ? 0 : values.front().size();
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (values[k].size() != n) {
      throw ContractError("state: species " + std::to_string(k) + " has " +
                          std::to_string(values[k].size()) + " cells, expected " +
                          std::to_string(n));
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (!std::isfinite(values[k][j])) {
        throw NumericalError("state: non-finite value in species " + std::to_string(k) +
                             " at cell " + std::to_string(j));
      }
    }
  }
}

Boundary parse_boundary(std::string_view name) {
  if (name == "periodic") return Boundary::Periodic;
  if (name == "constant" || name == "constant-extension") return Boundary::ConstantExtension;
  if (name == "zero" || name == "zero-extension") return Boundary::ZeroExtension;
  throw ConfigError("unknown boundary condition '" + std::string(name) +
                    "' (expected periodic, constant or zero)");
}

std::string to_string(Boundary bc) {
  switch (bc) {
    case Boundary::Periodic:
      return "periodic";
    case Boundary::ConstantExtension:
      return "constant";
    case Boundary::ZeroExtension:
      return "zero";
  }
  return "unknown";
}

double ghost_value(const SystemState& state, int species, long j, Boundary bc) {
  return ghost_value(std::span<const double>(state[species]), j, bc);
}

Field padded(std::span<const double> field, int halo, Boundary bc) {
  const long n = static_cast<long>(field.size());
  Field out(static_cast<std::size_t>(n + 2 * halo));
  for (long i = 0; i < n + 2 * halo; ++i) {
    out[static_cast<std::size_t>(i)] = ghost_value(field, i - halo, bc);
  }
  return out;
}

SystemState init_cell_averages(const InitialProfile& f, int species, const Grid& grid) {
  // Gauss-Legendre nodes/weights on [-1, 1].
  static constexpr std::array<double, 5> nodes = {
      -0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831, 0.9061798459386640};
  static constexpr std::array<double, 5> weights = {
      0.2369268850561891, 0.4786286704993665, 0.5688888888888889, 0.4786286704993665,
      0.2369268850561891};

  SystemState state(species, grid.cells());
  const double half = 0.5 * grid.dx();
  for (int k = 0; k < species; ++k) {
    for (int j = 0; j < grid.cells(); ++j) {
      const double xc = grid.center(j);
      double sum = 0.0;
      for (std::size_t q = 0; q < nodes.size(); ++q) {
        const double v = f(k, xc + half * nodes[q]);
        if (!std::isfinite(v)) {
          std::ostringstream msg;
          msg << "initial data: non-finite value for species " << k << " in cell " << j
              << " (x = " << xc + half * nodes[q] << ")";
          throw InputDataError(msg.str());
        }
        sum += weights[q] * v;
      }
      state[k][static_cast<std::size_t>(j)] = 0.5 * sum;
    }
  }
  return state;
}

std::vector<double> total_mass(const SystemState& state, const Grid& grid) {
  std::vector<double> mass(static_cast<std::size_t>(state.species()), 0.0);
  for (int k = 0; k < state.species(); ++k) {
    double sum = 0.0;
    for (double v : state[k]) sum += v;
    mass[static_cast<std::size_t>(k)] = grid.dx() * sum;
  }
  return mass;
}

std::vector<double> total_variation(const SystemState& state, Boundary bc) {
  std::vector<double> tv(static_cast<std::size_t>(state.species()), 0.0);
  for (int k = 0; k < state.species(); ++k) {
    const Field& u = state[k];
    const std::size_t n = u.size();
    double sum = 0.0;
    for (std::size_t j = 0; j + 1 < n; ++j) sum += std::abs(u[j + 1] - u[j]);
    if (bc == Boundary::Periodic && n > 1) sum += std::abs(u.front() - u.back());
    tv[static_cast<std::size_t>(k)] = sum;
  }
  return tv;
}

}  // namespace nlnt

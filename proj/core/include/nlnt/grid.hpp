#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nlnt {

using Field = std::vector<double>;

/// Uniform partition of [x_left, x_right] into `cells` cells.
class Grid {
 public:
  /// Rejects J < 4 and empty/inverted domains.
  Grid(double x_left, double x_right, int cells);

  double x_left() const { return x_left_; }
  double x_right() const { return x_right_; }
  int cells() const { return cells_; }
  double dx() const { return dx_; }
  double length() const { return x_right_ - x_left_; }

  /// Cell center x_j = x_left + (j + 1/2) dx.
  double center(int j) const { return x_left_ + (j + 0.5) * dx_; }
  /// Left interface x_{j-1/2}.
  double interface(int j) const { return x_left_ + j * dx_; }

  std::vector<double> centers() const;

 private:
  double x_left_;
  double x_right_;
  int cells_;
  double dx_;
};

/// Cell averages of N species at one time level.
struct SystemState {
  std::vector<Field> values;
  double time = 0.0;

  SystemState() = default;
  SystemState(int species, int cells, double fill = 0.0);
  SystemState(std::vector<Field> v, double t);

  int species() const { return static_cast<int>(values.size()); }
  int cells() const { return values.empty() ? 0 : static_cast<int>(values.front().size()); }

  Field& operator[](int k) { return values[static_cast<std::size_t>(k)]; }
  const Field& operator[](int k) const { return values[static_cast<std::size_t>(k)]; }

  /// Throws ContractError on ragged species and NumericalError on NaN/Inf.
  void validate() const;
};

enum class Boundary { Periodic, ConstantExtension, ZeroExtension };

Boundary parse_boundary(std::string_view name);
std::string to_string(Boundary bc);

/// Map any integer index to an index into [0, J), or -1 for "zero".
inline long ghost_index(long j, long cells, Boundary bc) {
  if (j >= 0 && j < cells) return j;
  switch (bc) {
    case Boundary::Periodic: {
      long r = j % cells;
      return r < 0 ? r + cells : r;
    }
    case Boundary::ConstantExtension:
      return j < 0 ? 0 : cells - 1;
    case Boundary::ZeroExtension:
      return -1;
  }
  return -1;
}

/// Total lookup of a field at any integer index under `bc`.
inline double ghost_value(std::span<const double> field, long j, Boundary bc) {
  const long i = ghost_index(j, static_cast<long>(field.size()), bc);
  return i < 0 ? 0.0 : field[static_cast<std::size_t>(i)];
}

double ghost_value(const SystemState& state, int species, long j, Boundary bc);

/// Copy of `field` with `halo` ghost cells on each side; entry i holds the
/// value at cell index i - halo.
Field padded(std::span<const double> field, int halo, Boundary bc);

using InitialProfile = std::function<double(int species, double x)>;

/// Cell averages of a per-species profile by 5-point Gauss-Legendre
/// quadrature on every cell (exact for polynomials of degree <= 9; never
/// samples cell interfaces, where the benchmark discontinuities sit).
SystemState init_cell_averages(const InitialProfile& f, int species, const Grid& grid);

/// dx * sum_j rho_j^k for every species.
std::vector<double> total_mass(const SystemState& state, const Grid& grid);

/// sum_j |rho_{j+1}^k - rho_j^k|. Periodic grids include the seam
/// difference; other boundaries only count interior differences.
std::vector<double> total_variation(const SystemState& state, Boundary bc);

}  // namespace nlnt

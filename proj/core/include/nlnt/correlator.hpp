#pragma once

#include <memory>
#include <span>
#include <vector>

#include "nlnt/grid.hpp"

namespace nlnt {

/// out_j = sum_o taps[o - min_offset] * ghost(u, j + o) for j in [0, J).
///
/// Short stencils are summed directly; long ones go through a real FFT of
/// the ghost-padded input (FFTW). Both paths see the same padded input, so
/// the boundary treatment is identical.
class BandCorrelator {
 public:
  enum class Method { Auto, Direct, Fft };

  BandCorrelator(std::vector<double> taps, int min_offset, int cells, Boundary bc,
                 Method method = Method::Auto);
  ~BandCorrelator();
  BandCorrelator(BandCorrelator&&) noexcept;
  BandCorrelator& operator=(BandCorrelator&&) noexcept;
  BandCorrelator(const BandCorrelator&) = delete;
  BandCorrelator& operator=(const BandCorrelator&) = delete;

  void apply(std::span<const double> u, std::span<double> out) const;
  Field apply(std::span<const double> u) const;

  bool uses_fft() const { return fft_ != nullptr; }
  int cells() const { return cells_; }

  /// Stencils longer than this are evaluated with the FFT by default.
  static constexpr int kDirectMaxTaps = 48;

 private:
  struct FftPlan;

  std::vector<double> taps_;
  int min_offset_;
  int cells_;
  Boundary bc_;
  std::unique_ptr<FftPlan> fft_;
  mutable Field scratch_;
};

}  // namespace nlnt

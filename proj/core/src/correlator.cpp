#include "nlnt/correlator.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <mutex>

#include "nlnt/errors.hpp"

namespace nlnt {

namespace {

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

bool is_smooth(int n) {
  for (int p : {2, 3, 5, 7}) {
    while (n % p == 0) n /= p;
  }
  return n == 1;
}

int smooth_size_at_least(int n) {
  while (!is_smooth(n)) ++n;
  return n;
}

}  // namespace

struct BandCorrelator::FftPlan {
  int size = 0;
  double* real = nullptr;
  fftw_complex* spectrum = nullptr;
  fftw_complex* kernel_spectrum = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  FftPlan(std::span<const double> taps, int n) : size(n) {
    const int bins = n / 2 + 1;
    real = fftw_alloc_real(static_cast<std::size_t>(n));
    spectrum = fftw_alloc_complex(static_cast<std::size_t>(bins));
    kernel_spectrum = fftw_alloc_complex(static_cast<std::size_t>(bins));
    {
      std::lock_guard<std::mutex> lock(planner_mutex());
      forward = fftw_plan_dft_r2c_1d(n, real, spectrum, FFTW_ESTIMATE);
      backward = fftw_plan_dft_c2r_1d(n, spectrum, real, FFTW_ESTIMATE);
    }
    // Reversed taps turn the correlation into a convolution.
    const std::size_t k = taps.size() - 1;
    std::fill(real, real + n, 0.0);
    for (std::size_t i = 0; i <= k; ++i) real[i] = taps[k - i];
    fftw_execute(forward);
    std::memcpy(kernel_spectrum, spectrum, sizeof(fftw_complex) * static_cast<std::size_t>(bins));
  }

  ~FftPlan() {
    {
      std::lock_guard<std::mutex> lock(planner_mutex());
      fftw_destroy_plan(forward);
      fftw_destroy_plan(backward);
    }
    fftw_free(real);
    fftw_free(spectrum);
    fftw_free(kernel_spectrum);
  }

  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;
};

BandCorrelator::BandCorrelator(std::vector<double> taps, int min_offset, int cells, Boundary bc,
                               Method method)
    : taps_(std::move(taps)), min_offset_(min_offset), cells_(cells), bc_(bc) {
  if (taps_.empty()) throw ContractError("correlator: empty stencil");
  if (cells_ <= 0) throw ContractError("correlator: no cells");
  const int padded_len = cells_ + static_cast<int>(taps_.size()) - 1;
  scratch_.resize(static_cast<std::size_t>(padded_len));
  const bool want_fft =
      method == Method::Fft ||
      (method == Method::Auto && static_cast<int>(taps_.size()) > kDirectMaxTaps);
  if (want_fft) fft_ = std::make_unique<FftPlan>(taps_, smooth_size_at_least(padded_len));
}

BandCorrelator::~BandCorrelator() = default;
BandCorrelator::BandCorrelator(BandCorrelator&&) noexcept = default;
BandCorrelator& BandCorrelator::operator=(BandCorrelator&&) noexcept = default;

void BandCorrelator::apply(std::span<const double> u, std::span<double> out) const {
  if (static_cast<int>(u.size()) != cells_ || static_cast<int>(out.size()) != cells_) {
    throw ContractError("correlator: expected fields of length " + std::to_string(cells_));
  }
  const long padded_len = static_cast<long>(scratch_.size());
  for (long i = 0; i < padded_len; ++i) {
    scratch_[static_cast<std::size_t>(i)] = ghost_value(u, i + min_offset_, bc_);
  }

  const std::size_t k = taps_.size() - 1;
  if (!fft_) {
    for (int j = 0; j < cells_; ++j) {
      const double* p = scratch_.data() + j;
      double acc = 0.0;
      for (std::size_t i = 0; i <= k; ++i) acc += taps_[i] * p[i];
      out[static_cast<std::size_t>(j)] = acc;
    }
    return;
  }

  FftPlan& plan = *fft_;
  std::fill(plan.real, plan.real + plan.size, 0.0);
  std::copy(scratch_.begin(), scratch_.end(), plan.real);
  fftw_execute(plan.forward);
  const int bins = plan.size / 2 + 1;
  for (int b = 0; b < bins; ++b) {
    const double ar = plan.spectrum[b][0], ai = plan.spectrum[b][1];
    const double br = plan.kernel_spectrum[b][0], bi = plan.kernel_spectrum[b][1];
    plan.spectrum[b][0] = ar * br - ai * bi;
    plan.spectrum[b][1] = ar * bi + ai * br;
  }
  fftw_execute(plan.backward);
  const double scale = 1.0 / plan.size;
  for (int j = 0; j < cells_; ++j) {
    out[static_cast<std::size_t>(j)] = scale * plan.real[static_cast<std::size_t>(j) + k];
  }
}

Field BandCorrelator::apply(std::span<const double> u) const {
  Field out(u.size());
  apply(u, out);
  return out;
}

}  // namespace nlnt

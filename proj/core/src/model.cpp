#include "nlnt/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nlnt/errors.hpp"

namespace nlnt {

namespace {

double axis_point(double lo, double hi, int i, int samples) {
  if (samples <= 1 || hi <= lo) return lo;
  return lo + (hi - lo) * static_cast<double>(i) / (samples - 1);
}

// Visits every point of the tensor grid spanned by [lo_d, hi_d].
template <typename Visit>
void for_each_sample(std::span<const double> lo, std::span<const double> hi, int samples,
                     Visit&& visit) {
  const std::size_t dims = lo.size();
  std::vector<int> idx(dims, 0);
  std::vector<double> point(dims);
  while (true) {
    for (std::size_t d = 0; d < dims; ++d) point[d] = axis_point(lo[d], hi[d], idx[d], samples);
    visit(std::span<const double>(point));
    std::size_t d = 0;
    for (; d < dims; ++d) {
      if (++idx[d] < samples) break;
      idx[d] = 0;
    }
    if (d == dims) break;
  }
}

double fd_step(double x) { return 1e-6 * std::max(1.0, std::abs(x)); }

}  // namespace

void ModelDef::validate() const {
  if (species_names.empty()) throw ModelError("model '" + name + "': no species");
  if (!flux) throw ModelError("model '" + name + "': missing flux");
  for (const auto& comp : nonlocal) {
    if (comp.terms.empty()) throw ModelError("model '" + name + "': empty nonlocal term");
    for (const auto& term : comp.terms) {
      if (term.source == NonlocalTerm::kDerivedSource) {
        if (!derived) throw ModelError("model '" + name + "': derived source without hook");
      } else if (term.source < 0 || term.source >= species()) {
        throw ModelError("model '" + name + "': nonlocal source index out of range");
      }
      term.kernel.validate();
    }
  }
}

StateBox nonlocal_box(const ModelDef& model, const StateBox& box) {
  double derived_lo = 0.0, derived_hi = 0.0;
  if (model.derived) {
    derived_lo = std::numeric_limits<double>::infinity();
    derived_hi = -derived_lo;
    for_each_sample(box.lo, box.hi, 17, [&](std::span<const double> rho) {
      const double u = model.derived->value(rho);
      derived_lo = std::min(derived_lo, u);
      derived_hi = std::max(derived_hi, u);
    });
  }
  StateBox out;
  for (const auto& comp : model.nonlocal) {
    double lo = 0.0, hi = 0.0;
    for (const auto& term : comp.terms) {
      if (term.source == NonlocalTerm::kDerivedSource) {
        lo += derived_lo;
        hi += derived_hi;
      } else {
        lo += box.lo[static_cast<std::size_t>(term.source)];
        hi += box.hi[static_cast<std::size_t>(term.source)];
      }
    }
    out.lo.push_back(lo);
    out.hi.push_back(hi);
  }
  return out;
}

double local_flux_sensitivity(const ModelDef& model, int k, double rho,
                              std::span<const double> R) {
  const double h = fd_step(rho);
  double sens = std::abs(model.flux(k, rho + h, R) - model.flux(k, rho - h, R)) / (2.0 * h);
  std::vector<double> r(R.begin(), R.end());
  for (std::size_t l = 0; l < r.size(); ++l) {
    const double x = r[l];
    const double hr = fd_step(x);
    r[l] = x + hr;
    const double fp = model.flux(k, rho, r);
    r[l] = x - hr;
    const double fm = model.flux(k, rho, r);
    r[l] = x;
    sens += std::abs(fp - fm) / (2.0 * hr);
  }
  return sens;
}

double flux_lipschitz(const ModelDef& model, const StateBox& box, int samples) {
  const StateBox rbox = nonlocal_box(model, box);
  double bound = 0.0;
  for (int k = 0; k < model.species(); ++k) {
    std::vector<double> lo{box.lo[static_cast<std::size_t>(k)]};
    std::vector<double> hi{box.hi[static_cast<std::size_t>(k)]};
    lo.insert(lo.end(), rbox.lo.begin(), rbox.lo.end());
    hi.insert(hi.end(), rbox.hi.begin(), rbox.hi.end());
    for_each_sample(lo, hi, samples, [&](std::span<const double> p) {
      bound = std::max(bound, local_flux_sensitivity(model, k, p[0], p.subspan(1)));
    });
  }
  return bound;
}

double source_lipschitz(const ModelDef& model, const StateBox& box, int samples) {
  if (!model.has_source()) return 0.0;
  const StateBox rbox = nonlocal_box(model, box);
  const std::size_t n = static_cast<std::size_t>(model.species());
  std::vector<double> lo = box.lo, hi = box.hi;
  lo.insert(lo.end(), rbox.lo.begin(), rbox.lo.end());
  hi.insert(hi.end(), rbox.hi.begin(), rbox.hi.end());

  std::vector<double> plus(n), minus(n), sens(n);
  double bound = 0.0;
  for_each_sample(lo, hi, samples, [&](std::span<const double> p) {
    std::vector<double> x(p.begin(), p.end());
    std::fill(sens.begin(), sens.end(), 0.0);
    for (std::size_t d = 0; d < x.size(); ++d) {
      const double x0 = x[d];
      const double h = fd_step(x0);
      x[d] = x0 + h;
      model.source(std::span<const double>(x).first(n), std::span<const double>(x).subspan(n),
                   plus);
      x[d] = x0 - h;
      model.source(std::span<const double>(x).first(n), std::span<const double>(x).subspan(n),
                   minus);
      x[d] = x0;
      for (std::size_t k = 0; k < n; ++k) sens[k] += std::abs(plus[k] - minus[k]) / (2.0 * h);
    }
    for (double s : sens) bound = std::max(bound, s);
  });
  return bound;
}

}  // namespace nlnt

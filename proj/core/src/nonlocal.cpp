#include "nlnt/nonlocal.hpp"

#include "nlnt/errors.hpp"

namespace nlnt {

namespace {

void check_lengths(std::span<const double> u, std::span<const double> s) {
  if (!s.empty() && s.size() != u.size()) {
    throw ContractError("nonlocal: values and slopes differ in length (" +
                        std::to_string(u.size()) + " vs " + std::to_string(s.size()) + ")");
  }
}

Field band_sum(std::span<const double> u, std::span<const double> s, const QuadratureWeights& w,
               Boundary bc) {
  const long n = static_cast<long>(u.size());
  const double q = 0.25 * w.dx;
  Field out(u.size());
  for (long j = 0; j < n; ++j) {
    const long a = j - w.n1, b = j + w.n2;
    double left = ghost_value(u, a, bc);
    double right = ghost_value(u, b, bc);
    if (!s.empty()) {
      left += q * ghost_value(s, a, bc);
      right -= q * ghost_value(s, b, bc);
    }
    double acc = w.left_weight * left + w.right_weight * right;
    for (std::size_t i = 0; i < w.interior.size(); ++i) {
      acc += w.interior[i] * ghost_value(u, a + 1 + static_cast<long>(i), bc);
    }
    out[static_cast<std::size_t>(j)] = acc;
  }
  return out;
}

}  // namespace

Field eval_nonlocal_field(std::span<const double> u, std::span<const double> s,
                          const QuadratureWeights& w, Boundary bc) {
  if (s.size() != u.size()) throw ContractError("eval_nonlocal_field: slope length mismatch");
  return band_sum(u, s, w, bc);
}

Field eval_nonlocal_time_derivative(std::span<const double> f, const QuadratureWeights& w,
                                    Boundary bc) {
  return band_sum(f, {}, w, bc);
}

Field eval_nonlocal_space_derivative(std::span<const double> u, std::span<const double> s,
                                     const KernelSpec& spec, double dx, Boundary bc) {
  if (s.size() != u.size()) {
    throw ContractError("eval_nonlocal_space_derivative: slope length mismatch");
  }
  const QuadratureWeights dw = build_derivative_weights(spec, dx);
  Field out = band_sum(u, s, dw, bc);
  const double wl = spec.omega(spec.eta1), wr = spec.omega(spec.eta2);
  const long n = static_cast<long>(u.size());
  for (long j = 0; j < n; ++j) {
    auto& o = out[static_cast<std::size_t>(j)];
    o = -wl * ghost_value(u, j - dw.n1, bc) + wr * ghost_value(u, j + dw.n2, bc) - o;
  }
  return out;
}

NonlocalOperator::NonlocalOperator(const ModelDef& model, const Grid& grid, Boundary bc,
                                   bool with_space_derivative, BandCorrelator::Method method)
    : cells_(grid.cells()), dx_(grid.dx()), bc_(bc), with_space_derivative_(with_space_derivative) {
  for (const NonlocalComponent& comp : model.nonlocal) {
    std::vector<Term> terms;
    for (const NonlocalTerm& nt : comp.terms) {
      QuadratureWeights w = build_weights(nt.kernel, dx_);
      BandCorrelator band(w.taps(), w.min_offset(), cells_, bc, method);
      Term t{nt.source, std::move(w), std::move(band), std::nullopt, std::nullopt, 0.0, 0.0};
      if (with_space_derivative) {
        QuadratureWeights dw = build_derivative_weights(nt.kernel, dx_);
        t.dband.emplace(dw.taps(), dw.min_offset(), cells_, bc, method);
        t.dweights = std::move(dw);
        t.omega_left = nt.kernel.omega(nt.kernel.eta1);
        t.omega_right = nt.kernel.omega(nt.kernel.eta2);
      }
      terms.push_back(std::move(t));
    }
    components_.push_back(std::move(terms));
  }
}

std::span<const double> NonlocalOperator::source_of(const Term& t, const NonlocalSources& in,
                                                    bool slopes) const {
  if (t.source == NonlocalTerm::kDerivedSource) {
    const Field* f = slopes ? in.derived_slopes : in.derived;
    if (f == nullptr) {
      if (slopes) return {};
      throw ContractError("nonlocal: derived field required but not supplied");
    }
    if (static_cast<int>(f->size()) != cells_) throw ContractError("nonlocal: derived field length");
    return *f;
  }
  const auto k = static_cast<std::size_t>(t.source);
  const std::span<const Field> src = slopes ? in.slopes : in.values;
  if (slopes && src.empty()) return {};
  if (k >= src.size()) throw ContractError("nonlocal: missing species " + std::to_string(k));
  if (static_cast<int>(src[k].size()) != cells_) {
    throw ContractError("nonlocal: field length " + std::to_string(src[k].size()) +
                        " does not match grid " + std::to_string(cells_));
  }
  return src[k];
}

void NonlocalOperator::add_slope_corrections(const QuadratureWeights& w, std::span<const double> s,
                                             double sign, std::span<double> out) const {
  if (s.empty()) return;
  const double cl = sign * w.left_weight * 0.25 * dx_;
  const double cr = sign * w.right_weight * 0.25 * dx_;
  for (long j = 0; j < cells_; ++j) {
    out[static_cast<std::size_t>(j)] +=
        cl * ghost_value(s, j - w.n1, bc_) - cr * ghost_value(s, j + w.n2, bc_);
  }
}

std::vector<Field> NonlocalOperator::field(const NonlocalSources& in) const {
  std::vector<Field> R;
  Field tmp(static_cast<std::size_t>(cells_));
  for (const auto& terms : components_) {
    Field acc(static_cast<std::size_t>(cells_), 0.0);
    for (const Term& t : terms) {
      const auto u = source_of(t, in, false);
      const auto s = source_of(t, in, true);
      check_lengths(u, s);
      t.band.apply(u, tmp);
      add_slope_corrections(t.weights, s, 1.0, tmp);
      for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += tmp[j];
    }
    R.push_back(std::move(acc));
  }
  return R;
}

std::vector<Field> NonlocalOperator::time_derivative(const NonlocalSources& in) const {
  std::vector<Field> Rt;
  Field tmp(static_cast<std::size_t>(cells_));
  for (const auto& terms : components_) {
    Field acc(static_cast<std::size_t>(cells_), 0.0);
    for (const Term& t : terms) {
      t.band.apply(source_of(t, in, false), tmp);
      for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += tmp[j];
    }
    Rt.push_back(std::move(acc));
  }
  return Rt;
}

std::vector<Field> NonlocalOperator::space_derivative(const NonlocalSources& in) const {
  if (!with_space_derivative_) {
    throw ContractError("nonlocal operator was built without derivative bands");
  }
  std::vector<Field> dR;
  Field tmp(static_cast<std::size_t>(cells_));
  for (const auto& terms : components_) {
    Field acc(static_cast<std::size_t>(cells_), 0.0);
    for (const Term& t : terms) {
      const auto u = source_of(t, in, false);
      const auto s = source_of(t, in, true);
      check_lengths(u, s);
      t.dband->apply(u, tmp);
      add_slope_corrections(*t.dweights, s, 1.0, tmp);
      const QuadratureWeights& w = *t.dweights;
      for (long j = 0; j < cells_; ++j) {
        const auto jj = static_cast<std::size_t>(j);
        acc[jj] += -t.omega_left * ghost_value(u, j - w.n1, bc_) +
                   t.omega_right * ghost_value(u, j + w.n2, bc_) - tmp[jj];
      }
    }
    dR.push_back(std::move(acc));
  }
  return dR;
}

}  // namespace nlnt

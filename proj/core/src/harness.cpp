#include "nlnt/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "nlnt/entropy.hpp"
#include "nlnt/errors.hpp"
#include "nlnt/initial_data.hpp"

namespace nlnt {

namespace {

const InitialData* registry_entry(const Experiment& exp) {
  if (exp.initial_data.empty()) return nullptr;
  return &find_initial_data(exp.initial_data);
}

void default_warning(const std::string& msg) { std::cerr << "warning: " << msg << '\n'; }

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

}  // namespace

double Experiment::domain_left() const {
  if (x_left) return *x_left;
  if (const InitialData* d = registry_entry(*this)) return d->x_left;
  throw ConfigError("experiment '" + label + "': domain not given");
}

double Experiment::domain_right() const {
  if (x_right) return *x_right;
  if (const InitialData* d = registry_entry(*this)) return d->x_right;
  throw ConfigError("experiment '" + label + "': domain not given");
}

int Experiment::cells(int level) const {
  if (level < 0 || level > 20) throw ConfigError("level must lie in [0, 20]");
  const double ratio = (domain_right() - domain_left()) / base_dx;
  const double base = std::round(ratio);
  if (std::abs(ratio - base) > 1e-9 * std::max(1.0, ratio) || base < 1) {
    throw ConfigError("experiment '" + label + "': domain length is not a multiple of dx = " +
                      format_double(base_dx));
  }
  return static_cast<int>(base) << level;
}

Grid Experiment::grid(int level) const { return Grid(domain_left(), domain_right(), cells(level)); }

int Experiment::species() const {
  if (!initial_expressions.empty()) return static_cast<int>(initial_expressions.size());
  if (const InitialData* d = registry_entry(*this)) return d->species;
  throw ConfigError("experiment '" + label + "': no initial data");
}

InitialProfile Experiment::profile() const {
  if (!initial_expressions.empty()) return inline_profile(initial_expressions);
  if (const InitialData* d = registry_entry(*this)) return d->profile;
  throw ConfigError("experiment '" + label + "': no initial data");
}

ModelDef Experiment::build_model() const { return make_model(model); }

TimeController Experiment::controller() const {
  TimeController c = time;
  c.t_final = t_final;
  return c;
}

void Experiment::validate() const {
  if (!initial_data.empty() && !initial_expressions.empty()) {
    throw ConfigError("experiment '" + label +
                      "': give either a named initial data set or expressions, not both");
  }
  if (!(t_final >= 0.0) || !std::isfinite(t_final)) {
    throw ConfigError("experiment '" + label + "': final time must be finite and >= 0");
  }
  if (!(base_dx > 0.0)) throw ConfigError("experiment '" + label + "': base dx must be positive");
  if (!(domain_right() > domain_left())) {
    throw ConfigError("experiment '" + label + "': empty domain");
  }
  if (cfl_check_interval < 1) throw ConfigError("cfl_check_interval must be >= 1");
  controller().validate();
  const ModelDef m = build_model();
  if (species() != m.species()) {
    throw InputDataError("experiment '" + label + "': initial data has " +
                         std::to_string(species()) + " species, model '" + m.name + "' needs " +
                         std::to_string(m.species()));
  }
  if (const InitialData* d = registry_entry(*this); d && d->model != m.name) {
    throw InputDataError("initial data '" + d->name + "' belongs to model '" + d->model +
                         "', not '" + m.name + "'");
  }
  for (const SchemeConfig& s : schemes) s.validate(m);
  reference_scheme.validate(m);
  std::vector<int> all = levels;
  all.push_back(reference_level);
  for (int lv : levels) {
    if (lv >= reference_level) {
      throw ConfigError("experiment '" + label + "': reference level " +
                        std::to_string(reference_level) + " must be finer than level " +
                        std::to_string(lv));
    }
  }
  for (int lv : all) {
    const Grid g = grid(lv);
    for (const auto& comp : m.nonlocal) {
      for (const auto& term : comp.terms) {
        try {
          (void)support_cells(term.kernel, g.dx());
        } catch (const ConfigError& e) {
          throw ConfigError("experiment '" + label + "', level " + std::to_string(lv) + ": " +
                            e.what());
        }
      }
    }
  }
  if (!entropy_zetas.empty() && m.species() != 1) {
    throw ConfigError("entropy monitoring needs a scalar model");
  }
}

LipschitzBounds experiment_lipschitz(const Experiment& exp) {
  const ModelDef m = exp.build_model();
  const InitialProfile f = exp.profile();
  const int N = m.species();
  LipschitzBounds b;
  b.box.lo.assign(static_cast<std::size_t>(N), std::numeric_limits<double>::infinity());
  b.box.hi.assign(static_cast<std::size_t>(N), -std::numeric_limits<double>::infinity());
  const double a = exp.domain_left(), c = exp.domain_right();
  constexpr int kSamples = 4096;
  for (int i = 0; i <= kSamples; ++i) {
    const double x = a + (c - a) * i / kSamples;
    for (int k = 0; k < N; ++k) {
      const double v = f(k, x);
      if (!std::isfinite(v)) {
        throw InputDataError("initial data is not finite at x = " + format_double(x) +
                             " for species " + std::to_string(k));
      }
      b.box.lo[static_cast<std::size_t>(k)] = std::min(b.box.lo[static_cast<std::size_t>(k)], v);
      b.box.hi[static_cast<std::size_t>(k)] = std::max(b.box.hi[static_cast<std::size_t>(k)], v);
    }
  }
  // A declared invariant interval bounds the whole evolution, not just t = 0.
  if (m.rho_min && m.rho_max) {
    for (int k = 0; k < N; ++k) {
      auto& lo = b.box.lo[static_cast<std::size_t>(k)];
      auto& hi = b.box.hi[static_cast<std::size_t>(k)];
      lo = std::min(lo, *m.rho_min);
      hi = std::max(hi, *m.rho_max);
    }
  }
  b.flux = flux_lipschitz(m, b.box);
  b.source = source_lipschitz(m, b.box);
  return b;
}

void MonitorLog::append(MonitorRecord record) {
  if (!records_.empty() && !(record.time > records_.back().time)) {
    throw ContractError("monitor: time " + format_double(record.time) +
                        " does not increase past " + format_double(records_.back().time));
  }
  records_.push_back(std::move(record));
}

double MonitorLog::max_relative_mass_drift() const {
  if (records_.empty()) return 0.0;
  const auto& m0 = records_.front().mass;
  double worst = 0.0;
  for (const auto& r : records_) {
    for (std::size_t k = 0; k < m0.size(); ++k) {
      const double scale = std::max(std::abs(m0[k]), 1e-300);
      worst = std::max(worst, std::abs(r.mass[k] - m0[k]) / scale);
    }
  }
  return worst;
}

double MonitorLog::min_value() const {
  double v = std::numeric_limits<double>::infinity();
  for (const auto& r : records_) {
    for (double x : r.min) v = std::min(v, x);
  }
  return v;
}

double MonitorLog::max_abs_value() const {
  double v = 0.0;
  for (const auto& r : records_) {
    for (std::size_t k = 0; k < r.max.size(); ++k) {
      v = std::max({v, std::abs(r.max[k]), std::abs(r.min[k])});
    }
  }
  return v;
}

double MonitorLog::max_entropy_residual() const {
  double v = std::numeric_limits<double>::quiet_NaN();
  for (const auto& r : records_) {
    if (std::isnan(r.entropy_residual)) continue;
    v = std::isnan(v) ? r.entropy_residual : std::max(v, r.entropy_residual);
  }
  return v;
}

double MonitorLog::linf_growth_exponent() const {
  if (records_.empty()) return 0.0;
  auto linf = [](const MonitorRecord& r) {
    double v = 0.0;
    for (std::size_t k = 0; k < r.max.size(); ++k) v = std::max({v, std::abs(r.max[k]), std::abs(r.min[k])});
    return v;
  };
  const double base = linf(records_.front());
  const double t0 = records_.front().time;
  if (base <= 0.0) return 0.0;
  double c = 0.0;
  for (const auto& r : records_) {
    const double t = r.time - t0;
    if (t <= 0.0) continue;
    c = std::max(c, std::log(linf(r) / base) / t);
  }
  return c;
}

CsvTable MonitorLog::csv(const std::vector<std::string>& species_names) const {
  CsvTable t;
  t.header.push_back("time");
  for (const char* what : {"mass", "min", "max", "tv"}) {
    for (const auto& s : species_names) t.header.push_back(std::string(what) + "_" + s);
  }
  t.header.push_back("entropy_residual");
  for (const auto& r : records_) {
    std::vector<std::string> row{format_double(r.time)};
    for (const auto* v : {&r.mass, &r.min, &r.max, &r.tv}) {
      for (double x : *v) row.push_back(format_double(x));
    }
    row.push_back(std::isnan(r.entropy_residual) ? "" : format_double(r.entropy_residual));
    t.add_row(std::move(row));
  }
  return t;
}

MonitorRecord monitor_snapshot(const SystemState& state, const Grid& grid, Boundary bc) {
  MonitorRecord r;
  r.time = state.time;
  r.mass = total_mass(state, grid);
  r.tv = total_variation(state, bc);
  for (const Field& u : state.values) {
    const auto [lo, hi] = std::minmax_element(u.begin(), u.end());
    r.min.push_back(*lo);
    r.max.push_back(*hi);
  }
  return r;
}

RunResult run_simulation(const Experiment& exp, const SchemeConfig& scheme, int level,
                         const RunOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  exp.validate();
  const Grid grid = exp.grid(level);
  const ModelDef model = exp.build_model();
  scheme.validate(model);
  const TimeController ctl = exp.controller();
  const LipschitzBounds lip = experiment_lipschitz(exp);
  const WarningSink warn = options.warn ? options.warn : WarningSink(default_warning);

  RunResult res;
  res.lip_flux = lip.flux;
  res.lip_source = lip.source;
  res.dt = max_stable_dt(ctl, grid, lip.flux, lip.source);
  res.lambda = res.dt / grid.dx();
  res.state = init_cell_averages(exp.profile(), model.species(), grid);

  const Stepper stepper(model, grid, exp.bc, scheme);
  const bool entropy = !exp.entropy_zetas.empty() && scheme.scheme == SchemeKind::NT;
  const int interval = std::max(1, options.monitor_interval);
  if (options.monitor) res.log.append(monitor_snapshot(res.state, grid, exp.bc));

  res.min_dt = res.dt;
  StepTrace trace;
  while (res.state.time < ctl.t_final) {
    double step_dt = res.dt;
    if (ctl.adaptive) {
      const double bound = std::max(lip.flux, stepper.runtime_flux_bound(res.state));
      step_dt = max_stable_dt(ctl, grid, bound, lip.source);
      res.min_dt = std::min(res.min_dt, step_dt);
    }
    const double dt = clamp_to_final(ctl, res.state.time, step_dt);
    if (dt <= 0.0) break;
    if (res.steps % exp.cfl_check_interval == 0) {
      const double cfl = step_dt / grid.dx() * stepper.runtime_flux_bound(res.state);
      res.max_runtime_cfl = std::max(res.max_runtime_cfl, cfl);
      if (cfl > ctl.cfl_limit * (1.0 + 1e-9)) {
        std::ostringstream msg;
        msg << "CFL violated at step " << res.steps << " (t = " << res.state.time
            << "): lambda * L_F = " << cfl << " > " << ctl.cfl_limit;
        if (exp.strict_cfl) throw NumericalError(msg.str());
        ++res.cfl_warnings;
        warn(msg.str());
      }
    }
    SystemState next;
    try {
      next = stepper.step(res.state, dt, entropy ? &trace : nullptr);
    } catch (const NumericalError& e) {
      throw NumericalError("step " + std::to_string(res.steps) + " (t = " +
                           format_double(res.state.time) + "): " + e.what());
    }
    if (res.state.time + dt >= ctl.t_final - 1e-12 * std::max(1.0, ctl.t_final)) {
      next.time = ctl.t_final;
    }
    double residual = std::numeric_limits<double>::quiet_NaN();
    if (entropy) {
      residual = entropy_residual(model, grid, exp.bc, res.state, next, trace, exp.entropy_zetas);
    }
    res.state = std::move(next);
    ++res.steps;
    if (options.monitor && (res.steps % interval == 0 || res.state.time >= ctl.t_final)) {
      MonitorRecord r = monitor_snapshot(res.state, grid, exp.bc);
      r.entropy_residual = residual;
      res.log.append(std::move(r));
    }
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return res;
}

SystemState restrict_to_coarse(const SystemState& fine, int coarse_cells) {
  const int nf = fine.cells();
  if (coarse_cells <= 0 || nf % coarse_cells != 0 || !is_power_of_two(nf / coarse_cells)) {
    throw ContractError("restrict_to_coarse: " + std::to_string(nf) + " fine cells do not nest in " +
                        std::to_string(coarse_cells) + " coarse cells by a power of two");
  }
  const int r = nf / coarse_cells;
  SystemState out(fine.species(), coarse_cells);
  out.time = fine.time;
  for (int k = 0; k < fine.species(); ++k) {
    for (int j = 0; j < coarse_cells; ++j) {
      double acc = 0.0;
      for (int i = 0; i < r; ++i) acc += fine[k][static_cast<std::size_t>(j * r + i)];
      out[k][static_cast<std::size_t>(j)] = acc / r;
    }
  }
  return out;
}

double l1_error(const SystemState& a, const SystemState& b, const Grid& grid) {
  if (a.species() != b.species() || a.cells() != b.cells() || a.cells() != grid.cells()) {
    throw ContractError("l1_error: shape mismatch");
  }
  double acc = 0.0;
  for (int k = 0; k < a.species(); ++k) {
    for (std::size_t j = 0; j < a[k].size(); ++j) acc += std::abs(a[k][j] - b[k][j]);
  }
  return grid.dx() * acc;
}

double observed_rate(double coarse_error, double fine_error) {
  return std::log2(coarse_error / fine_error);
}

std::vector<ConvergenceRow> ConvergenceReport::scheme_rows(const std::string& scheme) const {
  std::vector<ConvergenceRow> out;
  for (const auto& r : rows) {
    if (r.scheme == scheme) out.push_back(r);
  }
  return out;
}

const ConvergenceRow& ConvergenceReport::row(const std::string& scheme, int level) const {
  for (const auto& r : rows) {
    if (r.scheme == scheme && r.level == level) return r;
  }
  throw ContractError("report has no row for " + scheme + " at level " + std::to_string(level));
}

CsvTable ConvergenceReport::csv(const std::string& prefix) const {
  CsvTable t;
  t.header = {"scheme", "n", "dx", "l1_error", "rate"};
  for (const auto& r : rows) {
    t.add_row({prefix + r.scheme, std::to_string(r.level), format_double(r.dx),
               format_double(r.error), std::isnan(r.rate) ? "" : format_double(r.rate)});
  }
  return t;
}

std::string reference_cache_key(const Experiment& exp) {
  std::ostringstream k;
  k << "nlnt-reference-v1|" << exp.model.name << '|' << format_double(exp.model.eta) << '|'
    << exp.model.kernel << '|' << exp.initial_data << '|';
  for (const auto& e : exp.initial_expressions) k << e << ';';
  k << '|' << format_double(exp.domain_left()) << '|' << format_double(exp.domain_right()) << '|'
    << format_double(exp.t_final) << '|' << to_string(exp.bc) << '|'
    << scheme_label(exp.reference_scheme) << '|' << format_double(exp.reference_scheme.theta)
    << '|' << exp.reference_scheme.clip.enabled << format_double(exp.reference_scheme.clip.C)
    << format_double(exp.reference_scheme.clip.delta) << '|' << exp.reference_level << '|'
    << format_double(exp.base_dx) << '|' << format_double(exp.time.cfl_limit) << '|'
    << format_double(exp.time.safety) << '|' << to_string(exp.time.mode) << '|'
    << format_double(exp.time.kappa) << '|' << format_double(exp.time.tau) << '|'
    << exp.time.adaptive;
  return k.str();
}

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::filesystem::path cache_path(const std::filesystem::path& dir, const std::string& key) {
  std::ostringstream name;
  name << "ref-" << std::hex << fnv1a(key) << ".bin";
  return dir / name.str();
}

constexpr char kCacheMagic[8] = {'N', 'L', 'N', 'T', 'R', 'E', 'F', '1'};

std::optional<SystemState> load_cached(const std::filesystem::path& path, const std::string& key,
                                       int species, int cells) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  char magic[8];
  std::uint64_t key_len = 0;
  std::int32_t n = 0, j = 0;
  double t = 0.0;
  in.read(magic, 8);
  in.read(reinterpret_cast<char*>(&key_len), sizeof key_len);
  if (!in || std::memcmp(magic, kCacheMagic, 8) != 0 || key_len > (1u << 20)) return std::nullopt;
  std::string stored(key_len, '\0');
  in.read(stored.data(), static_cast<std::streamsize>(key_len));
  in.read(reinterpret_cast<char*>(&n), sizeof n);
  in.read(reinterpret_cast<char*>(&j), sizeof j);
  in.read(reinterpret_cast<char*>(&t), sizeof t);
  if (!in || stored != key || n != species || j != cells) return std::nullopt;
  SystemState s(species, cells);
  s.time = t;
  for (auto& f : s.values) {
    in.read(reinterpret_cast<char*>(f.data()), static_cast<std::streamsize>(f.size() * sizeof(double)));
  }
  if (!in) return std::nullopt;
  return s;
}

void store_cached(const std::filesystem::path& path, const std::string& key,
                  const SystemState& s) {
  std::string buf(kCacheMagic, 8);
  auto put = [&](const void* p, std::size_t n) { buf.append(static_cast<const char*>(p), n); };
  const std::uint64_t key_len = key.size();
  const std::int32_t n = s.species(), j = s.cells();
  put(&key_len, sizeof key_len);
  buf += key;
  put(&n, sizeof n);
  put(&j, sizeof j);
  put(&s.time, sizeof s.time);
  for (const auto& f : s.values) put(f.data(), f.size() * sizeof(double));
  write_file_atomic(path, buf);
}

template <typename Job>
void run_parallel(std::size_t count, int threads, Job&& job) {
  const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, threads)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          job(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

SystemState reference_solution(const Experiment& exp, const StudyOptions& options) {
  const std::string key = reference_cache_key(exp);
  const int species = exp.species();
  const int cells = exp.cells(exp.reference_level);
  std::filesystem::path path;
  if (!options.cache_dir.empty()) {
    path = cache_path(options.cache_dir, key);
    if (auto cached = load_cached(path, key, species, cells)) {
      if (options.progress) options.progress("reference: cache hit " + path.string());
      return *cached;
    }
  }
  if (options.progress) {
    options.progress("reference: " + scheme_label(exp.reference_scheme) + " at level " +
                     std::to_string(exp.reference_level) + " (" + std::to_string(cells) +
                     " cells)");
  }
  RunOptions ro = options.run;
  ro.monitor = false;
  RunResult r = run_simulation(exp, exp.reference_scheme, exp.reference_level, ro);
  if (!path.empty()) store_cached(path, key, r.state);
  return std::move(r.state);
}

ConvergenceReport convergence_study(const Experiment& exp, const StudyOptions& options) {
  exp.validate();
  if (exp.levels.size() < 2) throw ConfigError("convergence study needs at least two levels");
  if (exp.schemes.empty()) throw ConfigError("convergence study needs at least one scheme");
  std::vector<int> levels = exp.levels;
  std::sort(levels.begin(), levels.end());
  if (std::adjacent_find(levels.begin(), levels.end()) != levels.end()) {
    throw ConfigError("convergence study: duplicate levels");
  }

  const SystemState reference = reference_solution(exp, options);

  struct Job {
    std::size_t scheme;
    int level;
  };
  std::vector<Job> jobs;
  for (std::size_t s = 0; s < exp.schemes.size(); ++s) {
    for (int lv : levels) jobs.push_back({s, lv});
  }
  std::vector<ConvergenceRow> rows(jobs.size());
  std::mutex progress_mutex;
  RunOptions ro = options.run;
  ro.monitor = false;
  run_parallel(jobs.size(), options.threads, [&](std::size_t i) {
    const Job& job = jobs[i];
    const SchemeConfig& sc = exp.schemes[job.scheme];
    RunResult r = run_simulation(exp, sc, job.level, ro);
    const Grid g = exp.grid(job.level);
    ConvergenceRow row;
    row.scheme = scheme_label(sc);
    row.level = job.level;
    row.dx = g.dx();
    row.error = l1_error(r.state, restrict_to_coarse(reference, g.cells()), g);
    row.lambda = r.lambda;
    row.seconds = r.seconds;
    rows[i] = row;
    if (options.progress) {
      std::lock_guard lock(progress_mutex);
      options.progress(row.scheme + " n=" + std::to_string(row.level) +
                       " error=" + format_double(row.error));
    }
  });

  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].scheme == rows[i - 1].scheme && rows[i].level == rows[i - 1].level + 1 &&
        rows[i].error > 0.0 && rows[i - 1].error > 0.0) {
      rows[i].rate = observed_rate(rows[i - 1].error, rows[i].error);
    }
  }
  ConvergenceReport rep;
  rep.experiment = exp.label;
  rep.rows = std::move(rows);
  rep.reference_scheme = scheme_label(exp.reference_scheme);
  rep.reference_level = exp.reference_level;
  rep.lambda = rep.rows.empty() ? 0.0 : rep.rows.front().lambda;
  return rep;
}

Comparison compare_schemes(const Experiment& exp, int level, const StudyOptions& options) {
  exp.validate();
  if (exp.schemes.empty()) throw ConfigError("compare needs at least one scheme");
  if (level >= exp.reference_level) throw ConfigError("compare level must be below the reference");
  const SystemState reference = reference_solution(exp, options);
  Comparison c{exp.grid(level), {}, {}, {}, {}};
  c.reference = restrict_to_coarse(reference, c.grid.cells());
  c.solutions.resize(exp.schemes.size());
  RunOptions ro = options.run;
  ro.monitor = false;
  run_parallel(exp.schemes.size(), options.threads, [&](std::size_t i) {
    c.solutions[i] = run_simulation(exp, exp.schemes[i], level, ro).state;
  });
  for (std::size_t i = 0; i < exp.schemes.size(); ++i) {
    c.schemes.push_back(scheme_label(exp.schemes[i]));
    c.errors.push_back(l1_error(c.solutions[i], c.reference, c.grid));
  }
  return c;
}

}  // namespace nlnt

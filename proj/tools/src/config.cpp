#include "nlnt_cli/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "nlnt/errors.hpp"
#include "nlnt/models.hpp"

namespace nlnt::cli {

namespace {

using json = nlohmann::json;

std::string type_name(const json& j) {
  if (j.is_number_integer()) return "integer";
  return j.type_name();
}

/// Reads one JSON object, remembering which keys were consumed so that
/// leftovers can be reported as unknown.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) fail(path_, "must be an object, got " + type_name(obj_));
  }

  std::string key_path(const std::string& key) const { return path_ + "." + key; }

  bool has(const std::string& key) const { return obj_.contains(key); }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return obj_.at(key);
  }

  std::string string(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_string()) fail(key_path(key), "must be a string, got " + type_name(v));
    return v.get<std::string>();
  }

  bool boolean(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_boolean()) fail(key_path(key), "must be a boolean, got " + type_name(v));
    return v.get<bool>();
  }

  double number(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number()) fail(key_path(key), "must be a number, got " + type_name(v));
    return v.get<double>();
  }

  double positive(const std::string& key) {
    const double x = number(key);
    if (!(x > 0.0)) fail(key_path(key), "must be positive");
    return x;
  }

  int integer(const std::string& key, int lo) {
    const json& v = raw(key);
    if (!v.is_number_integer()) fail(key_path(key), "must be an integer, got " + type_name(v));
    const auto x = v.get<long long>();
    if (x < lo || x > 1000000) {
      fail(key_path(key), "must be an integer >= " + std::to_string(lo));
    }
    return static_cast<int>(x);
  }

  /// Rejects any key that was never read.
  void finish() const {
    for (const auto& [key, _] : obj_.items()) {
      if (!seen_.count(key)) fail(key_path(key), "unknown key");
    }
  }

  [[noreturn]] static void fail(const std::string& path, const std::string& what) {
    throw ConfigError(path + ": " + what);
  }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

const json& array_at(ObjectReader& r, const std::string& key) {
  const json& v = r.raw(key);
  if (!v.is_array()) ObjectReader::fail(r.key_path(key), "must be an array, got " + type_name(v));
  return v;
}

std::vector<std::string> string_list(ObjectReader& r, const std::string& key) {
  const json& v = array_at(r, key);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_string()) {
      ObjectReader::fail(r.key_path(key) + "[" + std::to_string(i) + "]", "must be a string");
    }
    out.push_back(v[i].get<std::string>());
  }
  return out;
}

std::vector<double> number_list(ObjectReader& r, const std::string& key) {
  const json& v = array_at(r, key);
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) {
      ObjectReader::fail(r.key_path(key) + "[" + std::to_string(i) + "]", "must be a number");
    }
    out.push_back(v[i].get<double>());
  }
  return out;
}

std::vector<int> level_list(ObjectReader& r, const std::string& key) {
  const json& v = array_at(r, key);
  std::vector<int> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number_integer() || v[i].get<long long>() < 0 || v[i].get<long long>() > 30) {
      ObjectReader::fail(r.key_path(key) + "[" + std::to_string(i) + "]",
                         "must be an integer in [0, 30]");
    }
    out.push_back(v[i].get<int>());
  }
  if (out.empty()) ObjectReader::fail(r.key_path(key), "must not be empty");
  if (!std::is_sorted(out.begin(), out.end()) ||
      std::adjacent_find(out.begin(), out.end()) != out.end()) {
    ObjectReader::fail(r.key_path(key), "must be strictly increasing");
  }
  return out;
}

ClipConfig read_clip(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  ClipConfig c;
  if (r.has("enabled")) c.enabled = r.boolean("enabled");
  if (r.has("C")) c.C = r.positive("C");
  if (r.has("delta")) c.delta = r.positive("delta");
  r.finish();
  try {
    c.validate();
  } catch (const ConfigError& e) {
    ObjectReader::fail(path, e.what());
  }
  return c;
}

double checked_theta(double theta, const std::string& path) {
  if (!(theta > 0.0 && theta <= 1.0)) ObjectReader::fail(path, "theta must lie in (0, 1]");
  return theta;
}

std::string default_initial_data(const std::string& model) {
  if (model == "keyfitz-kranzer") return "kk-smooth";
  if (model == "arrhenius") return "arrhenius-smooth";
  if (model == "multilane") return "multilane-smooth";
  if (model == "nonlocal-euler") return "euler-smooth";
  if (model == "garz") return "garz-smooth";
  throw ConfigError("unknown model '" + model + "'");
}

// LxF diffusion: the Keyfitz-Kranzer benchmarks use 1/3 for both LxF schemes.
double model_theta(const std::string& model, SchemeKind kind) {
  if (model == "keyfitz-kranzer") return 1.0 / 3.0;
  return default_theta(kind);
}

SchemeConfig read_scheme(const json& j, const std::string& path, const std::string& model,
                         const std::optional<double>& theta, const std::optional<ClipConfig>& clip) {
  SchemeConfig s;
  std::optional<double> own_theta;
  std::optional<ClipConfig> own_clip;
  const auto parse = [&](const std::string& name) {
    try {
      return parse_scheme(name);
    } catch (const ConfigError& e) {
      ObjectReader::fail(path, e.what());
    }
  };
  if (j.is_string()) {
    s = parse(j.get<std::string>());
  } else {
    ObjectReader r(j, path);
    s = parse(r.string("name"));
    if (r.has("theta")) own_theta = checked_theta(r.number("theta"), r.key_path("theta"));
    if (r.has("clip")) own_clip = read_clip(r.raw("clip"), r.key_path("clip"));
    r.finish();
  }
  s.theta = own_theta ? *own_theta : theta ? *theta : model_theta(model, s.scheme);
  if (own_clip) {
    s.clip = *own_clip;
  } else if (clip) {
    s.clip = *clip;
  }
  return s;
}

void read_cfl(const json& j, const std::string& path, Experiment& exp) {
  ObjectReader r(j, path);
  TimeController& t = exp.time;
  if (r.has("safety")) {
    t.safety = r.positive("safety");
    if (t.safety > 1.0) ObjectReader::fail(path + ".safety", "must lie in (0, 1]");
  }
  if (r.has("limit")) t.cfl_limit = r.positive("limit");
  if (r.has("mode")) t.mode = parse_time_step_mode(r.string("mode"));
  if (r.has("kappa")) t.kappa = r.positive("kappa");
  if (r.has("tau")) t.tau = r.positive("tau");
  if (r.has("adaptive")) t.adaptive = r.boolean("adaptive");
  if (r.has("check_interval")) exp.cfl_check_interval = r.integer("check_interval", 1);
  if (r.has("strict")) exp.strict_cfl = r.boolean("strict");
  r.finish();
}

void read_output(const json& j, const std::string& path, RunConfig& cfg) {
  ObjectReader r(j, path);
  if (r.has("dir")) cfg.out_dir = r.string("dir");
  if (r.has("monitor")) cfg.write_monitor = r.boolean("monitor");
  if (r.has("monitor_interval")) cfg.monitor_interval = r.integer("monitor_interval", 1);
  r.finish();
}

RunConfig build(const json& doc) {
  ObjectReader r(doc, "$");
  RunConfig cfg;
  Experiment& exp = cfg.experiment;

  if (r.has("command")) cfg.command = parse_command(r.string("command"));
  if (r.has("description")) (void)r.string("description");
  if (!r.has("model")) ObjectReader::fail("$.model", "is required");
  exp.model.name = r.string("model");
  (void)default_eta(exp.model.name);  // rejects unknown names early
  exp.label = r.has("label") ? r.string("label") : exp.model.name;
  if (r.has("eta")) exp.model.eta = r.positive("eta");
  if (!r.has("T")) ObjectReader::fail("$.T", "is required");
  exp.t_final = r.number("T");
  if (!(exp.t_final >= 0.0)) ObjectReader::fail("$.T", "must be >= 0");

  if (r.has("kernel")) {
    const json& k = r.raw("kernel");
    if (k.is_string()) {
      cfg.kernels = {k.get<std::string>()};
    } else if (k.is_array()) {
      cfg.kernels = string_list(r, "kernel");
      if (cfg.kernels.empty()) ObjectReader::fail("$.kernel", "must not be empty");
    } else {
      ObjectReader::fail("$.kernel", "must be a string or an array of strings");
    }
  } else {
    cfg.kernels = {default_kernel(exp.model.name)};
  }
  exp.model.kernel = cfg.kernels.front();

  if (r.has("initial_data") && r.has("initial_expressions")) {
    ObjectReader::fail("$.initial_data", "give either initial_data or initial_expressions");
  }
  if (r.has("initial_expressions")) {
    exp.initial_expressions = string_list(r, "initial_expressions");
  } else {
    exp.initial_data =
        r.has("initial_data") ? r.string("initial_data") : default_initial_data(exp.model.name);
  }
  if (r.has("domain")) {
    const std::vector<double> d = number_list(r, "domain");
    if (d.size() != 2 || !(d[1] > d[0])) {
      ObjectReader::fail("$.domain", "must be [left, right] with left < right");
    }
    exp.x_left = d[0];
    exp.x_right = d[1];
  }
  if (r.has("bc")) exp.bc = parse_boundary(r.string("bc"));
  if (r.has("base_dx")) exp.base_dx = r.positive("base_dx");
  if (r.has("levels")) exp.levels = level_list(r, "levels");
  if (r.has("level")) cfg.level = r.integer("level", 0);
  if (r.has("reference_level")) exp.reference_level = r.integer("reference_level", 0);

  std::optional<double> theta;
  if (r.has("theta")) theta = checked_theta(r.number("theta"), "$.theta");
  std::optional<ClipConfig> clip;
  if (r.has("clip")) clip = read_clip(r.raw("clip"), "$.clip");

  const ModelDef model = make_model(exp.model);
  const bool product = model.product.has_value();
  if (r.has("schemes")) {
    const json& list = array_at(r, "schemes");
    if (list.empty()) ObjectReader::fail("$.schemes", "must not be empty");
    for (std::size_t i = 0; i < list.size(); ++i) {
      exp.schemes.push_back(read_scheme(list[i], "$.schemes[" + std::to_string(i) + "]",
                                        exp.model.name, theta, clip));
    }
  } else {
    std::vector<std::string> names{"LxF1", "LxF2", "NT-v1"};
    if (product) names.push_back("NT-v2");
    for (const auto& n : names) {
      exp.schemes.push_back(read_scheme(json(n), "$.schemes", exp.model.name, theta, clip));
    }
  }
  exp.reference_scheme = parse_scheme(r.has("reference_scheme") ? r.string("reference_scheme")
                                                                 : (product ? "NT-v2" : "NT-v1"));
  if (exp.reference_scheme.scheme == SchemeKind::NT && clip) exp.reference_scheme.clip = *clip;
  exp.reference_scheme.theta = model_theta(exp.model.name, exp.reference_scheme.scheme);

  if (r.has("cfl")) read_cfl(r.raw("cfl"), "$.cfl", exp);
  if (r.has("entropy_zetas")) exp.entropy_zetas = number_list(r, "entropy_zetas");
  if (r.has("output")) read_output(r.raw("output"), "$.output", cfg);
  if (r.has("cache_dir")) cfg.cache_dir = r.string("cache_dir");
  if (r.has("threads")) cfg.threads = r.integer("threads", 1);
  if (r.has("verbose")) cfg.verbose = r.boolean("verbose");
  r.finish();

  cfg.levels = exp.levels;
  cfg.set_command(cfg.command);
  for (const auto& k : cfg.kernels) cfg.experiment_for_kernel(k).validate();
  return cfg;
}

}  // namespace

Command parse_command(std::string_view name) {
  if (name == "run") return Command::Run;
  if (name == "converge") return Command::Converge;
  if (name == "compare") return Command::Compare;
  throw ConfigError("unknown command '" + std::string(name) +
                    "' (expected run, converge or compare)");
}

std::string to_string(Command command) {
  switch (command) {
    case Command::Run:
      return "run";
    case Command::Converge:
      return "converge";
    case Command::Compare:
      return "compare";
  }
  return "?";
}

std::filesystem::path RunConfig::reference_cache() const {
  return cache_dir.empty() ? out_dir / "reference-cache" : cache_dir;
}

void RunConfig::set_command(Command c) {
  command = c;
  if (c == Command::Converge) {
    experiment.levels = levels;
    return;
  }
  if (kernels.size() > 1) {
    throw ConfigError("$.kernel: a kernel list is only supported by converge");
  }
  experiment.levels = {level};
  if (experiment.reference_level <= level) {
    if (c == Command::Compare) {
      throw ConfigError("$.reference_level must be finer than $.level for compare");
    }
    experiment.reference_level = level + 1;  // unused by run
  }
}

Experiment RunConfig::experiment_for_kernel(const std::string& kernel) const {
  Experiment e = experiment;
  e.model.kernel = kernel;
  if (kernels.size() > 1) e.label = experiment.label + "-" + kernel;
  return e;
}

RunConfig parse_config(std::string_view json_text, std::string_view origin) {
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string(origin) + ": invalid JSON: " + e.what());
  }
  try {
    return build(doc);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(origin) + ": " + e.what());
  }
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  RunConfig cfg = parse_config(text.str(), path.string());
  if (cfg.experiment.label == cfg.experiment.model.name) {
    cfg.experiment.label = path.stem().string();
  }
  return cfg;
}

std::vector<std::filesystem::path> preset_search_path() {
  std::vector<std::filesystem::path> dirs;
  if (const char* env = std::getenv("NLNT_PRESET_DIR"); env && *env) dirs.emplace_back(env);
#ifdef NLNT_SOURCE_PRESET_DIR
  dirs.emplace_back(NLNT_SOURCE_PRESET_DIR);
#endif
#ifdef NLNT_INSTALL_PRESET_DIR
  dirs.emplace_back(NLNT_INSTALL_PRESET_DIR);
#endif
  return dirs;
}

std::vector<std::string> preset_names() {
  std::set<std::string> names;
  for (const auto& dir : preset_search_path()) {
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec)) continue;
    for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
      const auto& p = entry.path();
      if (p.extension() == ".json" && p.stem() != "schema") names.insert(p.stem().string());
    }
  }
  return {names.begin(), names.end()};
}

std::filesystem::path find_preset(std::string_view name) {
  for (const auto& dir : preset_search_path()) {
    const auto p = dir / (std::string(name) + ".json");
    std::error_code ec;
    if (std::filesystem::is_regular_file(p, ec)) return p;
  }
  throw ConfigError("unknown preset '" + std::string(name) + "' (see list-presets)");
}

}  // namespace nlnt::cli

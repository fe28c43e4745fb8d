#include "nlnt/initial_data.hpp"

#include <cmath>
#include <numbers>

#include "nlnt/errors.hpp"
#include "nlnt/expression.hpp"

namespace nlnt {

namespace {

constexpr double kPi = std::numbers::pi;

double indicator(double x, double a, double b) { return (x > a && x < b) ? 1.0 : 0.0; }

std::vector<InitialData> build_registry() {
  std::vector<InitialData> r;
  r.push_back({"kk-smooth", "keyfitz-kranzer", 2,
               [](int k, double x) {
                 return k == 0 ? -0.1 - 0.2 * std::sin(kPi * x) : 0.2 + 0.1 * std::sin(kPi * x);
               },
               -1.0, 1.0, "rho1 = -0.1 - 0.2 sin(pi x), rho2 = 0.2 + 0.1 sin(pi x)"});
  r.push_back({"kk-discontinuous", "keyfitz-kranzer", 2,
               [](int k, double x) { return (k == 0 ? 0.25 : 1.0) * indicator(x, 1.0, 3.0); },
               0.0, 4.0, "rho1 = 0.25 on (1, 3), rho2 = 1 on (1, 3), zero elsewhere"});
  r.push_back({"arrhenius-smooth", "arrhenius", 1,
               [](int, double x) { return 0.5 + 0.4 * std::sin(kPi * x); }, -1.0, 1.0,
               "rho = 0.5 + 0.4 sin(pi x)"});
  r.push_back({"arrhenius-discontinuous", "arrhenius", 1,
               [](int, double x) { return (x >= -0.25 && x <= 0.25) ? 1.0 : 0.2; }, -1.0, 1.0,
               "rho = 0.2 + 0.8 on [-1/4, 1/4]"});
  r.push_back({"multilane-smooth", "multilane", 2,
               [](int k, double x) {
                 return k == 0 ? 0.5 + 0.5 * std::sin(kPi * x)
                               : 0.25 + 0.25 * std::cos(2.0 * kPi * x);
               },
               -1.0, 1.0, "rho1 = 0.5 + 0.5 sin(pi x), rho2 = 0.25 + 0.25 cos(2 pi x)"});
  r.push_back({"multilane-discontinuous", "multilane", 2,
               [](int k, double x) {
                 return k == 0 ? multilane_bump(2.0 * x - 0.5) : multilane_bump(2.0 * x);
               },
               -1.0, 2.0, "rho1 = q(2x - 0.5), rho2 = q(2x), q(y) = 4y^2(1 - y^2) on (0, 1)"});
  r.push_back({"euler-smooth", "nonlocal-euler", 2,
               [](int k, double x) {
                 return k == 0 ? 0.2 + 0.1 * std::sin(kPi * x)
                               : 0.4 + 0.3 * std::cos(kPi * x) / kPi;
               },
               -1.0, 1.0, "rho = 0.2 + 0.1 sin(pi x), u = 0.4 + 0.3 cos(pi x) / pi"});
  r.push_back({"euler-riemann", "nonlocal-euler", 2,
               [](int k, double x) {
                 if (k == 0) return x <= 0.0 ? 0.5 : 1.5;
                 return x <= 0.0 ? -1.0 : 1.0;
               },
               -1.0, 1.0, "rho = 0.5 | 1.5, u = -1 | 1, split at x = 0"});
  r.push_back({"garz-smooth", "garz", 2,
               [](int k, double x) {
                 const double rho = 0.3 + 0.2 * std::sin(kPi * x);
                 return k == 0 ? rho : rho * (1.9 + 1.25 * std::sin(kPi * x));
               },
               -1.0, 1.0, "rho = 0.3 + 0.2 sin(pi x), q = rho (1.9 + 1.25 sin(pi x))"});
  r.push_back({"garz-jump", "garz", 2,
               [](int k, double x) {
                 if (k == 0) return 0.05;
                 return x <= 0.0 ? 7.0 / 400.0 : 1.0 / 25.0;
               },
               -1.0, 1.0, "rho = 0.05, q = 7/400 | 1/25 split at x = 0 (w = 0.35 | 0.8)"});
  return r;
}

const std::vector<InitialData>& registry() {
  static const std::vector<InitialData> r = build_registry();
  return r;
}

}  // namespace

double multilane_bump(double y) { return (y > 0.0 && y < 1.0) ? 4.0 * y * y * (1.0 - y * y) : 0.0; }

const InitialData& find_initial_data(std::string_view name) {
  for (const InitialData& d : registry()) {
    if (d.name == name) return d;
  }
  std::string known;
  for (const InitialData& d : registry()) known += (known.empty() ? "" : ", ") + d.name;
  throw InputDataError("unknown initial data '" + std::string(name) + "' (known: " + known + ")");
}

std::vector<std::string> initial_data_names() {
  std::vector<std::string> out;
  for (const InitialData& d : registry()) out.push_back(d.name);
  return out;
}

InitialProfile inline_profile(const std::vector<std::string>& expressions) {
  if (expressions.empty()) throw InputDataError("inline initial data: no expressions");
  std::vector<Expression> parsed;
  for (const std::string& e : expressions) parsed.push_back(Expression::parse(e));
  return [parsed = std::move(parsed)](int k, double x) {
    return parsed.at(static_cast<std::size_t>(k))(x);
  };
}

}  // namespace nlnt

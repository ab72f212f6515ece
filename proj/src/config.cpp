#include "toroflow/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace toroflow {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, const std::string& where) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size() || !std::isfinite(d))
      throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError(where + ": expected a finite number, got '" + v + "'");
  }
}

long parse_int(const std::string& v, const std::string& where) {
  try {
    std::size_t pos = 0;
    const long n = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return n;
  } catch (const std::exception&) {
    throw ConfigError(where + ": expected an integer, got '" + v + "'");
  }
}

}  // namespace

void parse_harmonics(TrigPoly& poly, const std::string& cos_list,
                     const std::string& sin_list) {
  const auto feed = [&poly](const std::string& list, bool is_cos) {
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) continue;
      const auto colon = item.find(':');
      if (colon == std::string::npos)
        throw ConfigError("harmonic list entry '" + item +
                          "' is not of the form k:coeff");
      const long k = parse_int(trim(item.substr(0, colon)), "harmonic index");
      const double c =
          parse_double(trim(item.substr(colon + 1)), "harmonic coefficient");
      if (k < 0) throw ConfigError("harmonic index must be >= 0");
      if (is_cos)
        poly.add_cos(static_cast<int>(k), c);
      else
        poly.add_sin(static_cast<int>(k), c);
    }
  };
  feed(cos_list, true);
  feed(sin_list, false);
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");

  RunConfig cfg;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = path + ":" + std::to_string(lineno);

    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(where + ": malformed section header '" + line + "'");
      section = trim(line.substr(1, line.size() - 2));
      static const std::set<std::string> known{"chart", "grid", "tolerances",
                                              "run"};
      if (!known.count(section))
        throw ConfigError(where + ": unknown section [" + section + "]");
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(where + ": expected key = value, got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    const std::string full = section.empty() ? key : section + "." + key;

    if (full == "chart.family") cfg.family = val;
    else if (full == "chart.psi0") cfg.psi0 = parse_double(val, where);
    else if (full == "chart.r0") cfg.r0 = parse_double(val, where);
    else if (full == "chart.eps") cfg.eps = parse_double(val, where);
    else if (full == "chart.eps1") cfg.eps1 = parse_double(val, where);
    else if (full == "chart.eps2") cfg.eps2 = parse_double(val, where);
    else if (full == "chart.eps3") cfg.eps3 = parse_double(val, where);
    else if (full == "chart.profile") cfg.profile = val;
    else if (full == "chart.f_cos") cfg.f_cos = val;
    else if (full == "chart.f_sin") cfg.f_sin = val;
    else if (full == "chart.dzg") cfg.dzg = val;
    else if (full == "chart.dz_cos") cfg.dz_cos = val;
    else if (full == "chart.dz_sin") cfg.dz_sin = val;
    else if (full == "chart.g_cos") cfg.g_cos = val;
    else if (full == "chart.g_sin") cfg.g_sin = val;
    else if (full == "grid.npsi") cfg.npsi = static_cast<int>(parse_int(val, where));
    else if (full == "grid.ntheta") cfg.ntheta = static_cast<int>(parse_int(val, where));
    else if (full == "grid.nzeta") cfg.nzeta = static_cast<int>(parse_int(val, where));
    else if (full == "grid.psi_min") cfg.psi_min = parse_double(val, where);
    else if (full == "grid.psi_max") cfg.psi_max = parse_double(val, where);
    else if (full == "tolerances.identity") cfg.identity_tol = parse_double(val, where);
    else if (full == "tolerances.fd") cfg.fd_tol = parse_double(val, where);
    else if (full == "run.seed")
      cfg.seed = static_cast<std::uint64_t>(parse_int(val, where));
    else
      throw ConfigError(where + ": unknown key '" + full + "'");
  }
  cfg.validate();
  return cfg;
}

void RunConfig::validate() const {
  if (family != "axisymmetric" && family != "fperturbed" &&
      family != "general_cc1")
    throw ConfigError("unknown chart family '" + family +
                      "' (expected axisymmetric | fperturbed | general_cc1)");
  if (profile != "sin2" && profile != "sin2of3" && profile != "mix" &&
      profile != "fourier")
    throw ConfigError("unknown profile '" + profile +
                      "' (expected sin2 | sin2of3 | mix | fourier)");
  if (dzg != "example" && dzg != "custom")
    throw ConfigError("unknown dzg mode '" + dzg +
                      "' (expected example | custom)");
  if (!(psi0 > 0.0)) throw ConfigError("psi0 must be positive");
  if (!(r0 > 0.0)) throw ConfigError("r0 must be positive");
  if (!(eps >= 0.0) || !(eps1 >= 0.0))
    throw ConfigError("perturbation amplitudes eps and eps1 must be >= 0");
  if (npsi < 2 || ntheta < 2 || nzeta < 2)
    throw ConfigError("grid counts must all be >= 2");
  if (!(psi_min >= 0.0) || !(psi_min < psi_max) || !(psi_max < psi0))
    throw ConfigError(
        "shell must satisfy 0 <= psi_min < psi_max < psi0 (got [" +
        std::to_string(psi_min) + ", " + std::to_string(psi_max) + "], psi0 " +
        std::to_string(psi0) + ")");
  if (!(identity_tol > 0.0) || !(fd_tol > 0.0))
    throw ConfigError("tolerances must be positive");
}

ChartFamily RunConfig::make_chart() const {
  validate();
  const auto fspec = [this]() -> FSpec {
    if (profile == "sin2") return FSpec::sin2();
    if (profile == "sin2of3") return FSpec::sin2of3();
    if (profile == "mix") return FSpec::mix();
    TrigPoly series;
    parse_harmonics(series, f_cos, f_sin);
    try {
      return FSpec::fourier(std::move(series));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  };

  if (family == "axisymmetric") return ChartFamily::axisymmetric(psi0, r0);
  if (family == "fperturbed")
    return ChartFamily::f_perturbed(psi0, r0, eps, fspec());

  DzGPair pair;
  if (dzg == "example") {
    pair = DzGPair::example();
  } else {
    parse_harmonics(pair.dz, dz_cos, dz_sin);
    parse_harmonics(pair.g, g_cos, g_sin);
  }
  try {
    return ChartFamily::general_cc1(psi0, r0, eps1, eps2, eps3, fspec(),
                                    std::move(pair));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace toroflow

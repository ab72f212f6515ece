#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "toroflow/chart.hpp"

namespace toroflow {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Run parameters: chart family and shape, sampling grid, tolerances, seed.
/// Defaults reproduce the reference configuration (unit-radius ring, sin^2
/// profile, eps = 0.3).
struct RunConfig {
  // [chart]
  std::string family = "fperturbed";  // axisymmetric | fperturbed | general_cc1
  double psi0 = 1.0;
  double r0 = 1.0;
  double eps = 0.3;
  double eps1 = 0.5;
  double eps2 = 0.05;
  double eps3 = 0.005;
  std::string profile = "sin2";  // sin2 | sin2of3 | mix | fourier
  std::string f_cos;             // "k:coeff,k:coeff" when profile = fourier
  std::string f_sin;
  std::string dzg = "example";  // example | custom
  std::string dz_cos, dz_sin, g_cos, g_sin;

  // [grid]
  int npsi = 10;
  int ntheta = 32;
  int nzeta = 32;
  double psi_min = 0.6;
  double psi_max = 0.95;

  // [tolerances]
  double identity_tol = 1e-11;
  double fd_tol = 1e-7;

  // [run]
  std::uint64_t seed = 20240813;

  static RunConfig from_file(const std::string& path);

  /// Throws ConfigError on out-of-range or inconsistent settings.
  void validate() const;

  ChartFamily make_chart() const;
  DomainSpec domain() const { return {psi_min, psi_max}; }
};

/// Parse "k:coeff,k:coeff" harmonic lists into a trig polynomial.
void parse_harmonics(TrigPoly& poly, const std::string& cos_list,
                     const std::string& sin_list);

}  // namespace toroflow

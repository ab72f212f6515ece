#pragma once

#include <string>

#include "toroflow/fields.hpp"

namespace toroflow {

/// Barotropic closure: specific enthalpy h as a function of density, with
/// its inverse and the matching thermodynamic pressure (dP/drho = rho dh/drho).
class BarotropicLaw {
 public:
  /// h = kappa gamma / (gamma - 1) rho^(gamma - 1); gamma > 1, kappa > 0.
  static BarotropicLaw polytropic(double kappa, double gamma);
  /// h = c2 ln(rho); unit reference density.
  static BarotropicLaw isothermal(double c2);

  double enthalpy(double rho) const;
  /// Solve h(rho) = value; throws std::domain_error with the offending value
  /// when it falls outside the law's range.
  double enthalpy_inverse(double value) const;
  double pressure(double rho) const;
  const std::string& name() const { return name_; }

 private:
  enum class Kind { Polytropic, Isothermal };
  BarotropicLaw(Kind k, double a, double b);
  Kind kind_;
  double kappa_ = 1.0;   // kappa, or c2 for isothermal
  double gamma_ = 2.0;
  std::string name_;
};

/// Density from the Bernoulli relation h(rho) = -psi - |u|^2 / 2.
double density(const BarotropicLaw& law, const ChartFamily& chart,
               const Coords& c);
double density_cartesian(const BarotropicLaw& law, const ChartFamily& chart,
                         const Vec3& p);

/// Mass source S = div(rho u) by the five-point stencil.
double source_fd(const BarotropicLaw& law, const ChartFamily& chart,
                 const Vec3& p, double h);

/// Constant-density source rho0 div u, closed form.
double source_constant_density(const ChartFamily& chart, const Coords& c,
                               double rho0);

/// Potential defect V = -psi - |u|^2/2 - h(rho); identically zero when rho
/// comes from density(), generally nonzero for a supplied density.
double potential(const BarotropicLaw& law, const ChartFamily& chart,
                 const Coords& c);
double potential(const BarotropicLaw& law, const ChartFamily& chart,
                 const Coords& c, double rho);

/// Midpoint-rule integral of div w over the shell (volume element |det d1|).
/// With w = rho u it measures the net mass flux through the shell boundary,
/// which vanishes because the flow is tangent to every psi level.
double shell_divergence_integral(const VectorField& w, const ChartFamily& chart,
                                 const DomainSpec& dom, int npsi, int ntheta,
                                 int nzeta, double h);
double shell_source_integral(const BarotropicLaw& law,
                             const ChartFamily& chart, const DomainSpec& dom,
                             int npsi, int ntheta, int nzeta, double h);

}  // namespace toroflow

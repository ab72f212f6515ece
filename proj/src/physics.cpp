#include "toroflow/physics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "toroflow/geometry.hpp"
#include "toroflow/sampling.hpp"

namespace toroflow {

BarotropicLaw::BarotropicLaw(Kind k, double a, double b)
    : kind_(k), kappa_(a), gamma_(b) {
  std::ostringstream os;
  if (kind_ == Kind::Polytropic)
    os << "polytropic(kappa=" << kappa_ << ",gamma=" << gamma_ << ")";
  else
    os << "isothermal(c2=" << kappa_ << ")";
  name_ = os.str();
}

BarotropicLaw BarotropicLaw::polytropic(double kappa, double gamma) {
  if (!(kappa > 0.0) || !(gamma > 1.0))
    throw std::invalid_argument(
        "BarotropicLaw::polytropic: need kappa > 0 and gamma > 1");
  return BarotropicLaw(Kind::Polytropic, kappa, gamma);
}

BarotropicLaw BarotropicLaw::isothermal(double c2) {
  if (!(c2 > 0.0))
    throw std::invalid_argument("BarotropicLaw::isothermal: need c2 > 0");
  return BarotropicLaw(Kind::Isothermal, c2, 0.0);
}

double BarotropicLaw::enthalpy(double rho) const {
  if (!(rho > 0.0))
    throw std::domain_error("BarotropicLaw::enthalpy: density must be positive");
  if (kind_ == Kind::Polytropic)
    return kappa_ * gamma_ / (gamma_ - 1.0) * std::pow(rho, gamma_ - 1.0);
  return kappa_ * std::log(rho);
}

double BarotropicLaw::enthalpy_inverse(double value) const {
  if (kind_ == Kind::Polytropic) {
    if (!(value > 0.0)) {
      std::ostringstream os;
      os << "BarotropicLaw::enthalpy_inverse: value " << value
         << " is outside the range of the polytropic enthalpy (positive "
            "reals); the Bernoulli level -psi - |u|^2/2 must stay positive";
      throw std::domain_error(os.str());
    }
    return std::pow(value * (gamma_ - 1.0) / (kappa_ * gamma_),
                    1.0 / (gamma_ - 1.0));
  }
  return std::exp(value / kappa_);
}

double BarotropicLaw::pressure(double rho) const {
  if (kind_ == Kind::Polytropic) return kappa_ * std::pow(rho, gamma_);
  return kappa_ * rho;
}

double density(const BarotropicLaw& law, const ChartFamily& chart,
               const Coords& c) {
  const Jet2 jet = jet_eval(chart, c);
  const double u2 = jet.d1.col(kTheta).squaredNorm();
  return law.enthalpy_inverse(-c.psi - 0.5 * u2);
}

double density_cartesian(const BarotropicLaw& law, const ChartFamily& chart,
                         const Vec3& p) {
  return density(law, chart, inverse(chart, p));
}

double source_fd(const BarotropicLaw& law, const ChartFamily& chart,
                 const Vec3& p, double h) {
  const VectorField u = velocity_field(chart);
  const VectorField rho_u = [&](const Vec3& q) -> Vec3 {
    return density_cartesian(law, chart, q) * u(q);
  };
  return fd_divergence(rho_u, p, h);
}

double source_constant_density(const ChartFamily& chart, const Coords& c,
                               double rho0) {
  return rho0 * divergence_analytic(chart, c);
}

double potential(const BarotropicLaw& law, const ChartFamily& chart,
                 const Coords& c, double rho) {
  const Jet2 jet = jet_eval(chart, c);
  const double u2 = jet.d1.col(kTheta).squaredNorm();
  return -c.psi - 0.5 * u2 - law.enthalpy(rho);
}

double potential(const BarotropicLaw& law, const ChartFamily& chart,
                 const Coords& c) {
  return potential(law, chart, c, density(law, chart, c));
}

double shell_divergence_integral(const VectorField& w, const ChartFamily& chart,
                                 const DomainSpec& dom, int npsi, int ntheta,
                                 int nzeta, double h) {
  const std::size_t n =
      static_cast<std::size_t>(npsi) * static_cast<std::size_t>(ntheta) *
      static_cast<std::size_t>(nzeta);
  std::vector<double> cell(n);
  const double dpsi = (dom.psi_max - dom.psi_min) / npsi;
  const double dtheta = kTwoPi / ntheta;
  const double dzeta = kTwoPi / nzeta;
  parallel_for(n, [&](std::size_t idx) {
    const int iz = static_cast<int>(idx) % nzeta;
    const int it = (static_cast<int>(idx) / nzeta) % ntheta;
    const int ip = static_cast<int>(idx) / (nzeta * ntheta);
    const Coords c{dom.psi_min + (ip + 0.5) * dpsi, (it + 0.5) * dtheta,
                   (iz + 0.5) * dzeta};
    const Jet2 jet = jet_eval(chart, c);
    cell[idx] = fd_divergence(w, jet.x, h) * std::abs(jet.d1.determinant()) *
                dpsi * dtheta * dzeta;
  });
  return pairwise_sum(cell);
}

double shell_source_integral(const BarotropicLaw& law,
                             const ChartFamily& chart, const DomainSpec& dom,
                             int npsi, int ntheta, int nzeta, double h) {
  const VectorField u = velocity_field(chart);
  const VectorField rho_u = [&](const Vec3& q) -> Vec3 {
    return density_cartesian(law, chart, q) * u(q);
  };
  return shell_divergence_integral(rho_u, chart, dom, npsi, ntheta, nzeta, h);
}

}  // namespace toroflow

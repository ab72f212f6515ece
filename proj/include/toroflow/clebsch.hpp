#pragma once

#include "toroflow/geometry.hpp"

namespace toroflow {

/// How to evaluate the steady velocity at a point.
enum class VelocityRep {
  Tangent,    // minus the theta-column of the position Jacobian
  Covariant,  // -(g_{psi theta} grad psi + g_{theta theta} grad theta
              //   + g_{zeta theta} grad zeta)
  Clebsch     // grad Phi + psi grad theta + alpha grad zeta
};

/// Parameters of the potential construction.  chi is normalized to vanish on
/// the psi_ref level; quadratures are adaptive Gauss-Kronrod.
struct ClebschContext {
  const ChartFamily* chart = nullptr;
  double psi_ref = 0.775;
  double quad_tol = 1e-13;
  double theta_indep_tol = 1e-10;
};

/// Context with chi normalized at the midpoint of the shell.
ClebschContext make_clebsch_context(const ChartFamily& chart,
                                    const DomainSpec& dom);

/// chi_Psi(psi, zeta) = -g_{psi theta}(psi, 0, zeta), re-derived at
/// theta in {pi/2, pi, 3pi/2} through
///   theta + int_0^theta d g_{theta theta}/d psi  -  g_{psi theta}
/// whose theta-independence is exactly the first compatibility condition;
/// throws std::runtime_error when the re-derivations disagree.
double chi_psi(const ClebschContext& ctx, double psi, double zeta);

/// Same value without the cross-check (used inside quadrature loops).
double chi_psi_unchecked(const ClebschContext& ctx, double psi, double zeta);

/// chi(psi, zeta) = int_{psi_ref}^{psi} chi_Psi(s, zeta) ds.
double chi(const ClebschContext& ctx, double psi, double zeta);

/// Phi(c) = -psi theta - int_0^theta g_{theta theta} + chi(psi, zeta).
double phi(const ClebschContext& ctx, const Coords& c);

/// alpha(psi, zeta) = -d chi/d zeta - g_{theta zeta}(psi, 0, zeta).
double alpha(const ClebschContext& ctx, double psi, double zeta);

/// Partials of Phi: the theta one is the defining relation -psi - g_{theta
/// theta}; the psi and zeta ones differentiate under the integral signs.
struct PhiPartials {
  double d_psi = 0.0;
  double d_theta = 0.0;
  double d_zeta = 0.0;
};
PhiPartials phi_partials(const ClebschContext& ctx, const Coords& c);

/// Steady velocity at c in the requested representation (Cartesian
/// components).
Vec3 velocity(const ClebschContext& ctx, const Coords& c, VelocityRep rep);

/// Residuals of the defining potential system at c.  alpha_theta and the
/// theta equation vanish by construction (alpha takes no theta argument and
/// Phi_theta is built from its defining relation); the psi and zeta
/// equations carry the quadrature content.
struct ClebschResiduals {
  double alpha_theta = 0.0;  // d alpha / d theta
  double eq_zeta = 0.0;      // alpha + Phi_zeta + g_{theta zeta}
  double eq_psi = 0.0;       // Phi_psi + g_{psi theta}
  double eq_theta = 0.0;     // Phi_theta + psi + g_{theta theta}
};
ClebschResiduals clebsch_residuals(const ClebschContext& ctx, const Coords& c);

}  // namespace toroflow

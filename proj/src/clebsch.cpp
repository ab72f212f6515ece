#include "toroflow/clebsch.hpp"

#include <cmath>
#include <sstream>

#include "toroflow/quadrature.hpp"

namespace toroflow {

ClebschContext make_clebsch_context(const ChartFamily& chart,
                                    const DomainSpec& dom) {
  ClebschContext ctx;
  ctx.chart = &chart;
  ctx.psi_ref = 0.5 * (dom.psi_min + dom.psi_max);
  return ctx;
}

namespace {

double g_entry(const ClebschContext& ctx, const Coords& c, int i, int j) {
  return metric_at(*ctx.chart, c).g(i, j);
}

double dg_entry(const ClebschContext& ctx, const Coords& c, int k, int i,
                int j) {
  return metric_at(*ctx.chart, c).dg[k](i, j);
}

// theta + int_0^theta dg_{theta theta}/dpsi - g_{psi theta}; constant in
// theta exactly when the first compatibility condition holds.
double chi_psi_form(const ClebschContext& ctx, double psi, double zeta,
                    double theta) {
  const double integral = integrate(
      [&](double t) {
        return dg_entry(ctx, {psi, t, zeta}, kPsi, kTheta, kTheta);
      },
      0.0, theta, ctx.quad_tol);
  return theta + integral - g_entry(ctx, {psi, theta, zeta}, kPsi, kTheta);
}

double chi_zeta(const ClebschContext& ctx, double psi, double zeta) {
  return -integrate(
      [&](double s) {
        return dg_entry(ctx, {s, 0.0, zeta}, kZeta, kPsi, kTheta);
      },
      ctx.psi_ref, psi, ctx.quad_tol);
}

}  // namespace

double chi_psi_unchecked(const ClebschContext& ctx, double psi, double zeta) {
  return -g_entry(ctx, {psi, 0.0, zeta}, kPsi, kTheta);
}

double chi_psi(const ClebschContext& ctx, double psi, double zeta) {
  const double v0 = chi_psi_unchecked(ctx, psi, zeta);
  for (double theta : {0.5 * M_PI, M_PI, 1.5 * M_PI}) {
    const double v = chi_psi_form(ctx, psi, zeta, theta);
    if (std::abs(v - v0) > ctx.theta_indep_tol) {
      std::ostringstream os;
      os << "chi_psi: theta-dependence detected (theta = " << theta
         << ", defect " << v - v0
         << "); the chart violates the first compatibility condition";
      throw std::runtime_error(os.str());
    }
  }
  return v0;
}

double chi(const ClebschContext& ctx, double psi, double zeta) {
  return integrate(
      [&](double s) { return chi_psi_unchecked(ctx, s, zeta); }, ctx.psi_ref,
      psi, ctx.quad_tol);
}

double phi(const ClebschContext& ctx, const Coords& c) {
  const double theta_integral = integrate(
      [&](double t) {
        return g_entry(ctx, {c.psi, t, c.zeta}, kTheta, kTheta);
      },
      0.0, c.theta, ctx.quad_tol);
  return -c.psi * c.theta - theta_integral + chi(ctx, c.psi, c.zeta);
}

double alpha(const ClebschContext& ctx, double psi, double zeta) {
  return -chi_zeta(ctx, psi, zeta) -
         g_entry(ctx, {psi, 0.0, zeta}, kTheta, kZeta);
}

PhiPartials phi_partials(const ClebschContext& ctx, const Coords& c) {
  PhiPartials pp;
  pp.d_theta = -c.psi - g_entry(ctx, c, kTheta, kTheta);
  pp.d_psi = -c.theta -
             integrate(
                 [&](double t) {
                   return dg_entry(ctx, {c.psi, t, c.zeta}, kPsi, kTheta,
                                   kTheta);
                 },
                 0.0, c.theta, ctx.quad_tol) +
             chi_psi_unchecked(ctx, c.psi, c.zeta);
  pp.d_zeta = -integrate(
                  [&](double t) {
                    return dg_entry(ctx, {c.psi, t, c.zeta}, kZeta, kTheta,
                                    kTheta);
                  },
                  0.0, c.theta, ctx.quad_tol) +
              chi_zeta(ctx, c.psi, c.zeta);
  return pp;
}

Vec3 velocity(const ClebschContext& ctx, const Coords& c, VelocityRep rep) {
  const Jet2 jet = jet_eval(*ctx.chart, c);
  switch (rep) {
    case VelocityRep::Tangent:
      return -jet.d1.col(kTheta);
    case VelocityRep::Covariant: {
      const Eigen::Matrix3d dual = dual_basis(jet);
      const Eigen::Matrix3d g = jet.d1.transpose() * jet.d1;
      Vec3 u = Vec3::Zero();
      for (int i = 0; i < 3; ++i)
        u -= g(i, kTheta) * dual.row(i).transpose();
      return u;
    }
    case VelocityRep::Clebsch: {
      const Eigen::Matrix3d dual = dual_basis(jet);
      const PhiPartials pp = phi_partials(ctx, c);
      const double a = alpha(ctx, c.psi, c.zeta);
      return pp.d_psi * dual.row(kPsi).transpose() +
             (pp.d_theta + c.psi) * dual.row(kTheta).transpose() +
             (pp.d_zeta + a) * dual.row(kZeta).transpose();
    }
  }
  return Vec3::Zero();
}

ClebschResiduals clebsch_residuals(const ClebschContext& ctx,
                                   const Coords& c) {
  ClebschResiduals r;
  const MetricAtPoint m = metric_at(*ctx.chart, c);
  const PhiPartials pp = phi_partials(ctx, c);
  r.alpha_theta = 0.0;  // alpha is a function of (psi, zeta) only
  r.eq_zeta = alpha(ctx, c.psi, c.zeta) + pp.d_zeta + m.g(kTheta, kZeta);
  r.eq_psi = pp.d_psi + m.g(kPsi, kTheta);
  r.eq_theta = pp.d_theta + c.psi + m.g(kTheta, kTheta);
  return r;
}

}  // namespace toroflow

#include "toroflow/fields.hpp"

#include <cmath>

#include "toroflow/geometry.hpp"

namespace toroflow {

Vec3 axisymmetric_velocity(const Vec3& p, double r0) {
  const double r = std::hypot(p.x(), p.y());
  const double zr = p.z() / r;
  return Vec3(zr * p.x(), zr * p.y(), -(r - r0));
}

Vec3 closed_form_velocity(const ChartFamily& chart, const Vec3& p) {
  const ToroidalFrame fr = resolve_frame(chart, p);
  const double xe = p.x() - chart.eps1() * chart.delta_x()(fr.zeta);
  const double ye = p.y() - chart.eps1() * chart.delta_y()(fr.zeta);
  const double zr = p.z() / fr.rho;
  return Vec3(zr * xe, zr * ye, -(fr.rho - chart.r0()));
}

double first_order_dr0(double phi_angle) {
  const double c = std::cos(phi_angle);
  return (1.0 + c * c) / 3.0;
}

Vec3 first_order_velocity(const Vec3& p, double r0, double eps) {
  const double r = std::hypot(p.x(), p.y());
  const double phi_angle = std::atan2(p.y(), p.x());
  const double c = std::cos(phi_angle), s = std::sin(phi_angle);
  const double dr0 = first_order_dr0(phi_angle);
  const double dx0 = -c * (1.0 - c * c / 3.0);
  const double dy0 = -s * s * s / 3.0;
  const double zr = p.z() / r;
  return Vec3(zr * (p.x() - eps * (p.x() * dr0 / r + dx0)),
              zr * (p.y() - eps * (p.y() * dr0 / r + dy0)),
              -(r - r0 + eps * dr0));
}

double first_order_psi(const Vec3& p, double psi0, double r0, double eps) {
  const double r = std::hypot(p.x(), p.y());
  const double q = r - r0;
  const double base = psi0 - q * q - p.z() * p.z();
  return base - 2.0 * eps * q * first_order_dr0(std::atan2(p.y(), p.x()));
}

Vec3 first_order_psi_gradient(const Vec3& p, double r0, double eps) {
  const double r = std::hypot(p.x(), p.y());
  const double phi_angle = std::atan2(p.y(), p.x());
  const double q = r - r0;
  const double dr0 = first_order_dr0(phi_angle);
  const double ddr0 = -std::sin(2.0 * phi_angle) / 3.0;
  const double d_r = -2.0 * q - 2.0 * eps * dr0;
  const double d_phi = -2.0 * eps * q * ddr0;
  const double d_z = -2.0 * p.z();
  const Vec3 er(p.x() / r, p.y() / r, 0.0);
  const Vec3 ephi(-p.y() / r, p.x() / r, 0.0);
  return d_r * er + (d_phi / r) * ephi + Vec3(0.0, 0.0, d_z);
}

VectorField velocity_field(const ChartFamily& chart) {
  return [&chart](const Vec3& p) -> Vec3 {
    const Coords c = inverse(chart, p);
    return -jet_eval(chart, c).d1.col(kTheta);
  };
}

ScalarField psi_field(const ChartFamily& chart) {
  if (chart.kind() != ChartKind::GeneralCC1)
    return [&chart](const Vec3& p) { return psi_cartesian(chart, p); };
  return [&chart](const Vec3& p) { return inverse(chart, p).psi; };
}

double fd_derivative(const std::function<double(double)>& f, double x,
                     double h) {
  return (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) /
         (12.0 * h);
}

Vec3 fd_gradient(const ScalarField& f, const Vec3& p, double h) {
  Vec3 g;
  for (int j = 0; j < 3; ++j) {
    g[j] = fd_derivative(
        [&](double t) {
          Vec3 q = p;
          q[j] = t;
          return f(q);
        },
        p[j], h);
  }
  return g;
}

Eigen::Matrix3d fd_jacobian(const VectorField& f, const Vec3& p, double h) {
  Eigen::Matrix3d J;
  for (int j = 0; j < 3; ++j) {
    Vec3 pp2 = p, pp1 = p, pm1 = p, pm2 = p;
    pp2[j] += 2.0 * h;
    pp1[j] += h;
    pm1[j] -= h;
    pm2[j] -= 2.0 * h;
    J.col(j) = (-f(pp2) + 8.0 * f(pp1) - 8.0 * f(pm1) + f(pm2)) / (12.0 * h);
  }
  return J;
}

Vec3 fd_curl(const VectorField& f, const Vec3& p, double h) {
  const Eigen::Matrix3d J = fd_jacobian(f, p, h);
  return Vec3(J(2, 1) - J(1, 2), J(0, 2) - J(2, 0), J(1, 0) - J(0, 1));
}

double fd_divergence(const VectorField& f, const Vec3& p, double h) {
  return fd_jacobian(f, p, h).trace();
}

}  // namespace toroflow

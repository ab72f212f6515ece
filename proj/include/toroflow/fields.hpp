#pragma once

#include <functional>

#include "toroflow/chart.hpp"

namespace toroflow {

using ScalarField = std::function<double(const Vec3&)>;
using VectorField = std::function<Vec3(const Vec3&)>;

/// Unperturbed steady field  z grad r - (r - r0) grad z.
Vec3 axisymmetric_velocity(const Vec3& p, double r0);

/// Steady field of an f-perturbed chart straight from a Cartesian point:
/// the toroidal frame is resolved, then
///   u = (z/rho)(x - eps dx) grad x + (z/rho)(y - eps dy) grad y
///       - (rho - r0) grad z.
Vec3 closed_form_velocity(const ChartFamily& chart, const Vec3& p);

/// First-order (in eps) model of the sin^2 perturbed family.
/// dr0 is the first-order shift of the offset cylinder radius.
double first_order_dr0(double phi_angle);
Vec3 first_order_velocity(const Vec3& p, double r0, double eps);
double first_order_psi(const Vec3& p, double psi0, double r0, double eps);
Vec3 first_order_psi_gradient(const Vec3& p, double r0, double eps);

/// Cartesian closures over a chart (inversion per evaluation).
VectorField velocity_field(const ChartFamily& chart);
ScalarField psi_field(const ChartFamily& chart);

/// Five-point central difference, O(h^4).
double fd_derivative(const std::function<double(double)>& f, double x,
                     double h);
Vec3 fd_gradient(const ScalarField& f, const Vec3& p, double h);
/// J(i, j) = d F_i / d x_j.
Eigen::Matrix3d fd_jacobian(const VectorField& f, const Vec3& p, double h);
Vec3 fd_curl(const VectorField& f, const Vec3& p, double h);
double fd_divergence(const VectorField& f, const Vec3& p, double h);

}  // namespace toroflow

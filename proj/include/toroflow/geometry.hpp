#pragma once

#include <Eigen/Dense>
#include <array>
#include <utility>

#include "toroflow/chart.hpp"

namespace toroflow {

/// Position with exact first and second coordinate derivatives.
/// d1(a, i) = d x^a / d y^i,  d2[a](i, j) = d^2 x^a / d y^i d y^j (symmetric
/// by construction: the packed jet Hessian is expanded symmetrically).
struct Jet2 {
  Vec3 x;
  Eigen::Matrix3d d1;
  std::array<Eigen::Matrix3d, 3> d2;
};

/// Evaluate the chart's two-jet; requires psi strictly below psi0.
Jet2 jet_eval(const ChartFamily& chart, const Coords& c);

/// Pullback metric and its coordinate derivatives.
/// g(i, j) = g_ij,  dg[k](i, j) = d g_ij / d y^k (each dg[k] symmetric).
struct MetricAtPoint {
  Eigen::Matrix3d g;
  std::array<Eigen::Matrix3d, 3> dg;
};

MetricAtPoint metric_from_jet(const Jet2& jet);
MetricAtPoint metric_at(const ChartFamily& chart, const Coords& c);

/// Christoffel symbols of the first kind with the index convention
/// G[i](j, k) = Gamma_ijk = (g_ij,k + g_ik,j - g_jk,i) / 2, symmetric in
/// (j, k); and of the second kind G[i](j, k) = Gamma^i_jk.
struct ChristoffelFirst {
  std::array<Eigen::Matrix3d, 3> G;
};
struct ChristoffelSecond {
  std::array<Eigen::Matrix3d, 3> G;
};

/// Both kinds from metric data; throws std::domain_error when det g is below
/// the singularity tolerance.
std::pair<ChristoffelFirst, ChristoffelSecond> christoffel(
    const MetricAtPoint& m, double det_tol = 1e-13);

/// Numeric Jacobian determinant det d1; checks the closed form when one is
/// available (relative agreement 1e-10) and the coordinate-side domain.
double jacobian_det(const ChartFamily& chart, const Coords& c);

/// Rows are the dual basis gradients (grad psi, grad theta, grad zeta).
Eigen::Matrix3d dual_basis(const Jet2& jet);

/// LDLT-based positive definiteness with a pivot tolerance.
bool is_positive_definite(const Eigen::Matrix3d& m, double pivot_tol = 1e-13);

}  // namespace toroflow

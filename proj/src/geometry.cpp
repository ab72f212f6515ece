#include "toroflow/geometry.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace toroflow {

Jet2 jet_eval(const ChartFamily& chart, const Coords& c) {
  if (!(c.psi < chart.psi0()))
    throw std::domain_error(
        "jet_eval: psi must be strictly below psi0 (the core circle is a "
        "derivative singularity of sqrt)");
  const auto pos = chart.position<Jet>(Jet::variable(c.psi, kPsi),
                                       Jet::variable(c.theta, kTheta),
                                       Jet::variable(c.zeta, kZeta));
  Jet2 out;
  for (int a = 0; a < 3; ++a) {
    out.x[a] = pos[a].v;
    for (int i = 0; i < 3; ++i) {
      out.d1(a, i) = pos[a].g[static_cast<std::size_t>(i)];
      for (int j = 0; j < 3; ++j)
        out.d2[a](i, j) = pos[a].hess(static_cast<std::size_t>(i),
                                      static_cast<std::size_t>(j));
    }
  }
  return out;
}

MetricAtPoint metric_from_jet(const Jet2& jet) {
  MetricAtPoint m;
  m.g = jet.d1.transpose() * jet.d1;
  for (int k = 0; k < 3; ++k) {
    // A(a, i) = d2[a](i, k); dg[k] = A^T d1 + (A^T d1)^T keeps symmetry exact.
    Eigen::Matrix3d A;
    for (int a = 0; a < 3; ++a)
      for (int i = 0; i < 3; ++i) A(a, i) = jet.d2[a](i, k);
    const Eigen::Matrix3d B = A.transpose() * jet.d1;
    m.dg[k] = B + B.transpose();
  }
  return m;
}

MetricAtPoint metric_at(const ChartFamily& chart, const Coords& c) {
  return metric_from_jet(jet_eval(chart, c));
}

std::pair<ChristoffelFirst, ChristoffelSecond> christoffel(
    const MetricAtPoint& m, double det_tol) {
  const double det = m.g.determinant();
  if (det <= det_tol) {
    std::ostringstream os;
    os << "christoffel: metric is singular (det g = " << det << ")";
    throw std::domain_error(os.str());
  }
  ChristoffelFirst first;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        first.G[i](j, k) =
            0.5 * (m.dg[k](i, j) + m.dg[j](i, k) - m.dg[i](j, k));
  const Eigen::Matrix3d ginv = m.g.inverse();
  ChristoffelSecond second;
  for (int i = 0; i < 3; ++i) {
    second.G[i].setZero();
    for (int mm = 0; mm < 3; ++mm) second.G[i] += ginv(i, mm) * first.G[mm];
  }
  return {first, second};
}

double jacobian_det(const ChartFamily& chart, const Coords& c) {
  if (!in_domain(chart, c))
    throw std::domain_error(
        "jacobian_det: coordinates outside the chart's validity region");
  const Jet2 jet = jet_eval(chart, c);
  const double det = jet.d1.determinant();
  if (chart.has_closed_form_jacobian()) {
    const double closed = jacobian_det_closed_form(chart, c);
    if (std::abs(det - closed) > 1e-10 * std::max(1.0, std::abs(closed))) {
      std::ostringstream os;
      os << "jacobian_det: numeric determinant " << det
         << " disagrees with the closed form " << closed;
      throw std::logic_error(os.str());
    }
  }
  return det;
}

Eigen::Matrix3d dual_basis(const Jet2& jet) { return jet.d1.inverse(); }

bool is_positive_definite(const Eigen::Matrix3d& m, double pivot_tol) {
  const Eigen::LDLT<Eigen::Matrix3d> ldlt(m);
  if (ldlt.info() != Eigen::Success) return false;
  return ldlt.vectorD().minCoeff() > pivot_tol;
}

}  // namespace toroflow

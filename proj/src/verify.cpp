#include "toroflow/verify.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace toroflow {

ResidualReport make_report(std::string name, std::vector<double> abs_values,
                           double tolerance) {
  ResidualReport r;
  r.name = std::move(name);
  r.samples = abs_values.size();
  r.tolerance = tolerance;
  if (!abs_values.empty()) {
    r.max_abs = *std::max_element(abs_values.begin(), abs_values.end());
    r.mean_abs = pairwise_sum(abs_values) / static_cast<double>(r.samples);
    std::vector<double> sorted = abs_values;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t idx = std::min(
        r.samples - 1,
        static_cast<std::size_t>(
            std::ceil(0.99 * static_cast<double>(r.samples))) -
            1);
    r.p99_abs = sorted[idx];
  }
  r.pass = r.max_abs < tolerance;
  return r;
}

namespace {

Vec3 d2_vec(const Jet2& jet, int i, int j) {
  return Vec3(jet.d2[0](i, j), jet.d2[1](i, j), jet.d2[2](i, j));
}

template <class Fn>
std::vector<double> map_samples(std::size_t n, Fn&& fn) {
  std::vector<double> out(n);
  parallel_for(n, [&](std::size_t i) { out[i] = fn(i); });
  return out;
}

}  // namespace

std::array<ResidualReport, 2> check_map_pdes(const ChartFamily& chart,
                                             std::span<const Coords> pts,
                                             double tol) {
  std::vector<double> r1(pts.size()), r2(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) {
    const Jet2 jet = jet_eval(chart, pts[i]);
    const Vec3 xp = jet.d1.col(kPsi), xt = jet.d1.col(kTheta),
               xz = jet.d1.col(kZeta);
    const Vec3 xtt = d2_vec(jet, kTheta, kTheta);
    const Vec3 xpt = d2_vec(jet, kPsi, kTheta);
    const Vec3 xtz = d2_vec(jet, kTheta, kZeta);
    r1[i] = std::abs(xp.dot(xtt) - xt.dot(xpt) - 1.0);
    r2[i] = std::abs(xt.dot(xtz) - xz.dot(xtt));
  });
  return {make_report("map_pde_theta", std::move(r1), tol),
          make_report("map_pde_zeta", std::move(r2), tol)};
}

ChristoffelFormReport check_christoffel_form(const ChartFamily& chart,
                                             std::span<const Coords> pts,
                                             double tol) {
  std::vector<double> r1(pts.size()), r2(pts.size()), tr(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) {
    const auto [first, second] = christoffel(metric_at(chart, pts[i]));
    r1[i] = std::abs(first.G[kPsi](kTheta, kTheta) - 1.0 -
                     first.G[kTheta](kPsi, kTheta));
    r2[i] = std::abs(first.G[kTheta](kZeta, kTheta) -
                     first.G[kZeta](kTheta, kTheta));
    double t = 0.0;
    for (int k = 0; k < 3; ++k) t += second.G[k](k, kTheta);
    tr[i] = std::abs(t);
  });
  ChristoffelFormReport out;
  out.first = make_report("christoffel_psi_identity", std::move(r1), tol);
  out.second = make_report("christoffel_zeta_identity", std::move(r2), tol);
  out.trace = make_report("christoffel_mixed_trace", std::move(tr), tol);
  return out;
}

ResidualReport check_metric_det_consistency(const ChartFamily& chart,
                                            std::span<const Coords> pts,
                                            double tol) {
  auto values = map_samples(pts.size(), [&](std::size_t i) {
    const Jet2 jet = jet_eval(chart, pts[i]);
    const double d = jet.d1.determinant();
    const double dg = (jet.d1.transpose() * jet.d1).determinant();
    return std::abs(dg - d * d) / (d * d);
  });
  return make_report("metric_det_consistency", std::move(values), tol);
}

ResidualReport check_jacobian_closed_form(const ChartFamily& chart,
                                          std::span<const Coords> pts,
                                          double tol) {
  auto values = map_samples(pts.size(), [&](std::size_t i) {
    const Jet2 jet = jet_eval(chart, pts[i]);
    const double closed = jacobian_det_closed_form(chart, pts[i]);
    return std::abs(jet.d1.determinant() - closed) / std::abs(closed);
  });
  return make_report("jacobian_closed_form", std::move(values), tol);
}

ResidualReport force_balance_fields(const VectorField& u, const ScalarField& p,
                                    std::span<const Vec3> pts, double h,
                                    double tol, std::string name) {
  // Bernoulli-form steady momentum: u . grad u + grad(h + |u|^2/2) = 0 with
  // h + |u|^2/2 = -p, which collapses to  (curl u) x u = grad p.
  auto values = map_samples(pts.size(), [&](std::size_t i) {
    const Vec3 x = pts[i];
    const Vec3 curl = fd_curl(u, x, h);
    const Vec3 grad_p = fd_gradient(p, x, h);
    return (curl.cross(u(x)) - grad_p).norm();
  });
  return make_report(std::move(name), std::move(values), tol);
}

ResidualReport force_balance(const ChartFamily& chart,
                             std::span<const Vec3> pts, double h, double tol) {
  return force_balance_fields(velocity_field(chart), psi_field(chart), pts, h,
                              tol, "force_balance");
}

double divergence_from_jet(const Jet2& jet) {
  const Vec3 xp = jet.d1.col(kPsi), xt = jet.d1.col(kTheta),
             xz = jet.d1.col(kZeta);
  const double det = jet.d1.determinant();
  const double ddet = d2_vec(jet, kPsi, kTheta).dot(xt.cross(xz)) +
                      xp.dot(d2_vec(jet, kTheta, kTheta).cross(xz)) +
                      xp.dot(xt.cross(d2_vec(jet, kTheta, kZeta)));
  return -ddet / det;
}

DivergenceReport divergence_check(const ChartFamily& chart,
                                  std::span<const Coords> pts, double h,
                                  double fd_tol, double jet_tol) {
  const VectorField u = velocity_field(chart);
  std::vector<double> fd(pts.size()), jet_r(pts.size()), var(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) {
    const Coords& c = pts[i];
    const double analytic = divergence_analytic(chart, c);
    const Jet2 jet = jet_eval(chart, c);
    fd[i] = std::abs(fd_divergence(u, jet.x, h) - analytic);
    jet_r[i] = std::abs(divergence_from_jet(jet) - analytic);
    const MetricAtPoint m = metric_from_jet(jet);
    var[i] = std::abs(m.g.determinant() *
                      (m.g.inverse() * m.dg[kTheta]).trace());
  });
  DivergenceReport out;
  out.fd_vs_analytic =
      make_report("divergence_fd_vs_closed", std::move(fd), fd_tol);
  out.jet_vs_analytic =
      make_report("divergence_jet_vs_closed", std::move(jet_r), jet_tol);
  out.det_g_theta_variation =
      make_report("det_g_theta_variation", std::move(var), jet_tol);
  return out;
}

double lie_derivative_psi(const ChartFamily& chart,
                          const IsometryGenerator& gen, const Coords& c) {
  const Jet2 jet = jet_eval(chart, c);
  const Vec3 grad_psi = dual_basis(jet).row(kPsi).transpose();
  const Vec3 xi = gen.a + gen.b.cross(jet.x);
  return xi.dot(grad_psi);
}

SymmetryScanResult symmetry_scan(const ChartFamily& chart, double psi_level,
                                 std::size_t n, std::uint64_t seed) {
  if (n < 8)
    throw std::invalid_argument("symmetry_scan: need at least 8 samples");
  const std::vector<Coords> pts = sample_level_set(chart, psi_level, n, seed);
  Eigen::MatrixXd A(static_cast<Eigen::Index>(n), 6);
  Eigen::MatrixXd P(static_cast<Eigen::Index>(n), 3);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  parallel_for(n, [&](std::size_t i) {
    const Jet2 jet = jet_eval(chart, pts[i]);
    const Vec3 grad_psi = dual_basis(jet).row(kPsi).transpose();
    const Eigen::Index row = static_cast<Eigen::Index>(i);
    P.row(row) = jet.x.transpose();
    for (int k = 0; k < 3; ++k) {
      A(row, k) = grad_psi[k] * scale;  // translation e_k
      A(row, 3 + k) =
          Vec3::Unit(k).cross(jet.x).dot(grad_psi) * scale;  // rotation e_k
    }
  });
  // Degenerate sampling guard: the position cloud must span three dimensions.
  Eigen::MatrixXd centered = P.rowwise() - P.colwise().mean();
  Eigen::JacobiSVD<Eigen::MatrixXd> psvd(centered);
  const auto& ps = psvd.singularValues();
  if (ps(2) < 1e-8 * ps(0))
    throw std::runtime_error(
        "symmetry_scan: sample positions are (nearly) coplanar; the scan "
        "matrix would be rank deficient for geometric reasons");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinV);
  SymmetryScanResult out;
  const auto& sv = svd.singularValues();
  for (int k = 0; k < 6; ++k)
    out.singular_values[static_cast<std::size_t>(k)] = sv(k);
  out.sigma_min = sv(5);
  Eigen::Matrix<double, 6, 1> v = svd.matrixV().col(5);
  // Fix the sign so results are reproducible across backends.
  int lead = 0;
  v.cwiseAbs().maxCoeff(&lead);
  if (v(lead) < 0.0) v = -v;
  out.minimizer.a = v.head<3>();
  out.minimizer.b = v.tail<3>();
  return out;
}

TaylorTable taylor_compare(double psi0, double r0,
                           std::span<const double> eps_list,
                           const TaylorGrid& grid) {
  const ChartFamily base = ChartFamily::axisymmetric(psi0, r0);
  std::vector<Vec3> pts;
  pts.reserve(static_cast<std::size_t>(grid.npsi * grid.ntheta * grid.nzeta));
  for (int ip = 0; ip < grid.npsi; ++ip) {
    const double psi =
        grid.shell.psi_min + (grid.shell.psi_max - grid.shell.psi_min) *
                                 (ip + 0.5) / grid.npsi;
    for (int it = 0; it < grid.ntheta; ++it)
      for (int iz = 0; iz < grid.nzeta; ++iz)
        pts.push_back(forward(
            base, {psi, kTwoPi * it / grid.ntheta, kTwoPi * iz / grid.nzeta}));
  }
  TaylorTable table;
  for (double eps : eps_list) {
    const ChartFamily chart =
        eps == 0.0 ? base
                   : ChartFamily::f_perturbed(psi0, r0, eps, FSpec::sin2());
    TaylorRow row;
    row.eps = eps;
    std::vector<double> eu(pts.size()), ep(pts.size()), tg(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) {
      const Vec3& p = pts[i];
      const Vec3 u = closed_form_velocity(chart, p);
      const Vec3 u1 = first_order_velocity(p, r0, eps);
      eu[i] = (u - u1).norm();
      ep[i] = std::abs(psi_cartesian(chart, p) -
                       first_order_psi(p, psi0, r0, eps));
      tg[i] = std::abs(u1.dot(first_order_psi_gradient(p, r0, eps)));
    });
    row.err_u = *std::max_element(eu.begin(), eu.end());
    row.err_psi = *std::max_element(ep.begin(), ep.end());
    row.tangency = *std::max_element(tg.begin(), tg.end());
    table.rows.push_back(row);
  }
  // Log-log slope over the positive-eps rows.
  auto fit = [&](auto value) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (const TaylorRow& row : table.rows) {
      if (row.eps <= 0.0 || value(row) <= 0.0) continue;
      const double lx = std::log(row.eps), ly = std::log(value(row));
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
      ++m;
    }
    return m >= 2 ? (m * sxy - sx * sy) / (m * sxx - sx * sx) : 0.0;
  };
  table.fitted_order_u = fit([](const TaylorRow& r) { return r.err_u; });
  table.fitted_order_psi = fit([](const TaylorRow& r) { return r.err_psi; });
  return table;
}

MetricField metric_field(const ChartFamily& chart) {
  return [&chart](const Coords& c) { return metric_at(chart, c); };
}

std::array<ResidualReport, 3> check_generalized_metric(
    const MetricField& metric, std::span<const Coords> pts, double tol) {
  std::vector<double> c1(pts.size()), c2(pts.size()), var(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) {
    const MetricAtPoint m = metric(pts[i]);
    c1[i] = std::abs(m.dg[kTheta](kPsi, kTheta) - 1.0 -
                     m.dg[kPsi](kTheta, kTheta));
    c2[i] = std::abs(m.dg[kZeta](kTheta, kTheta) -
                     m.dg[kTheta](kTheta, kZeta));
    var[i] = std::abs(m.g.determinant() *
                      (m.g.inverse() * m.dg[kTheta]).trace());
  });
  return {make_report("generalized_metric_psi_condition", std::move(c1), tol),
          make_report("generalized_metric_zeta_condition", std::move(c2), tol),
          make_report("generalized_metric_det_variation", std::move(var),
                      tol)};
}

BoundaryReport boundary_report(const ChartFamily& chart, double psi_b,
                               std::size_t n, std::uint64_t seed, double tol) {
  const std::vector<Coords> pts = sample_level_set(chart, psi_b, n, seed);
  std::vector<double> tangency(n), grad_norm(n), defect(n);
  parallel_for(n, [&](std::size_t i) {
    const Jet2 jet = jet_eval(chart, pts[i]);
    const Vec3 grad_psi = dual_basis(jet).row(kPsi).transpose();
    const Vec3 u = -jet.d1.col(kTheta);
    tangency[i] = std::abs(u.dot(grad_psi)) / (u.norm() * grad_psi.norm());
    grad_norm[i] = grad_psi.norm();
    defect[i] = std::abs(pts[i].psi - psi_b);
  });
  BoundaryReport out;
  out.tangency = make_report("boundary_tangency", std::move(tangency), tol);
  out.min_grad_psi = *std::min_element(grad_norm.begin(), grad_norm.end());
  out.max_pressure_defect = *std::max_element(defect.begin(), defect.end());
  return out;
}

}  // namespace toroflow

#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "toroflow/clebsch.hpp"
#include "toroflow/fields.hpp"
#include "toroflow/sampling.hpp"

namespace toroflow {

/// Summary statistics of one residual family over a sample set.
/// pass holds exactly when max_abs < tolerance.
struct ResidualReport {
  std::string name;
  std::size_t samples = 0;
  double max_abs = 0.0;
  double mean_abs = 0.0;
  double p99_abs = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Deterministic statistics: max, pairwise mean, p99 = sorted value at index
/// min(n-1, ceil(0.99 n) - 1).
ResidualReport make_report(std::string name, std::vector<double> abs_values,
                           double tolerance);

/// Euclidean Killing field  xi(x) = a + b x x.
struct IsometryGenerator {
  Vec3 a = Vec3::Zero();
  Vec3 b = Vec3::Zero();
};

/// Defining embedding identities of the steady family:
///   x_psi . x_tt - x_theta . x_pt = 1   and   x_theta . x_tz = x_zeta . x_tt.
std::array<ResidualReport, 2> check_map_pdes(const ChartFamily& chart,
                                             std::span<const Coords> pts,
                                             double tol);

/// Same identities expressed through Christoffel symbols of the first kind,
/// plus the mixed trace sum_i Gamma^i_{i theta} (the log-derivative of the
/// Jacobian, nonzero forompressible members; reported, not an identity).
struct ChristoffelFormReport {
  ResidualReport first;   // Gamma_{psi theta theta} - 1 - Gamma_{theta psi theta}
  ResidualReport second;  // Gamma_{theta zeta theta} - Gamma_{zeta theta theta}
  ResidualReport trace;   // informational
};
ChristoffelFormReport check_christoffel_form(const ChartFamily& chart,
                                             std::span<const Coords> pts,
                                             double tol);

/// det g = (det d1)^2; relative residual.
ResidualReport check_metric_det_consistency(const ChartFamily& chart,
                                            std::span<const Coords> pts,
                                            double tol);

/// Numeric det d1 against the closed form; relative residual.
ResidualReport check_jacobian_closed_form(const ChartFamily& chart,
                                          std::span<const Coords> pts,
                                          double tol);

/// Steady momentum balance in Bernoulli form: since the specific enthalpy
/// absorbs |u|^2/2 (h + |u|^2/2 = -p), the residual is (curl u) x u - grad p,
/// every derivative taken by the five-point stencil.
ResidualReport force_balance_fields(const VectorField& u, const ScalarField& p,
                                    std::span<const Vec3> pts, double h,
                                    double tol, std::string name);
ResidualReport force_balance(const ChartFamily& chart,
                             std::span<const Vec3> pts, double h, double tol);

/// Divergence cross-checks: finite differences and the jet-level
/// triple-product form against the closed form, plus the theta-variation of
/// det g (nonzero exactly where the flow is compressible).
struct DivergenceReport {
  ResidualReport fd_vs_analytic;
  ResidualReport jet_vs_analytic;
  ResidualReport det_g_theta_variation;  // informational magnitude record
};
DivergenceReport divergence_check(const ChartFamily& chart,
                                  std::span<const Coords> pts, double h,
                                  double fd_tol, double jet_tol);

/// Divergence from the two-jet alone: -(d_theta det d1)/(det d1) with the
/// numerator expanded by the product rule.
double divergence_from_jet(const Jet2& jet);

/// Lie derivative of psi along a Euclidean Killing field, evaluated through
/// the dual basis at c.
double lie_derivative_psi(const ChartFamily& chart,
                          const IsometryGenerator& gen, const Coords& c);

/// Least-squares certificate of continuous-isometry absence: column k of A
/// holds the Lie derivative of psi along the k-th unit generator at each
/// sample (translations first, then rotations), scaled by 1/sqrt(n).
struct SymmetryScanResult {
  double sigma_min = 0.0;
  IsometryGenerator minimizer;
  std::array<double, 6> singular_values{};
};
SymmetryScanResult symmetry_scan(const ChartFamily& chart, double psi_level,
                                 std::size_t n, std::uint64_t seed);

/// First-order model against the exact family on a fixed Cartesian grid
/// (the grid is taken from the unperturbed member, so every eps is compared
/// at identical points).
struct TaylorRow {
  double eps = 0.0;
  double err_u = 0.0;      // sup |u - u_1|
  double err_psi = 0.0;    // sup |psi - psi_1|
  double tangency = 0.0;   // sup |u_1 . grad psi_1|
};
struct TaylorTable {
  std::vector<TaylorRow> rows;
  double fitted_order_u = 0.0;
  double fitted_order_psi = 0.0;
};
struct TaylorGrid {
  DomainSpec shell{0.85, 0.95};
  int npsi = 6;
  int ntheta = 12;
  int nzeta = 12;
};
TaylorTable taylor_compare(double psi0, double r0,
                           std::span<const double> eps_list,
                           const TaylorGrid& grid = {});

/// Abstract-metric admissibility: the two compatibility conditions and the
/// theta-variation of det g (informational).
using MetricField = std::function<MetricAtPoint(const Coords&)>;
std::array<ResidualReport, 3> check_generalized_metric(
    const MetricField& metric, std::span<const Coords> pts, double tol);
MetricField metric_field(const ChartFamily& chart);

/// Boundary behaviour on the psi_b level set: normalized flow tangency,
/// the smallest gradient magnitude (degenerates only at the core circle),
/// and the exact constancy of the pressure function on the shell.
struct BoundaryReport {
  ResidualReport tangency;
  double min_grad_psi = 0.0;
  double max_pressure_defect = 0.0;
};
BoundaryReport boundary_report(const ChartFamily& chart, double psi_b,
                               std::size_t n, std::uint64_t seed, double tol);

}  // namespace toroflow

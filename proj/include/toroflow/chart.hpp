#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "toroflow/jet.hpp"
#include "toroflow/trig_poly.hpp"

namespace toroflow {

using Vec3 = Eigen::Vector3d;

/// Curvilinear coordinates (psi, theta, zeta): flux label, poloidal angle,
/// toroidal angle.  Accepted on the whole real line in the angles; reduction
/// to [0, 2pi) happens only at I/O boundaries.
struct Coords {
  double psi = 0.0;
  double theta = 0.0;
  double zeta = 0.0;
};

constexpr int kPsi = 0;
constexpr int kTheta = 1;
constexpr int kZeta = 2;

constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Reduce an angle to [0, 2pi).
double wrap_angle(double a);

/// Chart solve failed to reach the residual target.
struct NonConvergence : std::runtime_error {
  NonConvergence(const std::string& what, double residual_, int iterations_)
      : std::runtime_error(what), residual(residual_), iterations(iterations_) {}
  double residual;
  int iterations;
};

enum class ChartKind { Axisymmetric, FPerturbed, GeneralCC1 };

/// Toroidal perturbation profile f(zeta) driving the planar offsets.
class FSpec {
 public:
  enum class Variant { Sin2, Sin2Of3, Mix, FourierCustom };

  static FSpec sin2();      // f = sin^2(zeta)
  static FSpec sin2of3();   // f = sin^2(3 zeta)
  static FSpec mix();       // f = sin^4(2 zeta) + cos^2(3 zeta)
  /// Finite Fourier series; the first harmonic must vanish exactly, otherwise
  /// the planar offsets would not be 2pi-periodic.
  static FSpec fourier(TrigPoly series);

  Variant variant() const { return variant_; }
  const TrigPoly& series() const { return series_; }
  std::string name() const;

 private:
  FSpec(Variant v, TrigPoly s) : variant_(v), series_(std::move(s)) {}
  Variant variant_;
  TrigPoly series_;
};

/// Planar offsets with delta_x' = f sin(zeta), delta_y' = -f cos(zeta), each
/// antidifferentiated to zero mean.
struct DeltaPair {
  TrigPoly dx;
  TrigPoly dy;
};

DeltaPair delta_xy_from_f(const TrigPoly& f);
DeltaPair delta_xy_from_f(const FSpec& f);

/// Poloidal deformation pair (delta_z, g) for the general family; admissible
/// pairs satisfy sin(t)(g' - delta_z'') + cos(t)(delta_z' + g'') = 0.
struct DzGPair {
  TrigPoly dz;
  TrigPoly g;

  /// The worked pair delta_z = -sin(4t) - 10 sin(2t), g = cos(4t) - 10 cos(2t).
  static DzGPair example();

  /// Max of the admissibility residual over n uniformly spaced angles.
  double ode_residual_max(int n_samples = 1024) const;
};

/// One member of the explicit chart families: a map (psi, theta, zeta) -> R^3
/// whose theta-tangent is the steady velocity field and whose psi is the
/// Bernoulli-type pressure function.
class ChartFamily {
 public:
  static ChartFamily axisymmetric(double psi0, double r0);
  static ChartFamily f_perturbed(double psi0, double r0, double eps, FSpec f);
  /// Direct offsets with no profile relation enforced; intended for
  /// counterexample fixtures where the admissibility is deliberately broken.
  static ChartFamily f_perturbed_raw(double psi0, double r0, double eps,
                                     TrigPoly dx, TrigPoly dy);
  static ChartFamily general_cc1(double psi0, double r0, double eps1,
                                 double eps2, double eps3, FSpec f,
                                 DzGPair dzg);

  ChartKind kind() const { return kind_; }
  double psi0() const { return psi0_; }
  double r0() const { return r0_; }
  double eps1() const { return eps1_; }
  double eps2() const { return eps2_; }
  double eps3() const { return eps3_; }
  bool raw_deltas() const { return raw_; }
  const TrigPoly& delta_x() const { return dx_; }
  const TrigPoly& delta_y() const { return dy_; }
  const FSpec* fspec() const { return f_ ? &*f_ : nullptr; }
  const DzGPair* dzg() const { return dzg_ ? &*dzg_ : nullptr; }
  std::string describe() const;

  /// True when the closed-form Jacobian determinant is available (all
  /// non-raw members).
  bool has_closed_form_jacobian() const { return !raw_; }

  /// True when r0 exceeds the conservative image-side clearance
  /// eps1 (1 + sqrt(2)) (+ eps2 + eps3 sup|g| for the general family).
  bool comfortable_clearance() const;
  double clearance_bound() const;

  /// Position map; T is double or Jet.  Caller guarantees psi <= psi0
  /// (strictly below for T = Jet, where sqrt'(0) diverges).
  template <class T>
  std::array<T, 3> position(const T& psi, const T& theta, const T& zeta) const {
    using std::cos;
    using std::sin;
    using std::sqrt;
    T s = sqrt(psi0_ - psi);
    T r = r0_ + s * cos(theta);
    T z = s * sin(theta);
    if (kind_ == ChartKind::GeneralCC1) {
      if (eps2_ != 0.0) {
        r = r + eps2_ * sin(theta);
        z = z + eps2_ * cos(theta);
      }
      if (eps3_ != 0.0) {
        r = r - eps3_ * dzg_->g(theta);
        z = z + eps3_ * dzg_->dz(theta);
      }
    }
    T x = r * cos(zeta);
    T y = r * sin(zeta);
    if (eps1_ != 0.0) {
      x = x + eps1_ * dx_(zeta);
      y = y + eps1_ * dy_(zeta);
    }
    return {x, y, z};
  }

  /// Closed-form radial factor R(psi, theta) of the position map.
  double radial_factor(double psi, double theta) const;

 private:
  ChartFamily() = default;

  ChartKind kind_ = ChartKind::Axisymmetric;
  double psi0_ = 1.0;
  double r0_ = 1.0;
  double eps1_ = 0.0;
  double eps2_ = 0.0;
  double eps3_ = 0.0;
  bool raw_ = false;
  std::optional<FSpec> f_;
  TrigPoly dx_, dy_;
  std::optional<DzGPair> dzg_;
  // cached derivatives for the closed-form Jacobian/divergence and the
  // toroidal Newton fallback
  TrigPoly dx1_, dy1_, g1_, dz1_, g2_, dz2_;

  friend double jacobian_det_closed_form(const ChartFamily&, const Coords&);
  friend double divergence_analytic(const ChartFamily&, const Coords&);
  friend struct FrameSolver;
};

/// Position of a coordinate triple; psi may equal psi0 (the core circle).
Vec3 forward(const ChartFamily& chart, const Coords& c);

struct InverseResult {
  Coords coords;
  int fixed_point_iters = 0;
  int newton_iters = 0;
  double residual = 0.0;
};

/// Invert the position map: toroidal fixed point for zeta, closed-form
/// poloidal recovery, Newton polish when needed.  Residual target is
/// tol * (1 + |p|); throws NonConvergence after 100 total iterations.
InverseResult invert(const ChartFamily& chart, const Vec3& p,
                     double tol = 1e-12);
Coords inverse(const ChartFamily& chart, const Vec3& p);

/// Coordinate-side membership in the family's validity region (positive
/// Jacobian clearance; conservative for the general family).
bool in_domain(const ChartFamily& chart, const Coords& c);
/// Image-side membership in the conservative clearance region
/// r > eps1 (1 + sqrt(2)) (+ analogous allowance for the general family).
bool in_domain(const ChartFamily& chart, const Vec3& p);

/// Toroidal angle and offset cylinder radius of a Cartesian point, resolved
/// by the damped fixed point on zeta with a scalar Newton fallback.
struct ToroidalFrame {
  double zeta = 0.0;
  double rho = 0.0;   // |(x,y) - eps1 (dx, dy)|
  int iters = 0;
  bool converged = false;
};
ToroidalFrame resolve_frame(const ChartFamily& chart, const Vec3& p,
                            double tol = 1e-14);

/// Pressure function directly from a Cartesian point (f-perturbed families
/// only): psi0 - (rho - r0)^2 - z^2 with rho the offset cylinder radius.
double psi_cartesian(const ChartFamily& chart, const Vec3& p);

/// Closed-form Jacobian determinant of the position map (non-raw families).
double jacobian_det_closed_form(const ChartFamily& chart, const Coords& c);

/// Closed-form divergence of the velocity field u = -d position/d theta,
/// equal to -(d_theta detJ)/detJ.
double divergence_analytic(const ChartFamily& chart, const Coords& c);

/// Closed psi-shell psi_min <= psi <= psi_max.
struct DomainSpec {
  double psi_min = 0.6;
  double psi_max = 0.95;
};

struct DomainCheck {
  double min_jacobian = 0.0;   // over the sampled shell
  bool inside_clearance = false;  // image-side conservative region
  double clearance_slack = 0.0;   // min over samples of r - bound
  bool binding = false;           // conservative predicate rejects samples
};

/// Sampled audit of a shell against the chart: Jacobian positivity is the
/// hard requirement (throws std::domain_error when violated); the
/// conservative clearance is reported, not enforced.
DomainCheck check_domain(const ChartFamily& chart, const DomainSpec& dom,
                         int n_samples = 4096, std::uint64_t seed = 1234);

}  // namespace toroflow

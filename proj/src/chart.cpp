#include "toroflow/chart.hpp"

#include <cmath>
#include <sstream>

#include "toroflow/sampling.hpp"

namespace toroflow {

double wrap_angle(double a) {
  double w = std::fmod(a, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  return w;
}

namespace {

// Difference reduced to (-pi, pi].
double wrap_pm_pi(double a) {
  double w = std::fmod(a, kTwoPi);
  if (w <= -M_PI) w += kTwoPi;
  if (w > M_PI) w -= kTwoPi;
  return w;
}

}  // namespace

FSpec FSpec::sin2() {
  TrigPoly p(0.5);
  p.add_cos(2, -0.5);
  return FSpec(Variant::Sin2, p);
}

FSpec FSpec::sin2of3() {
  TrigPoly p(0.5);
  p.add_cos(6, -0.5);
  return FSpec(Variant::Sin2Of3, p);
}

FSpec FSpec::mix() {
  // sin^4(2z) + cos^2(3z) = 7/8 - cos(4z)/2 + cos(6z)/2 + cos(8z)/8
  TrigPoly p(0.875);
  p.add_cos(4, -0.5);
  p.add_cos(6, 0.5);
  p.add_cos(8, 0.125);
  return FSpec(Variant::Mix, p);
}

FSpec FSpec::fourier(TrigPoly series) {
  if (series.cos_coeff(1) != 0.0 || series.sin_coeff(1) != 0.0)
    throw std::invalid_argument(
        "FSpec: the first harmonic of f must vanish, otherwise the planar "
        "offsets acquire secular (non-periodic) terms");
  return FSpec(Variant::FourierCustom, std::move(series));
}

std::string FSpec::name() const {
  switch (variant_) {
    case Variant::Sin2: return "sin2";
    case Variant::Sin2Of3: return "sin2of3";
    case Variant::Mix: return "mix";
    case Variant::FourierCustom: return "fourier";
  }
  return "?";
}

DeltaPair delta_xy_from_f(const TrigPoly& f) {
  return {f.times_sin().antiderivative(), (-f.times_cos()).antiderivative()};
}

DeltaPair delta_xy_from_f(const FSpec& f) { return delta_xy_from_f(f.series()); }

DzGPair DzGPair::example() {
  DzGPair p;
  p.dz.add_sin(4, -1.0);
  p.dz.add_sin(2, -10.0);
  p.g.add_cos(4, 1.0);
  p.g.add_cos(2, -10.0);
  return p;
}

double DzGPair::ode_residual_max(int n_samples) const {
  const TrigPoly dz1 = dz.derivative(), dz2 = dz1.derivative();
  const TrigPoly g1 = g.derivative(), g2 = g1.derivative();
  double worst = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    const double t = kTwoPi * i / n_samples;
    const double r =
        std::sin(t) * (g1(t) - dz2(t)) + std::cos(t) * (dz1(t) + g2(t));
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

namespace {
void require_positive(double v, const char* name) {
  if (!(v > 0.0))
    throw std::invalid_argument(std::string("ChartFamily: ") + name +
                                " must be positive");
}
}  // namespace

ChartFamily ChartFamily::axisymmetric(double psi0, double r0) {
  require_positive(psi0, "psi0");
  require_positive(r0, "r0");
  ChartFamily c;
  c.kind_ = ChartKind::Axisymmetric;
  c.psi0_ = psi0;
  c.r0_ = r0;
  return c;
}

ChartFamily ChartFamily::f_perturbed(double psi0, double r0, double eps,
                                     FSpec f) {
  require_positive(psi0, "psi0");
  require_positive(r0, "r0");
  if (eps < 0.0)
    throw std::invalid_argument("ChartFamily: eps must be nonnegative");
  ChartFamily c;
  c.kind_ = ChartKind::FPerturbed;
  c.psi0_ = psi0;
  c.r0_ = r0;
  c.eps1_ = eps;
  DeltaPair d = delta_xy_from_f(f);
  c.dx_ = std::move(d.dx);
  c.dy_ = std::move(d.dy);
  c.dx1_ = c.dx_.derivative();
  c.dy1_ = c.dy_.derivative();
  c.f_ = std::move(f);
  return c;
}

ChartFamily ChartFamily::f_perturbed_raw(double psi0, double r0, double eps,
                                         TrigPoly dx, TrigPoly dy) {
  require_positive(psi0, "psi0");
  require_positive(r0, "r0");
  ChartFamily c;
  c.kind_ = ChartKind::FPerturbed;
  c.psi0_ = psi0;
  c.r0_ = r0;
  c.eps1_ = eps;
  c.raw_ = true;
  c.dx_ = std::move(dx);
  c.dy_ = std::move(dy);
  c.dx1_ = c.dx_.derivative();
  c.dy1_ = c.dy_.derivative();
  return c;
}

ChartFamily ChartFamily::general_cc1(double psi0, double r0, double eps1,
                                     double eps2, double eps3, FSpec f,
                                     DzGPair dzg) {
  require_positive(psi0, "psi0");
  require_positive(r0, "r0");
  if (eps1 < 0.0)
    throw std::invalid_argument("ChartFamily: eps1 must be nonnegative");
  const double scale =
      std::max(1.0, dzg.dz.sup_bound() + dzg.g.sup_bound());
  const double ode_res = dzg.ode_residual_max();
  if (ode_res > 1e-12 * scale) {
    std::ostringstream os;
    os << "ChartFamily: (dz, g) pair violates the poloidal admissibility "
          "equation sin(t)(g' - dz'') + cos(t)(dz' + g'') = 0 "
          "(max residual " << ode_res << ")";
    throw std::invalid_argument(os.str());
  }
  ChartFamily c;
  c.kind_ = ChartKind::GeneralCC1;
  c.psi0_ = psi0;
  c.r0_ = r0;
  c.eps1_ = eps1;
  c.eps2_ = eps2;
  c.eps3_ = eps3;
  DeltaPair d = delta_xy_from_f(f);
  c.dx_ = std::move(d.dx);
  c.dy_ = std::move(d.dy);
  c.dx1_ = c.dx_.derivative();
  c.dy1_ = c.dy_.derivative();
  c.f_ = std::move(f);
  c.dz1_ = dzg.dz.derivative();
  c.dz2_ = c.dz1_.derivative();
  c.g1_ = dzg.g.derivative();
  c.g2_ = c.g1_.derivative();
  c.dzg_ = std::move(dzg);
  return c;
}

std::string ChartFamily::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case ChartKind::Axisymmetric:
      os << "axisymmetric";
      break;
    case ChartKind::FPerturbed:
      os << "f_perturbed[" << (f_ ? f_->name() : "raw") << ",eps=" << eps1_
         << "]";
      break;
    case ChartKind::GeneralCC1:
      os << "general_cc1[" << (f_ ? f_->name() : "raw") << ",eps1=" << eps1_
         << ",eps2=" << eps2_ << ",eps3=" << eps3_ << "]";
      break;
  }
  return os.str();
}

double ChartFamily::clearance_bound() const {
  double b = eps1_ * (1.0 + std::sqrt(2.0));
  if (kind_ == ChartKind::GeneralCC1)
    b += std::abs(eps2_) + std::abs(eps3_) * dzg_->g.sup_bound();
  return b;
}

bool ChartFamily::comfortable_clearance() const {
  return r0_ > clearance_bound();
}

double ChartFamily::radial_factor(double psi, double theta) const {
  const double s = std::sqrt(psi0_ - psi);
  double r = r0_ + s * std::cos(theta);
  if (kind_ == ChartKind::GeneralCC1)
    r += eps2_ * std::sin(theta) - eps3_ * dzg_->g(theta);
  return r;
}

Vec3 forward(const ChartFamily& chart, const Coords& c) {
  if (c.psi > chart.psi0())
    throw std::domain_error("forward: psi exceeds psi0 (sqrt of negative)");
  auto p = chart.position<double>(c.psi, c.theta, c.zeta);
  return Vec3(p[0], p[1], p[2]);
}

bool in_domain(const ChartFamily& chart, const Coords& c) {
  if (!(c.psi < chart.psi0())) return false;
  const double r = chart.radial_factor(c.psi, c.theta);
  switch (chart.kind()) {
    case ChartKind::Axisymmetric:
      return r > 0.0;
    case ChartKind::FPerturbed:
      if (chart.raw_deltas()) return r > chart.eps1();
      return r > chart.eps1() * chart.fspec()->series()(c.zeta);
    case ChartKind::GeneralCC1: {
      const double bound = chart.eps1() * chart.fspec()->series().sup_bound() +
                           std::abs(chart.eps2()) +
                           std::abs(chart.eps3()) * chart.dzg()->g.sup_bound();
      return r > bound;
    }
  }
  return false;
}

bool in_domain(const ChartFamily& chart, const Vec3& p) {
  return std::hypot(p.x(), p.y()) > chart.clearance_bound();
}

// --- inversion ---------------------------------------------------------------

struct FrameSolver {
  const ChartFamily& chart;
  double x, y;

  double fx(double zeta) const {
    return x - chart.eps1_ * chart.dx_(zeta);
  }
  double fy(double zeta) const {
    return y - chart.eps1_ * chart.dy_(zeta);
  }
  // d/dzeta of atan2(fy, fx)
  double angle_rate(double zeta) const {
    const double xe = fx(zeta), ye = fy(zeta);
    const double r2 = xe * xe + ye * ye;
    return chart.eps1_ * (ye * chart.dx1_(zeta) - xe * chart.dy1_(zeta)) / r2;
  }
};

ToroidalFrame resolve_frame(const ChartFamily& chart, const Vec3& p,
                            double tol) {
  ToroidalFrame out;
  const double x = p.x(), y = p.y();
  if (x == 0.0 && y == 0.0)
    throw std::domain_error("resolve_frame: point lies on the symmetry axis");
  FrameSolver fs{chart, x, y};
  double zeta = std::atan2(y, x);
  if (chart.eps1() == 0.0) {
    out.zeta = zeta;
    out.rho = std::hypot(x, y);
    out.converged = true;
    return out;
  }
  double prev_step = std::numeric_limits<double>::infinity();
  int it = 0;
  const int max_fixed = 60;
  for (; it < max_fixed; ++it) {
    const double target = std::atan2(fs.fy(zeta), fs.fx(zeta));
    double step = wrap_pm_pi(target - zeta);
    if (std::abs(step) < tol) {
      zeta += step;
      out.converged = true;
      ++it;
      break;
    }
    if (std::abs(step) >= prev_step) step *= 0.5;  // damp overshoot
    prev_step = std::abs(step);
    zeta += step;
  }
  if (!out.converged) {
    // scalar Newton on  zeta - atan2(fy(zeta), fx(zeta)) = 0
    for (int k = 0; k < 20 && it < 95; ++k, ++it) {
      const double g = wrap_pm_pi(zeta - std::atan2(fs.fy(zeta), fs.fx(zeta)));
      const double dg = 1.0 - fs.angle_rate(zeta);
      if (dg == 0.0) break;
      const double step = -g / dg;
      zeta += step;
      if (std::abs(step) < tol) {
        out.converged = true;
        break;
      }
    }
  }
  out.zeta = zeta;
  out.rho = std::hypot(fs.fx(zeta), fs.fy(zeta));
  out.iters = it;
  if (!out.converged) {
    const double res =
        std::abs(wrap_pm_pi(zeta - std::atan2(fs.fy(zeta), fs.fx(zeta))));
    throw NonConvergence("resolve_frame: toroidal angle solve stalled", res,
                         it);
  }
  return out;
}

double psi_cartesian(const ChartFamily& chart, const Vec3& p) {
  if (chart.kind() == ChartKind::GeneralCC1)
    throw std::invalid_argument(
        "psi_cartesian: closed poloidal recovery requires eps2 = eps3 = 0; "
        "use invert() for the general family");
  const ToroidalFrame fr = resolve_frame(chart, p);
  const double q = fr.rho - chart.r0();
  return chart.psi0() - q * q - p.z() * p.z();
}

namespace {

struct NewtonState {
  Coords c;
  Vec3 pos;
  double res;
};

NewtonState eval_state(const ChartFamily& chart, const Coords& c,
                       const Vec3& p) {
  const Vec3 q = forward(chart, c);
  return {c, q, (q - p).norm()};
}

}  // namespace

InverseResult invert(const ChartFamily& chart, const Vec3& p, double tol) {
  InverseResult out;
  const double hard = tol * (1.0 + p.norm());
  const double soft = 1e-15 * (1.0 + p.norm());

  ToroidalFrame fr;
  try {
    fr = resolve_frame(chart, p);
  } catch (const NonConvergence&) {
    // Newton below may still rescue the seed.
    fr.zeta = std::atan2(p.y(), p.x());
    fr.rho = std::hypot(p.x() - chart.eps1() * chart.delta_x()(fr.zeta),
                        p.y() - chart.eps1() * chart.delta_y()(fr.zeta));
    fr.iters = 60;
    fr.converged = false;
  }
  out.fixed_point_iters = fr.iters;

  const double q = fr.rho - chart.r0();
  Coords c;
  c.zeta = fr.zeta;
  c.theta = std::atan2(p.z(), q);
  c.psi = chart.psi0() - q * q - p.z() * p.z();

  NewtonState st = eval_state(chart, c, p);
  const int budget = 100;
  int used = out.fixed_point_iters;
  while (st.res > soft && used < budget) {
    // Jacobian by jets of the position map.
    const Jet jp = Jet::variable(st.c.psi, kPsi);
    const Jet jt = Jet::variable(st.c.theta, kTheta);
    const Jet jz = Jet::variable(st.c.zeta, kZeta);
    if (!(st.c.psi < chart.psi0())) {
      st.c.psi = chart.psi0() - 1e-12 * (1.0 + std::abs(chart.psi0()));
      st = eval_state(chart, st.c, p);
    }
    const auto pos = chart.position<Jet>(jp, jt, jz);
    Eigen::Matrix3d d1;
    for (int a = 0; a < 3; ++a)
      for (int i = 0; i < 3; ++i) d1(a, i) = pos[a].g[i];
    const Vec3 rhs = p - st.pos;
    const Vec3 delta = d1.partialPivLu().solve(rhs);
    ++out.newton_iters;
    ++used;
    bool improved = false;
    for (double t = 1.0; t >= 1.0 / 64.0; t *= 0.5) {
      Coords trial{st.c.psi + t * delta[0], st.c.theta + t * delta[1],
                   st.c.zeta + t * delta[2]};
      if (!(trial.psi <= chart.psi0())) continue;
      NewtonState ts = eval_state(chart, trial, p);
      if (ts.res < st.res) {
        st = ts;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  if (st.res > hard)
    throw NonConvergence("invert: residual target not reached", st.res,
                         used);
  out.coords = {st.c.psi, wrap_angle(st.c.theta), wrap_angle(st.c.zeta)};
  out.residual = st.res;
  return out;
}

Coords inverse(const ChartFamily& chart, const Vec3& p) {
  return invert(chart, p).coords;
}

// --- closed forms ------------------------------------------------------------

double jacobian_det_closed_form(const ChartFamily& chart, const Coords& c) {
  if (chart.raw_deltas())
    throw std::invalid_argument(
        "jacobian_det_closed_form: unavailable for raw offset charts");
  if (!(c.psi < chart.psi0()))
    throw std::domain_error("jacobian_det_closed_form: requires psi < psi0");
  const double R = chart.radial_factor(c.psi, c.theta);
  const double f =
      chart.f_ ? chart.f_->series()(c.zeta) : 0.0;
  if (chart.kind_ != ChartKind::GeneralCC1)
    return 0.5 * (R - chart.eps1_ * f);
  const double s = std::sqrt(chart.psi0_ - c.psi);
  const double G1 = chart.g1_(c.theta) * std::sin(c.theta) +
                    chart.dz1_(c.theta) * std::cos(c.theta);
  const double K =
      0.5 - (chart.eps2_ * std::sin(2.0 * c.theta) - chart.eps3_ * G1) /
                (2.0 * s);
  return (R - chart.eps1_ * f) * K;
}

double divergence_analytic(const ChartFamily& chart, const Coords& c) {
  if (chart.raw_deltas())
    throw std::invalid_argument(
        "divergence_analytic: unavailable for raw offset charts");
  if (!(c.psi < chart.psi0()))
    throw std::domain_error("divergence_analytic: requires psi < psi0");
  const double s = std::sqrt(chart.psi0_ - c.psi);
  const double sin_t = std::sin(c.theta), cos_t = std::cos(c.theta);
  const double R = chart.radial_factor(c.psi, c.theta);
  const double f = chart.f_ ? chart.f_->series()(c.zeta) : 0.0;
  const double Rf = R - chart.eps1_ * f;
  if (chart.kind_ != ChartKind::GeneralCC1) return s * sin_t / Rf;
  const double g1 = chart.g1_(c.theta), dz1 = chart.dz1_(c.theta);
  const double g2 = chart.g2_(c.theta), dz2 = chart.dz2_(c.theta);
  const double G1 = g1 * sin_t + dz1 * cos_t;
  const double dG1 = g2 * sin_t + g1 * cos_t + dz2 * cos_t - dz1 * sin_t;
  const double K =
      0.5 - (chart.eps2_ * std::sin(2.0 * c.theta) - chart.eps3_ * G1) /
                (2.0 * s);
  const double dK =
      -(2.0 * chart.eps2_ * std::cos(2.0 * c.theta) - chart.eps3_ * dG1) /
      (2.0 * s);
  const double R_t = -s * sin_t + chart.eps2_ * cos_t - chart.eps3_ * g1;
  return -(R_t * K + Rf * dK) / (Rf * K);
}

DomainCheck check_domain(const ChartFamily& chart, const DomainSpec& dom,
                         int n_samples, std::uint64_t seed) {
  if (!(dom.psi_min < dom.psi_max) || !(dom.psi_max < chart.psi0()))
    throw std::invalid_argument(
        "check_domain: need psi_min < psi_max < psi0");
  DomainCheck out;
  out.min_jacobian = std::numeric_limits<double>::infinity();
  out.clearance_slack = std::numeric_limits<double>::infinity();
  const double bound = chart.clearance_bound();
  int rejected = 0;
  for (int i = 0; i < n_samples; ++i) {
    const Coords c{
        dom.psi_min + (dom.psi_max - dom.psi_min) *
                          sample_u01(seed, static_cast<std::uint64_t>(i), 0),
        kTwoPi * sample_u01(seed, static_cast<std::uint64_t>(i), 1),
        kTwoPi * sample_u01(seed, static_cast<std::uint64_t>(i), 2)};
    double det;
    if (chart.has_closed_form_jacobian()) {
      det = jacobian_det_closed_form(chart, c);
    } else {
      const auto pos = chart.position<Jet>(Jet::variable(c.psi, kPsi),
                                           Jet::variable(c.theta, kTheta),
                                           Jet::variable(c.zeta, kZeta));
      Eigen::Matrix3d d1;
      for (int a = 0; a < 3; ++a)
        for (int k = 0; k < 3; ++k) d1(a, k) = pos[a].g[k];
      det = d1.determinant();
    }
    out.min_jacobian = std::min(out.min_jacobian, det);
    const Vec3 p = forward(chart, c);
    out.clearance_slack =
        std::min(out.clearance_slack, std::hypot(p.x(), p.y()) - bound);
    if (!in_domain(chart, c)) ++rejected;
  }
  if (out.min_jacobian <= 0.0) {
    std::ostringstream os;
    os << "check_domain: Jacobian determinant not positive on shell ["
       << dom.psi_min << ", " << dom.psi_max
       << "] (min sampled value " << out.min_jacobian << ")";
    throw std::domain_error(os.str());
  }
  out.inside_clearance = out.clearance_slack > 0.0;
  out.binding = rejected > 0;
  return out;
}

}  // namespace toroflow

#include <doctest.h>

#include <cmath>

#include "toroflow/chart.hpp"
#include "toroflow/sampling.hpp"

using namespace toroflow;

namespace {

ChartFamily sin2_chart(double eps) {
  return ChartFamily::f_perturbed(1.0, 1.0, eps, FSpec::sin2());
}

ChartFamily cc1_f() {  // figure-caption (f) member
  return ChartFamily::general_cc1(1.0, 1.0, 0.5, 0.05, 0.005,
                                  FSpec::sin2of3(), DzGPair::example());
}

}  // namespace

TEST_CASE("factory validation") {
  CHECK_THROWS_AS(ChartFamily::axisymmetric(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ChartFamily::axisymmetric(1.0, -1.0), std::invalid_argument);

  SUBCASE("custom Fourier profiles reject a first harmonic") {
    TrigPoly bad;
    bad.add_sin(1, 0.2);
    CHECK_THROWS_AS(FSpec::fourier(bad), std::invalid_argument);
    TrigPoly good(0.5);
    good.add_cos(2, -0.5);
    CHECK_NOTHROW(FSpec::fourier(good));
  }
  SUBCASE("inadmissible poloidal pairs are rejected") {
    CHECK(DzGPair::example().ode_residual_max() < 1e-12);
    DzGPair broken;
    broken.dz.add_sin(2, 1.0);  // g = 0: the compatibility ODE fails
    CHECK(broken.ode_residual_max() > 1e-3);
    CHECK_THROWS_AS(ChartFamily::general_cc1(1.0, 1.0, 0.1, 0.0, 0.1,
                                             FSpec::sin2(), broken),
                    std::invalid_argument);
  }
}

TEST_CASE("forward map evaluates the closed-form examples") {
  SUBCASE("degenerate core circle") {
    const ChartFamily chart = ChartFamily::axisymmetric(1.0, 1.0);
    for (double theta : {0.0, 1.2, 4.0}) {
      const Vec3 p = forward(chart, {1.0, theta, 0.0});
      CHECK(p.x() == doctest::Approx(1.0).epsilon(1e-15));
      CHECK(std::abs(p.y()) < 1e-15);
      CHECK(std::abs(p.z()) < 1e-15);
    }
  }
  SUBCASE("perturbed core point at eps = 0.8") {
    const Vec3 p = forward(sin2_chart(0.8), {1.0, 0.0, 0.0});
    CHECK(p.x() == doctest::Approx(7.0 / 15).epsilon(1e-15));
    CHECK(std::abs(p.y()) < 1e-15);
    CHECK(std::abs(p.z()) < 1e-15);
  }
  SUBCASE("outer shell point at eps = 0.8") {
    const Vec3 p = forward(sin2_chart(0.8), {0.95, 0.0, kTwoPi / 4});
    CHECK(std::abs(p.x()) < 1e-15);
    CHECK(p.y() ==
          doctest::Approx(1.0 + std::sqrt(0.05) - 0.8 / 3).epsilon(1e-15));
    CHECK(std::abs(p.z()) < 1e-15);
  }
  SUBCASE("psi above psi0 is rejected") {
    CHECK_THROWS_AS(forward(sin2_chart(0.3), {1.0 + 1e-9, 0.0, 0.0}),
                    std::domain_error);
  }
}

TEST_CASE("closed-form Jacobian") {
  SUBCASE("printed example at eps = 0.8") {
    const double J =
        jacobian_det_closed_form(sin2_chart(0.8), {0.95, 0.0, kTwoPi / 4});
    CHECK(std::abs(J) ==
          doctest::Approx(0.5 * (1.0 + std::sqrt(0.05) - 0.8)).epsilon(1e-12));
    CHECK(std::abs(std::abs(J) - 0.2118034) < 1e-7);
  }
  SUBCASE("unperturbed value is rho / 2") {
    const ChartFamily chart = ChartFamily::axisymmetric(1.0, 1.0);
    for (double theta : {0.0, 0.9, 2.5}) {
      const Coords c{0.8, theta, 1.3};
      const double rho = chart.radial_factor(c.psi, c.theta);
      CHECK(std::abs(jacobian_det_closed_form(chart, c)) ==
            doctest::Approx(0.5 * rho).epsilon(1e-15));
    }
  }
}

TEST_CASE("round trips through the inverse map") {
  const DomainSpec dom{0.6, 0.95};
  int checked = 0;
  for (const ChartFamily& chart :
       {ChartFamily::axisymmetric(1.0, 1.0), sin2_chart(0.3),
        ChartFamily::f_perturbed(1.0, 1.0, 0.2, FSpec::mix())}) {
    for (const Coords& c : sample_shell(chart, dom, 40, 99, 0.02)) {
      const Vec3 p = forward(chart, c);
      const InverseResult inv = invert(chart, p);
      CHECK(inv.coords.psi == doctest::Approx(c.psi).epsilon(1e-10));
      const double dth =
          std::remainder(inv.coords.theta - c.theta, kTwoPi);
      const double dze = std::remainder(inv.coords.zeta - c.zeta, kTwoPi);
      CHECK(std::abs(dth) < 1e-9);
      CHECK(std::abs(dze) < 1e-9);
      const Vec3 back = forward(chart, inv.coords);
      CHECK((back - p).norm() < 1e-11 * (1.0 + p.norm()));
      ++checked;
    }
  }
  CHECK(checked == 120);

  SUBCASE("shallower shell for the general family") {
    const ChartFamily chart = cc1_f();
    for (const Coords& c : sample_shell(chart, {0.8, 0.95}, 40, 7, 0.02)) {
      const Coords r = inverse(chart, forward(chart, c));
      CHECK(r.psi == doctest::Approx(c.psi).epsilon(1e-10));
      CHECK(std::abs(std::remainder(r.theta - c.theta, kTwoPi)) < 1e-9);
      CHECK(std::abs(std::remainder(r.zeta - c.zeta, kTwoPi)) < 1e-9);
    }
  }
}

TEST_CASE("inverse converges quickly at the reference point") {
  const ChartFamily chart = sin2_chart(0.3);
  const Vec3 p = forward(chart, {0.9, 1.0, 2.0});
  const InverseResult inv = invert(chart, p);
  const int total = inv.fixed_point_iters + inv.newton_iters;
  INFO("iterations: fixed point ", inv.fixed_point_iters, ", newton ",
       inv.newton_iters, ", residual ", inv.residual);
  CHECK(total <= 30);
  CHECK(inv.residual <= 1e-12 * (1.0 + p.norm()));
}

TEST_CASE("returned angles are reduced to [0, 2pi)") {
  const ChartFamily chart = sin2_chart(0.3);
  const Vec3 p = forward(chart, {0.85, -1.0, 9.0});
  const Coords c = inverse(chart, p);
  CHECK(c.theta >= 0.0);
  CHECK(c.theta < kTwoPi);
  CHECK(c.zeta >= 0.0);
  CHECK(c.zeta < kTwoPi);
  CHECK(std::abs(std::remainder(c.theta - (-1.0), kTwoPi)) < 1e-9);
  CHECK(std::abs(std::remainder(c.zeta - 9.0, kTwoPi)) < 1e-9);
}

TEST_CASE("degenerate inversion inputs raise diagnostics") {
  SUBCASE("points on the symmetry axis have no toroidal angle") {
    CHECK_THROWS_AS(inverse(sin2_chart(0.8), Vec3(0.0, 0.0, 0.0)),
                    std::domain_error);
  }
  SUBCASE("an unsolvable angle equation reports the stall") {
    // raw first-harmonic offsets shift the tube rigidly outward, so for
    // points inside the shifted hole arg(p - eps delta(zeta)) = zeta + pi
    // identically and the frame equation has no solution
    const ChartFamily shifted = ChartFamily::f_perturbed_raw(
        1.0, 1.0, 0.5, TrigPoly::harmonic_cos(1, 1.0),
        TrigPoly::harmonic_sin(1, 1.0));
    try {
      resolve_frame(shifted, Vec3(0.1, 0.0, 0.05));
      CHECK(false);
    } catch (const NonConvergence& e) {
      CHECK(e.residual > 1e-6);
      CHECK(e.iterations > 0);
    }
  }
}

TEST_CASE("psi recovery straight from Cartesian points") {
  for (const ChartFamily& chart :
       {ChartFamily::axisymmetric(1.0, 1.0), sin2_chart(0.3)}) {
    for (const Coords& c : sample_shell(chart, {0.6, 0.95}, 25, 3, 0.02)) {
      const Vec3 p = forward(chart, c);
      CHECK(psi_cartesian(chart, p) == doctest::Approx(c.psi).epsilon(1e-11));
    }
  }
  CHECK_THROWS_AS(psi_cartesian(cc1_f(), Vec3(1.5, 0.0, 0.0)),
                  std::invalid_argument);

  SUBCASE("recovery degrades once the core clearance is violated") {
    // eps = 0.8 exceeds r0 / (1 + sqrt(2)), the map stops being injective on
    // the deep shell and frame resolution can land on the wrong preimage
    const ChartFamily chart = sin2_chart(0.8);
    double worst = 0.0;
    for (const Coords& c : sample_shell(chart, {0.6, 0.95}, 200, 3, 0.02)) {
      const Vec3 p = forward(chart, c);
      worst = std::max(worst, std::abs(psi_cartesian(chart, p) - c.psi));
    }
    CHECK(worst > 0.1);
  }
}

TEST_CASE("toroidal frame resolution reports convergence") {
  const ChartFamily chart = sin2_chart(0.3);
  const Vec3 p = forward(chart, {0.9, 0.7, 1.9});
  const ToroidalFrame fr = resolve_frame(chart, p);
  CHECK(fr.converged);
  CHECK(fr.iters > 0);
  CHECK(fr.rho > 0.0);
  // rho is the offset cylinder radius |(x, y) - eps (dx, dy)|
  const double dx = chart.delta_x()(fr.zeta), dy = chart.delta_y()(fr.zeta);
  CHECK(fr.rho == doctest::Approx(std::hypot(p.x() - 0.3 * dx,
                                             p.y() - 0.3 * dy))
                      .epsilon(1e-13));
}

TEST_CASE("maps are 2pi-periodic in both angles") {
  for (const ChartFamily& chart : {sin2_chart(0.6), cc1_f()}) {
    for (const Coords& c :
         {Coords{0.9, 0.3, 1.1}, Coords{0.85, 2.9, 4.0}, Coords{0.93, 5.1, 0.2}}) {
      const Vec3 p = forward(chart, c);
      const Vec3 pt = forward(chart, {c.psi, c.theta + kTwoPi, c.zeta});
      const Vec3 pz = forward(chart, {c.psi, c.theta, c.zeta + kTwoPi});
      CHECK((pt - p).norm() < 1e-13);
      CHECK((pz - p).norm() < 1e-13);
    }
  }
}

TEST_CASE("domain predicates") {
  SUBCASE("coordinate side tracks Jacobian clearance") {
    const ChartFamily chart = sin2_chart(0.8);
    CHECK(in_domain(chart, Coords{0.95, 0.0, 0.0}));
    // inner equator against the peak of f: R - eps f < 0
    CHECK_FALSE(in_domain(chart, Coords{0.0, kTwoPi / 2, kTwoPi / 4}));
  }
  SUBCASE("image side uses the conservative clearance radius") {
    const ChartFamily chart = sin2_chart(0.3);
    CHECK(chart.comfortable_clearance());
    CHECK(chart.clearance_bound() ==
          doctest::Approx(0.3 * (1.0 + std::sqrt(2.0))).epsilon(1e-15));
    CHECK(in_domain(chart, Vec3(1.2, 0.0, 0.1)));
    CHECK_FALSE(in_domain(chart, Vec3(0.1, 0.0, 0.0)));
    CHECK_FALSE(sin2_chart(0.8).comfortable_clearance());
  }
  SUBCASE("shell audit enforces Jacobian positivity only") {
    CHECK_THROWS_AS(check_domain(cc1_f(), {0.6, 0.95}), std::domain_error);
    const DomainCheck ok = check_domain(cc1_f(), {0.8, 0.95});
    CHECK(ok.min_jacobian > 0.0);
    CHECK(ok.binding);  // conservative image bound rejects, but J > 0 decides
    const DomainCheck ax =
        check_domain(ChartFamily::axisymmetric(1.0, 1.0), {0.6, 0.95});
    CHECK(ax.min_jacobian > 0.0);
    CHECK(ax.inside_clearance);
    CHECK(ax.clearance_slack > 0.0);
  }
}

TEST_CASE("wrap_angle reduces to [0, 2pi)") {
  CHECK(wrap_angle(0.0) == 0.0);
  CHECK(wrap_angle(kTwoPi) == 0.0);
  CHECK(wrap_angle(-0.5) == doctest::Approx(kTwoPi - 0.5).epsilon(1e-15));
  CHECK(wrap_angle(7.0) == doctest::Approx(7.0 - kTwoPi).epsilon(1e-15));
}

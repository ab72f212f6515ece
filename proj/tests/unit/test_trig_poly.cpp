#include <doctest.h>

#include <cmath>

#include "toroflow/chart.hpp"
#include "toroflow/quadrature.hpp"
#include "toroflow/trig_poly.hpp"

using namespace toroflow;

namespace {

TrigPoly sin2_series() {  // sin^2 z = 1/2 - cos(2z)/2
  TrigPoly f(0.5);
  f.add_cos(2, -0.5);
  return f;
}

}  // namespace

TEST_CASE("coefficient accessors and evaluation") {
  TrigPoly p(1.0);
  p.add_cos(3, 2.0);
  p.add_sin(1, -0.5);
  CHECK(p.constant_term() == 1.0);
  CHECK(p.cos_coeff(3) == 2.0);
  CHECK(p.sin_coeff(1) == -0.5);
  CHECK(p.cos_coeff(7) == 0.0);
  CHECK(p.max_harmonic() == 3);
  const double z = 0.83;
  CHECK(p(z) ==
        doctest::Approx(1.0 + 2.0 * std::cos(3 * z) - 0.5 * std::sin(z))
            .epsilon(1e-15));
}

TEST_CASE("derivative and antiderivative invert each other") {
  TrigPoly p;
  p.add_cos(2, 1.5);
  p.add_sin(5, -0.25);
  const TrigPoly q = p.antiderivative().derivative();
  for (int k = 1; k <= 6; ++k) {
    CHECK(q.cos_coeff(k) == doctest::Approx(p.cos_coeff(k)).epsilon(1e-16));
    CHECK(q.sin_coeff(k) == doctest::Approx(p.sin_coeff(k)).epsilon(1e-16));
  }
  CHECK(q.constant_term() == 0.0);
}

TEST_CASE("antiderivative of a nonzero-mean series is rejected as secular") {
  CHECK_THROWS_AS(TrigPoly(0.3).antiderivative(), std::invalid_argument);
  CHECK_NOTHROW(TrigPoly::harmonic_cos(2, 1.0).antiderivative());
}

TEST_CASE("products with sin and cos match pointwise evaluation") {
  TrigPoly p(0.7);
  p.add_cos(1, -0.3);  // k=1 terms exercise the constant-term fold
  p.add_sin(1, 0.4);
  p.add_cos(4, 1.1);
  p.add_sin(3, -0.6);
  for (double z : {0.0, 0.41, 1.7, 3.9, 5.5}) {
    CHECK(p.times_sin()(z) ==
          doctest::Approx(p(z) * std::sin(z)).epsilon(1e-14));
    CHECK(p.times_cos()(z) ==
          doctest::Approx(p(z) * std::cos(z)).epsilon(1e-14));
  }
}

TEST_CASE("sup bound dominates the pointwise maximum") {
  TrigPoly p(0.2);
  p.add_cos(2, 0.9);
  p.add_sin(2, -0.4);
  p.add_sin(6, 0.35);
  double m = 0.0;
  for (int i = 0; i < 4096; ++i)
    m = std::max(m, std::abs(p(kTwoPi * i / 4096.0)));
  CHECK(p.sup_bound() >= m);
  CHECK(p.sup_bound() <= m + 2.0);  // coefficient bound is not wildly loose
}

TEST_CASE("sin^2 offsets freeze to the printed closed forms") {
  const DeltaPair d = delta_xy_from_f(FSpec::sin2());
  // delta_x = -(3/4) cos z + (1/12) cos 3z  ==  -cos z (1 - cos^2 z / 3)
  CHECK(d.dx.cos_coeff(1) == doctest::Approx(-0.75).epsilon(1e-16));
  CHECK(d.dx.cos_coeff(3) == doctest::Approx(1.0 / 12).epsilon(1e-16));
  CHECK(d.dx.constant_term() == 0.0);
  // delta_y = -(1/4) sin z + (1/12) sin 3z  ==  -(1/3) sin^3 z
  CHECK(d.dy.sin_coeff(1) == doctest::Approx(-0.25).epsilon(1e-16));
  CHECK(d.dy.sin_coeff(3) == doctest::Approx(1.0 / 12).epsilon(1e-16));
  for (double z : {0.3, 1.1, 2.9, 4.2}) {
    CHECK(d.dx(z) == doctest::Approx(-std::cos(z) *
                                     (1 - std::cos(z) * std::cos(z) / 3))
                         .epsilon(1e-15));
    CHECK(d.dy(z) == doctest::Approx(-std::pow(std::sin(z), 3) / 3)
                         .epsilon(1e-15));
  }
}

TEST_CASE("sin^2(3z) offsets freeze to the printed closed forms") {
  const DeltaPair d = delta_xy_from_f(FSpec::sin2of3());
  CHECK(d.dx.cos_coeff(1) == doctest::Approx(-0.5).epsilon(1e-16));
  CHECK(d.dx.cos_coeff(5) == doctest::Approx(-1.0 / 20).epsilon(1e-16));
  CHECK(d.dx.cos_coeff(7) == doctest::Approx(1.0 / 28).epsilon(1e-16));
  CHECK(d.dx(0.0) == doctest::Approx(-18.0 / 35).epsilon(1e-15));
  CHECK(d.dy.sin_coeff(1) == doctest::Approx(-0.5).epsilon(1e-16));
  CHECK(d.dy.sin_coeff(5) == doctest::Approx(1.0 / 20).epsilon(1e-16));
  CHECK(d.dy.sin_coeff(7) == doctest::Approx(1.0 / 28).epsilon(1e-16));
}

TEST_CASE("mixed-profile offsets freeze to the printed closed forms") {
  const DeltaPair d = delta_xy_from_f(FSpec::mix());
  // f = sin^4(2z) + cos^2(3z) = 7/8 - cos4z/2 + cos6z/2 + cos8z/8
  const TrigPoly& f = FSpec::mix().series();
  CHECK(f.constant_term() == doctest::Approx(7.0 / 8).epsilon(1e-16));
  CHECK(f.cos_coeff(4) == doctest::Approx(-0.5).epsilon(1e-16));
  CHECK(f.cos_coeff(6) == doctest::Approx(0.5).epsilon(1e-16));
  CHECK(f.cos_coeff(8) == doctest::Approx(0.125).epsilon(1e-16));

  CHECK(d.dx.cos_coeff(1) == doctest::Approx(-7.0 / 8).epsilon(1e-16));
  CHECK(d.dx.cos_coeff(3) == doctest::Approx(-1.0 / 12).epsilon(1e-16));
  CHECK(d.dx.cos_coeff(5) == doctest::Approx(1.0 / 10).epsilon(1e-16));
  CHECK(d.dx.cos_coeff(7) == doctest::Approx(-3.0 / 112).epsilon(1e-16));
  CHECK(d.dx.cos_coeff(9) == doctest::Approx(-1.0 / 144).epsilon(1e-16));

  CHECK(d.dy.sin_coeff(1) == doctest::Approx(-7.0 / 8).epsilon(1e-16));
  CHECK(d.dy.sin_coeff(3) == doctest::Approx(1.0 / 12).epsilon(1e-16));
  CHECK(d.dy.sin_coeff(5) == 0.0);  // the two product terms cancel exactly
  CHECK(d.dy.sin_coeff(7) == doctest::Approx(-5.0 / 112).epsilon(1e-16));
  CHECK(d.dy.sin_coeff(9) == doctest::Approx(-1.0 / 144).epsilon(1e-16));
}

TEST_CASE("offsets agree with an independent quadrature construction") {
  // delta_x(z) - delta_x(0) = int_0^z f(t) sin t dt, and the mean of delta_x
  // over a period vanishes; both via adaptive quadrature, no coefficients.
  for (const FSpec& f : {FSpec::sin2(), FSpec::sin2of3(), FSpec::mix()}) {
    const DeltaPair d = delta_xy_from_f(f);
    const TrigPoly& series = f.series();
    for (double z : {0.7, 2.2, 5.1}) {
      const double ix =
          integrate([&](double t) { return series(t) * std::sin(t); }, 0.0, z);
      const double iy =
          integrate([&](double t) { return -series(t) * std::cos(t); }, 0.0, z);
      CHECK(d.dx(z) - d.dx(0.0) == doctest::Approx(ix).epsilon(1e-12));
      CHECK(d.dy(z) - d.dy(0.0) == doctest::Approx(iy).epsilon(1e-12));
    }
    const double mean_x = integrate([&](double t) { return d.dx(t); }, 0.0,
                                    kTwoPi);
    const double mean_y = integrate([&](double t) { return d.dy(t); }, 0.0,
                                    kTwoPi);
    CHECK(std::abs(mean_x) < 1e-12);
    CHECK(std::abs(mean_y) < 1e-12);
  }
}

TEST_CASE("sin^2 offsets satisfy the paper bounds with attainment") {
  const DeltaPair d = delta_xy_from_f(sin2_series());
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double z = kTwoPi * i / 10000.0;
    mx = std::max(mx, std::abs(d.dx(z)));
    my = std::max(my, std::abs(d.dy(z)));
  }
  CHECK(mx <= 2.0 / 3 + 1e-15);
  CHECK(my <= 1.0 / 3 + 1e-15);
  CHECK(std::abs(d.dx(0.0)) == doctest::Approx(2.0 / 3).epsilon(1e-15));
  CHECK(std::abs(d.dy(kTwoPi / 4)) == doctest::Approx(1.0 / 3).epsilon(1e-15));
}

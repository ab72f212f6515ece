#pragma once

#include <array>
#include <cmath>

namespace toroflow {

/// Truncated second-order Taylor scalar in three independent variables.
///
/// A Jet carries a value, the gradient with respect to the three chart
/// coordinates, and the symmetric Hessian stored as a packed lower triangle
/// in the order (0,0),(1,0),(1,1),(2,0),(2,1),(2,2).  Arithmetic propagates
/// derivatives exactly (no truncation beyond second order, no difference
/// quotients), so expressions built from +,-,*,/ and sqrt/sin/cos deliver
/// first and second derivatives accurate to rounding.
struct Jet {
  double v = 0.0;
  std::array<double, 3> g{0.0, 0.0, 0.0};
  std::array<double, 6> h{0.0, 0.0, 0.0, 0.0, 0.0, 0.0};

  Jet() = default;
  Jet(double value) : v(value) {}  // constant (zero derivatives)

  /// Seed for independent variable `index` (0,1,2) holding `value`.
  static Jet variable(double value, int index) {
    Jet j(value);
    j.g[static_cast<std::size_t>(index)] = 1.0;
    return j;
  }

  /// Packed index of Hessian entry (i,j); order of i,j does not matter.
  static constexpr std::size_t hidx(std::size_t i, std::size_t j) {
    return (i >= j) ? i * (i + 1) / 2 + j : j * (j + 1) / 2 + i;
  }

  double hess(std::size_t i, std::size_t j) const { return h[hidx(i, j)]; }
};

namespace detail {
// Row/column of each packed Hessian slot, shared by the chain rules below.
inline constexpr std::array<std::size_t, 6> kRow{0, 1, 1, 2, 2, 2};
inline constexpr std::array<std::size_t, 6> kCol{0, 0, 1, 0, 1, 2};

/// f composed with u given f(u.v), f'(u.v), f''(u.v).
inline Jet compose(const Jet& u, double f, double d1, double d2) {
  Jet r(f);
  for (std::size_t i = 0; i < 3; ++i) r.g[i] = d1 * u.g[i];
  for (std::size_t m = 0; m < 6; ++m)
    r.h[m] = d1 * u.h[m] + d2 * u.g[kRow[m]] * u.g[kCol[m]];
  return r;
}
}  // namespace detail

inline Jet operator+(const Jet& a, const Jet& b) {
  Jet r(a.v + b.v);
  for (std::size_t i = 0; i < 3; ++i) r.g[i] = a.g[i] + b.g[i];
  for (std::size_t m = 0; m < 6; ++m) r.h[m] = a.h[m] + b.h[m];
  return r;
}

inline Jet operator-(const Jet& a, const Jet& b) {
  Jet r(a.v - b.v);
  for (std::size_t i = 0; i < 3; ++i) r.g[i] = a.g[i] - b.g[i];
  for (std::size_t m = 0; m < 6; ++m) r.h[m] = a.h[m] - b.h[m];
  return r;
}

inline Jet operator-(const Jet& a) {
  Jet r(-a.v);
  for (std::size_t i = 0; i < 3; ++i) r.g[i] = -a.g[i];
  for (std::size_t m = 0; m < 6; ++m) r.h[m] = -a.h[m];
  return r;
}

inline Jet operator*(const Jet& a, const Jet& b) {
  Jet r(a.v * b.v);
  for (std::size_t i = 0; i < 3; ++i) r.g[i] = a.v * b.g[i] + b.v * a.g[i];
  for (std::size_t m = 0; m < 6; ++m) {
    const std::size_t i = detail::kRow[m], j = detail::kCol[m];
    r.h[m] = a.v * b.h[m] + b.v * a.h[m] + a.g[i] * b.g[j] + a.g[j] * b.g[i];
  }
  return r;
}

inline Jet operator*(double c, const Jet& a) {
  Jet r(c * a.v);
  for (std::size_t i = 0; i < 3; ++i) r.g[i] = c * a.g[i];
  for (std::size_t m = 0; m < 6; ++m) r.h[m] = c * a.h[m];
  return r;
}

inline Jet operator*(const Jet& a, double c) { return c * a; }
inline Jet operator+(const Jet& a, double c) { Jet r = a; r.v += c; return r; }
inline Jet operator+(double c, const Jet& a) { return a + c; }
inline Jet operator-(const Jet& a, double c) { Jet r = a; r.v -= c; return r; }
inline Jet operator-(double c, const Jet& a) { return (-a) + c; }

inline Jet inverse(const Jet& b) {
  const double u = 1.0 / b.v;
  return detail::compose(b, u, -u * u, 2.0 * u * u * u);
}

inline Jet operator/(const Jet& a, const Jet& b) { return a * inverse(b); }
inline Jet operator/(const Jet& a, double c) { return a * (1.0 / c); }
inline Jet operator/(double c, const Jet& b) { return c * inverse(b); }

inline Jet sqrt(const Jet& u) {
  const double r = std::sqrt(u.v);
  const double d1 = 0.5 / r;
  return detail::compose(u, r, d1, -0.5 * d1 / u.v);
}

inline Jet sin(const Jet& u) {
  const double s = std::sin(u.v), c = std::cos(u.v);
  return detail::compose(u, s, c, -s);
}

inline Jet cos(const Jet& u) {
  const double s = std::sin(u.v), c = std::cos(u.v);
  return detail::compose(u, c, -s, -c);
}

}  // namespace toroflow

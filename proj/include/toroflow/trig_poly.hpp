#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

namespace toroflow {

/// Finite real trigonometric polynomial  a0 + sum_k ( c_k cos(kx) + s_k sin(kx) ).
///
/// This is the coefficient calculus behind every angular profile in the chart
/// families: the perturbation profiles f, the planar offsets (delta_x, delta_y)
/// obtained from them by antidifferentiation, and the poloidal pair (delta_z, g).
/// Products with sin/cos and antiderivatives are carried out exactly on the
/// coefficients, so downstream identities are limited only by rounding.
class TrigPoly {
 public:
  TrigPoly() = default;
  explicit TrigPoly(double constant) : a0_(constant) {}

  static TrigPoly harmonic_cos(int k, double c) {
    TrigPoly p;
    p.add_cos(k, c);
    return p;
  }
  static TrigPoly harmonic_sin(int k, double s) {
    TrigPoly p;
    p.add_sin(k, s);
    return p;
  }

  void add_cos(int k, double c) {
    if (k < 0) throw std::invalid_argument("TrigPoly: harmonic index must be >= 0");
    if (k == 0) {
      a0_ += c;
      return;
    }
    terms_[k].first += c;
  }

  void add_sin(int k, double s) {
    if (k < 0) throw std::invalid_argument("TrigPoly: harmonic index must be >= 0");
    if (k == 0) return;  // sin(0) == 0
    terms_[k].second += s;
  }

  double constant_term() const { return a0_; }
  double cos_coeff(int k) const {
    auto it = terms_.find(k);
    return it == terms_.end() ? 0.0 : it->second.first;
  }
  double sin_coeff(int k) const {
    auto it = terms_.find(k);
    return it == terms_.end() ? 0.0 : it->second.second;
  }
  int max_harmonic() const { return terms_.empty() ? 0 : terms_.rbegin()->first; }

  /// Evaluate at x; T is double or Jet (needs sin/cos via ADL).
  template <class T>
  T operator()(const T& x) const {
    using std::cos;
    using std::sin;
    T acc(a0_);
    for (const auto& [k, cs] : terms_) {
      const T kx = static_cast<double>(k) * x;
      if (cs.first != 0.0) acc = acc + cs.first * cos(kx);
      if (cs.second != 0.0) acc = acc + cs.second * sin(kx);
    }
    return acc;
  }

  TrigPoly derivative() const {
    TrigPoly d;
    for (const auto& [k, cs] : terms_) {
      d.add_cos(k, k * cs.second);
      d.add_sin(k, -k * cs.first);
    }
    return d;
  }

  /// Zero-mean antiderivative; requires a vanishing constant term, otherwise
  /// the antiderivative would be secular (non-periodic).
  TrigPoly antiderivative() const {
    if (std::abs(a0_) > 0.0)
      throw std::invalid_argument(
          "TrigPoly: antiderivative of a nonzero-mean series is not periodic "
          "(constant term " + std::to_string(a0_) + ")");
    TrigPoly p;
    for (const auto& [k, cs] : terms_) {
      p.add_sin(k, cs.first / k);
      p.add_cos(k, -cs.second / k);
    }
    return p;
  }

  /// Product with sin(x), reduced to a trig polynomial.
  TrigPoly times_sin() const {
    TrigPoly p;
    p.add_sin(1, a0_);
    for (const auto& [k, cs] : terms_) {
      // cos(kx) sin(x) = (sin((k+1)x) - sin((k-1)x)) / 2
      p.add_sin(k + 1, 0.5 * cs.first);
      p.add_sin(k - 1, -0.5 * cs.first);
      // sin(kx) sin(x) = (cos((k-1)x) - cos((k+1)x)) / 2
      p.add_cos(k - 1, 0.5 * cs.second);
      p.add_cos(k + 1, -0.5 * cs.second);
    }
    p.prune();
    return p;
  }

  /// Product with cos(x), reduced to a trig polynomial.
  TrigPoly times_cos() const {
    TrigPoly p;
    p.add_cos(1, a0_);
    for (const auto& [k, cs] : terms_) {
      // cos(kx) cos(x) = (cos((k+1)x) + cos((k-1)x)) / 2
      p.add_cos(k + 1, 0.5 * cs.first);
      p.add_cos(k - 1, 0.5 * cs.first);
      // sin(kx) cos(x) = (sin((k+1)x) + sin((k-1)x)) / 2
      p.add_sin(k + 1, 0.5 * cs.second);
      p.add_sin(k - 1, 0.5 * cs.second);
    }
    p.prune();
    return p;
  }

  TrigPoly operator+(const TrigPoly& o) const {
    TrigPoly p = *this;
    p.a0_ += o.a0_;
    for (const auto& [k, cs] : o.terms_) {
      p.add_cos(k, cs.first);
      p.add_sin(k, cs.second);
    }
    p.prune();
    return p;
  }

  TrigPoly operator*(double c) const {
    TrigPoly p = *this;
    p.a0_ *= c;
    for (auto& [k, cs] : p.terms_) {
      cs.first *= c;
      cs.second *= c;
    }
    return p;
  }

  TrigPoly operator-() const { return (*this) * -1.0; }
  TrigPoly operator-(const TrigPoly& o) const { return *this + (-o); }

  /// Upper bound on sup |p| from coefficient magnitudes.
  double sup_bound() const {
    double b = std::abs(a0_);
    for (const auto& [k, cs] : terms_) b += std::hypot(cs.first, cs.second);
    return b;
  }

  bool is_zero(double tol = 0.0) const {
    if (std::abs(a0_) > tol) return false;
    for (const auto& [k, cs] : terms_)
      if (std::abs(cs.first) > tol || std::abs(cs.second) > tol) return false;
    return true;
  }

 private:
  void prune() {
    for (auto it = terms_.begin(); it != terms_.end();) {
      if (it->second.first == 0.0 && it->second.second == 0.0)
        it = terms_.erase(it);
      else
        ++it;
    }
  }

  double a0_ = 0.0;
  // harmonic index -> (cos coefficient, sin coefficient); ordered for
  // deterministic iteration.
  std::map<int, std::pair<double, double>> terms_;
};

inline TrigPoly operator*(double c, const TrigPoly& p) { return p * c; }

}  // namespace toroflow

#include "toroflow/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace toroflow {

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
  if (a == b) return 0.0;
  if (a > b) return -integrate(f, b, a, tol);
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, a, b, 12, tol);
}

}  // namespace toroflow

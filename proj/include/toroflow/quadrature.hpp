#pragma once

#include <functional>

namespace toroflow {

/// Adaptive Gauss-Kronrod (15-point) integral of f over [a, b]; oriented,
/// so a > b yields the negated integral.  The termination tolerance is far
/// below the 1e-11 accuracy the potential construction relies on.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-13);

}  // namespace toroflow

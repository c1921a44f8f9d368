#pragma once

#include <functional>

namespace uhlab {

// Integral of f over [a,b], adaptive Gauss-Kronrod 7/15 with worst-interval
// bisection. Nodes are interior, so integrable endpoint singularities
// (t^alpha, alpha > -1) are handled by refinement alone. Throws
// QuadratureError when the error budget cannot be met.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-10);

// Inverse of a continuous strictly increasing g with g(0) = 0: the t >= 0
// with g(t) = s, s >= 0. Bracket by doubling/halving from `hint`, then
// bisection to relative width rel_tol. g may return +inf above its range.
double invert_increasing(const std::function<double(double)>& g, double s,
                         double rel_tol = 1e-12, double hint = 1.0);

// Argmax of a unimodal f on [a,b] by golden-section search.
double golden_section_max(const std::function<double(double)>& f, double a,
                          double b, double rel_tol = 1e-10);

} // namespace uhlab

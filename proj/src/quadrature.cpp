#include "uhlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "uhlab/errors.hpp"

namespace uhlab {
namespace {

// Gauss-Kronrod 7/15 on [-1,1]; Kronrod nodes (symmetric) and weights,
// Gauss-7 weights on the shared odd-indexed nodes.
constexpr double kron_x[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
constexpr double kron_w[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double gauss_w[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct PanelResult {
  double integral;
  double error;
};

PanelResult gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double s = 0.5 * (b - a);
  double fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(c - s * kron_x[i]);
    fv[14 - i] = f(c + s * kron_x[i]);
  }
  fv[7] = f(c);
  double kron = kron_w[7] * fv[7];
  double gauss = gauss_w[3] * fv[7];
  for (int i = 0; i < 7; ++i) {
    kron += kron_w[i] * (fv[i] + fv[14 - i]);
    if (i % 2 == 1) gauss += gauss_w[i / 2] * (fv[i] + fv[14 - i]);
  }
  kron *= s;
  gauss *= s;
  double err = std::abs(kron - gauss);
  // standard Kronrod error sharpening
  err = std::pow(200.0 * err, 1.5);
  if (!(err < std::abs(kron - gauss))) err = std::abs(kron - gauss);
  return {kron, std::max(err, std::numeric_limits<double>::epsilon() * std::abs(kron))};
}

struct Panel {
  double a, b, integral, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol) {
  if (a == b) return 0.0;
  double sign = 1.0;
  if (a > b) {
    std::swap(a, b);
    sign = -1.0;
  }
  std::priority_queue<Panel> panels;
  PanelResult r = gk15(f, a, b);
  panels.push({a, b, r.integral, r.error});
  double total = r.integral, total_err = r.error;
  const int max_panels = 4000;
  int n = 1;
  while (total_err > abs_tol && n < max_panels) {
    Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      // interval at float resolution; nothing further to split
      panels.push(worst);
      break;
    }
    PanelResult left = gk15(f, worst.a, mid);
    PanelResult right = gk15(f, mid, worst.b);
    total += left.integral + right.integral - worst.integral;
    total_err += left.error + right.error - worst.error;
    panels.push({worst.a, mid, left.integral, left.error});
    panels.push({mid, worst.b, right.integral, right.error});
    ++n;
  }
  if (!(total_err <= abs_tol) && !(total_err <= 1e-13 * std::abs(total))) {
    Panel worst = panels.top();
    throw QuadratureError("adaptive quadrature stalled above tolerance", worst.a,
                          worst.b, total_err);
  }
  if (!std::isfinite(total))
    throw QuadratureError("non-finite integral", a, b, total_err);
  return sign * total;
}

double invert_increasing(const std::function<double(double)>& g, double s,
                         double rel_tol, double hint) {
  if (!(s >= 0.0)) throw std::domain_error("invert_increasing: s must be >= 0");
  if (s == 0.0) return 0.0;
  double hi = hint > 0.0 ? hint : 1.0;
  int guard = 0;
  while (!(g(hi) >= s)) {
    hi *= 2.0;
    if (++guard > 2400)
      throw IterationError("invert_increasing: no upper bracket", hi, guard);
  }
  double lo = hi * 0.5;
  guard = 0;
  while (lo > 0.0 && g(lo) > s) {
    hi = lo;
    lo *= 0.5;
    if (++guard > 2400) break;
  }
  if (!(lo > 0.0)) lo = 0.0;
  // bisection; monotone g, bracket [lo, hi] with g(lo) <= s <= g(hi)
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (g(mid) < s)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= rel_tol * std::max(hi, 1e-300)) break;
  }
  return 0.5 * (lo + hi);
}

double golden_section_max(const std::function<double(double)>& f, double a,
                          double b, double rel_tol) {
  const double gr = 0.6180339887498949; // 1/phi
  double x1 = b - gr * (b - a);
  double x2 = a + gr * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 300 && (b - a) > rel_tol * std::max(std::abs(a) + std::abs(b), 1.0); ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = f(x1);
    }
  }
  return 0.5 * (a + b);
}

} // namespace uhlab

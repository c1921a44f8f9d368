#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace uhlab {

enum class Monotonicity { NonDecreasing, NonIncreasing, None };

struct IndexPair {
  double lower; // i_a = inf t a'(t)/a(t)
  double upper; // s_a = sup t a'(t)/a(t)
};

// ---------------------------------------------------------------------------
// A coefficient a : (0,inf) -> (0,inf), C^1, with finite index bounds
//   -1 < i_a <= s_a < inf,  i_a = inf t a'/a,  s_a = sup t a'/a,
// and the scale of functions built from it:
//   b(t) = a(t) t          (strictly increasing, b(0) = 0)
//   B(t) = int_0^t b       (strictly convex N-function)
//   B~   = Young conjugate of B, B~(s) = int_0^s b^{-1}
//   H(t) = int_0^t a b,  F(t) = int_0^t b^2
// The power family a(t) = t^{p-2} evaluates all of these in closed form;
// custom coefficients go through adaptive quadrature (abs tol 1e-10) and
// monotone bisection (rel tol 1e-12).
// ---------------------------------------------------------------------------
class NonlinearitySpec {
public:
  static NonlinearitySpec power(double p, std::string label = {});
  // Indices estimated by sampling t a'/a on a log grid over [1e-8, 1e8]
  // (1e4 points) and widening by 1%, unless supplied exactly.
  static NonlinearitySpec custom(std::function<double(double)> a,
                                 std::function<double(double)> a_prime,
                                 std::string label,
                                 std::optional<IndexPair> indices = std::nullopt);

  double a(double t) const;       // t >= 0; at t = 0 returns the limit (may be +inf)
  double a_prime(double t) const; // t > 0
  double lower_index() const { return idx_.lower; }
  double upper_index() const { return idx_.upper; }
  Monotonicity monotonicity() const { return mono_; }
  const std::string& label() const { return label_; }
  bool is_power() const { return power_.has_value(); }
  double power_exponent() const;

  double b(double t) const; // b(0) = 0 exactly, also when a(0+) = +inf
  double b_inverse(double s) const;
  double B(double t) const;
  double B_inverse(double s) const;
  double young_conjugate(double s) const;
  double young_conjugate_inverse(double t) const;
  double H(double t) const;
  double F(double t) const;

  // Sobolev-conjugate Young function of B in dimension n >= 2. Returns +inf
  // when the construction saturates; throws std::domain_error when the
  // defining integral diverges at 0.
  double sobolev_conjugate(int n, double t) const;

  // Vector operations on xi in R^d, d >= 1 (d = components x space dim).
  std::vector<double> flux(std::span<const double> xi) const; // a(|xi|) xi, 0 at 0
  // Quadratic form of the flux Jacobian at xi != 0:
  //   a'(|xi|)/|xi| (xi.eta)^2 + a(|xi|) |eta|^2
  double flux_jacobian_form(std::span<const double> xi,
                            std::span<const double> eta) const;

private:
  NonlinearitySpec() = default;
  std::function<double(double)> a_, ap_;
  IndexPair idx_{0.0, 0.0};
  Monotonicity mono_ = Monotonicity::NonDecreasing;
  std::string label_;
  std::optional<double> power_;
};

// ---------------------------------------------------------------------------
// a_eps(t) = (a(w) + eps) / (1 + eps a(w)),  w = sqrt(eps scale^2 + t^2),
// 0 < eps <= 1. Bounded between eps and 1/eps, same monotonicity as a,
// indices confined to [min{i_a,0}, max{s_a,0}]; b_eps -> b locally uniformly
// as eps -> 0. `scale` is the slope magnitude the smoothing is measured
// against: the plateau near t = 0 has width sqrt(eps)*scale, so shrinking a
// problem's data and its scale together shrinks the smoothing with it
// instead of letting a fixed absolute width swamp small gradients.
// ---------------------------------------------------------------------------
class RegularizedSpec {
public:
  RegularizedSpec(NonlinearitySpec base, double eps, double scale = 1.0);
  double a(double t) const;
  double a_prime(double t) const;
  double b(double t) const { return a(t) * t; }
  double eps() const { return eps_; }
  double scale() const { return scale_; }
  double lower_index() const { return idx_.lower; } // certified min{i_a, 0}
  double upper_index() const { return idx_.upper; } // certified max{s_a, 0}
  Monotonicity monotonicity() const { return base_.monotonicity(); }
  const NonlinearitySpec& base() const { return base_; }
  std::vector<double> flux(std::span<const double> xi) const;
  double flux_jacobian_form(std::span<const double> xi,
                            std::span<const double> eta) const;

private:
  NonlinearitySpec base_;
  double eps_;
  double scale_;
  double width2_; // eps * scale^2, the smoothing inside w
  IndexPair idx_{0.0, 0.0};
};

// ---------------------------------------------------------------------------
// Monotonicity diagnostics
// ---------------------------------------------------------------------------
struct MonotonicityCheck {
  double lhs = 0;     // [a(|xi|)xi - a(|eta|)eta] . (xi - eta)
  double rhs = 0;     // certified lower bound
  bool skipped = false; // segment passes through 0 while a is singular there
};

// Lower bound via (1 + min{i_a,0}) |xi-eta|^2 int_0^1 a(|eta + s(xi-eta)|) ds
// (general case, segment integral by quadrature), or
// (a(|xi|) + a(|eta|)) |xi-eta|^2 / 3 for non-decreasing a.
MonotonicityCheck check_monotonicity_lower_bound(const NonlinearitySpec& spec,
                                                 std::span<const double> xi,
                                                 std::span<const double> eta);

// lhs of |V|^2 + i (V.omega)^2 >= (1 + min{i,0}) |V|^2; omega must be unit.
double hessian_core_form(double index_lower, std::span<const double> V,
                         std::span<const double> omega);

// Sampled infimum of the monotonicity form over
//   { |xi - eta| >= t, |xi| <= tau, |eta| <= tau },
// quasi-random low-discrepancy samples plus boundary configurations, reduced
// to a 2-plane (the form is rotation invariant). Throws std::domain_error on
// an empty constraint set (t <= 0 or t > 2 tau).
double monotonicity_gap(const NonlinearitySpec& spec, double t, double tau,
                        int sample_count);

} // namespace uhlab

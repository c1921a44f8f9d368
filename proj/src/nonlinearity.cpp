#include "uhlab/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "uhlab/errors.hpp"
#include "uhlab/quadrature.hpp"

namespace uhlab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kQuadTol = 1e-10;
constexpr double kInvTol = 1e-12;

double norm2(std::span<const double> v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double dot(std::span<const double> u, std::span<const double> v) {
  double s = 0;
  for (size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
  return s;
}

std::string default_power_label(double p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "p%g", p);
  return buf;
}

// R_d low-discrepancy sequence (additive recurrence, plastic-constant family).
struct RSeq3 {
  // g solves x^4 = x + 1
  static constexpr double g = 1.2207440846057596;
  double a1 = 1.0 / g, a2 = 1.0 / (g * g), a3 = 1.0 / (g * g * g);
  double x = 0.5, y = 0.5, z = 0.5;
  void next() {
    x = std::fmod(x + a1, 1.0);
    y = std::fmod(y + a2, 1.0);
    z = std::fmod(z + a3, 1.0);
  }
};

} // namespace

// --------------------------------------------------------------------------
// construction
// --------------------------------------------------------------------------

NonlinearitySpec NonlinearitySpec::power(double p, std::string label) {
  if (!(p > 1.0) || !std::isfinite(p))
    throw std::domain_error("power nonlinearity requires 1 < p < inf");
  NonlinearitySpec s;
  s.power_ = p;
  s.idx_ = {p - 2.0, p - 2.0};
  s.mono_ = p >= 2.0 ? Monotonicity::NonDecreasing : Monotonicity::NonIncreasing;
  s.label_ = label.empty() ? default_power_label(p) : std::move(label);
  s.a_ = [p](double t) { return std::pow(t, p - 2.0); };
  s.ap_ = [p](double t) { return (p - 2.0) * std::pow(t, p - 3.0); };
  return s;
}

NonlinearitySpec NonlinearitySpec::custom(std::function<double(double)> a,
                                          std::function<double(double)> a_prime,
                                          std::string label,
                                          std::optional<IndexPair> indices) {
  NonlinearitySpec s;
  s.a_ = std::move(a);
  s.ap_ = std::move(a_prime);
  s.label_ = std::move(label);
  bool increase = false, decrease = false;
  double lo = kInf, hi = -kInf;
  const int M = 10000;
  const double l0 = std::log(1e-8), l1 = std::log(1e8);
  for (int i = 0; i < M; ++i) {
    const double t = std::exp(l0 + (l1 - l0) * i / (M - 1));
    const double av = s.a_(t);
    if (!(av > 0.0) || !std::isfinite(av))
      throw std::domain_error("custom coefficient must be positive and finite on (0,inf)");
    const double theta = t * s.ap_(t) / av;
    if (!std::isfinite(theta))
      throw std::domain_error("custom coefficient has a non-finite index sample");
    lo = std::min(lo, theta);
    hi = std::max(hi, theta);
    if (theta > 1e-12) increase = true;
    if (theta < -1e-12) decrease = true;
  }
  if (indices) {
    s.idx_ = *indices;
  } else {
    s.idx_ = {lo - 0.01 * std::abs(lo), hi + 0.01 * std::abs(hi)};
  }
  if (!(s.idx_.lower > -1.0))
    throw std::domain_error("lower index must exceed -1");
  if (!(s.idx_.lower <= s.idx_.upper) || !std::isfinite(s.idx_.upper))
    throw std::domain_error("invalid index pair");
  s.mono_ = (increase && decrease) ? Monotonicity::None
            : decrease             ? Monotonicity::NonIncreasing
                                   : Monotonicity::NonDecreasing;
  return s;
}

double NonlinearitySpec::power_exponent() const {
  if (!power_) throw std::logic_error("not a power nonlinearity");
  return *power_;
}

// --------------------------------------------------------------------------
// scalar functions
// --------------------------------------------------------------------------

double NonlinearitySpec::a(double t) const {
  if (t < 0.0) throw std::domain_error("a: negative argument");
  if (t == 0.0 && power_) {
    const double p = *power_;
    return p > 2.0 ? 0.0 : (p == 2.0 ? 1.0 : kInf);
  }
  return a_(t);
}

double NonlinearitySpec::a_prime(double t) const {
  if (!(t > 0.0)) throw std::domain_error("a_prime: argument must be positive");
  return ap_(t);
}

double NonlinearitySpec::b(double t) const {
  if (t < 0.0) throw std::domain_error("b: negative argument");
  if (t == 0.0) return 0.0;
  if (power_) return std::pow(t, *power_ - 1.0);
  return a_(t) * t;
}

double NonlinearitySpec::b_inverse(double s) const {
  if (s < 0.0) throw std::domain_error("b_inverse: negative argument");
  if (s == 0.0) return 0.0;
  if (power_) return std::pow(s, 1.0 / (*power_ - 1.0));
  return invert_increasing([this](double t) { return b(t); }, s, kInvTol);
}

double NonlinearitySpec::B(double t) const {
  if (t < 0.0) throw std::domain_error("B: negative argument");
  if (t == 0.0) return 0.0;
  if (power_) return std::pow(t, *power_) / *power_;
  return integrate([this](double u) { return b(u); }, 0.0, t, kQuadTol);
}

double NonlinearitySpec::B_inverse(double s) const {
  if (s < 0.0) throw std::domain_error("B_inverse: negative argument");
  if (s == 0.0) return 0.0;
  if (power_) return std::pow(*power_ * s, 1.0 / *power_);
  return invert_increasing([this](double t) { return B(t); }, s, kInvTol);
}

double NonlinearitySpec::young_conjugate(double s) const {
  if (s < 0.0) throw std::domain_error("young_conjugate: negative argument");
  if (s == 0.0) return 0.0;
  if (power_) {
    const double pc = *power_ / (*power_ - 1.0);
    return std::pow(s, pc) / pc;
  }
  return integrate([this](double u) { return b_inverse(u); }, 0.0, s, kQuadTol);
}

double NonlinearitySpec::young_conjugate_inverse(double t) const {
  if (t < 0.0) throw std::domain_error("young_conjugate_inverse: negative argument");
  if (t == 0.0) return 0.0;
  if (power_) {
    const double pc = *power_ / (*power_ - 1.0);
    return std::pow(pc * t, 1.0 / pc);
  }
  return invert_increasing([this](double s) { return young_conjugate(s); }, t, kInvTol);
}

double NonlinearitySpec::H(double t) const {
  if (t < 0.0) throw std::domain_error("H: negative argument");
  if (t == 0.0) return 0.0;
  if (power_) return std::pow(t, 2.0 * *power_ - 2.0) / (2.0 * *power_ - 2.0);
  return integrate([this](double u) { return a_(u) * a_(u) * u; }, 0.0, t, kQuadTol);
}

double NonlinearitySpec::F(double t) const {
  if (t < 0.0) throw std::domain_error("F: negative argument");
  if (t == 0.0) return 0.0;
  if (power_) return std::pow(t, 2.0 * *power_ - 1.0) / (2.0 * *power_ - 1.0);
  return integrate([this](double u) { const double bv = b(u); return bv * bv; },
                   0.0, t, kQuadTol);
}

double NonlinearitySpec::sobolev_conjugate(int n, double t) const {
  if (n < 2) throw std::domain_error("sobolev_conjugate: n must be >= 2");
  if (t < 0.0) throw std::domain_error("sobolev_conjugate: negative argument");
  if (t == 0.0) return 0.0;
  // near-0 growth exponent of B decides integrability of (tau/B)^{1/(n-1)}
  const double d = 1e-8;
  const double p0 = std::log2(B(2 * d) / B(d));
  if (p0 >= n - 1e-6)
    throw std::domain_error("sobolev_conjugate: defining integral diverges at 0");
  const double expo = double(n - 1) / double(n);
  auto Hn = [&](double s) {
    const double I = integrate(
        [&](double u) { return std::pow(u / B(u), 1.0 / (n - 1.0)); }, 0.0, s,
        kQuadTol);
    return std::pow(I, expo);
  };
  // bracket t under Hn, watching for saturation (Hn bounded above)
  double s = 1.0, prev = Hn(s);
  if (prev >= t) {
    const double inv = invert_increasing(Hn, t, 1e-10, 1.0);
    return B(inv);
  }
  int stall = 0;
  for (int it = 0; it < 220; ++it) {
    s *= 2.0;
    const double cur = Hn(s);
    if (cur >= t) {
      const double inv = invert_increasing(Hn, t, 1e-10, s);
      return B(inv);
    }
    if (cur - prev <= 1e-9 * std::max(cur, 1e-300)) {
      if (++stall >= 3) return kInf; // saturated below t
    } else {
      stall = 0;
    }
    prev = cur;
    if (s > 1e60) return kInf;
  }
  return kInf;
}

// --------------------------------------------------------------------------
// vector operations
// --------------------------------------------------------------------------

namespace {

std::vector<double> flux_impl(const std::function<double(double)>& a,
                              std::span<const double> xi) {
  std::vector<double> out(xi.size(), 0.0);
  const double r = norm2(xi);
  if (r == 0.0) return out; // b(0) = 0 even when a blows up at 0
  const double av = a(r);
  for (size_t i = 0; i < xi.size(); ++i) out[i] = av * xi[i];
  return out;
}

double form_impl(double av, double apv, std::span<const double> xi,
                 std::span<const double> eta) {
  const double r = norm2(xi);
  const double d = dot(xi, eta);
  double e2 = 0;
  for (double x : eta) e2 += x * x;
  return apv / r * d * d + av * e2;
}

} // namespace

std::vector<double> NonlinearitySpec::flux(std::span<const double> xi) const {
  return flux_impl([this](double r) { return a_(r); }, xi);
}

double NonlinearitySpec::flux_jacobian_form(std::span<const double> xi,
                                            std::span<const double> eta) const {
  const double r = norm2(xi);
  if (!(r > 0.0))
    throw std::domain_error("flux_jacobian_form: xi must be nonzero");
  return form_impl(a_(r), ap_(r), xi, eta);
}

// --------------------------------------------------------------------------
// regularization
// --------------------------------------------------------------------------

RegularizedSpec::RegularizedSpec(NonlinearitySpec base, double eps, double scale)
    : base_(std::move(base)), eps_(eps), scale_(scale), width2_(eps * scale * scale) {
  if (!(eps > 0.0) || !(eps <= 1.0))
    throw std::domain_error("regularization parameter must lie in (0, 1]");
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw std::domain_error("regularization scale must be positive and finite");
  idx_ = {std::min(base_.lower_index(), 0.0), std::max(base_.upper_index(), 0.0)};
}

double RegularizedSpec::a(double t) const {
  if (t < 0.0) throw std::domain_error("a: negative argument");
  const double w = std::sqrt(width2_ + t * t);
  const double A = base_.a(w);
  return (A + eps_) / (1.0 + eps_ * A);
}

double RegularizedSpec::a_prime(double t) const {
  if (t < 0.0) throw std::domain_error("a_prime: negative argument");
  if (t == 0.0) return 0.0;
  const double w = std::sqrt(width2_ + t * t);
  const double A = base_.a(w);
  const double den = 1.0 + eps_ * A;
  return (1.0 - eps_ * eps_) * base_.a_prime(w) * t / (den * den * w);
}

std::vector<double> RegularizedSpec::flux(std::span<const double> xi) const {
  return flux_impl([this](double r) { return a(r); }, xi);
}

double RegularizedSpec::flux_jacobian_form(std::span<const double> xi,
                                           std::span<const double> eta) const {
  const double r = norm2(xi);
  if (!(r > 0.0))
    throw std::domain_error("flux_jacobian_form: xi must be nonzero");
  return form_impl(a(r), a_prime(r), xi, eta);
}

// --------------------------------------------------------------------------
// monotonicity diagnostics
// --------------------------------------------------------------------------

namespace {

double monotonicity_lhs(const NonlinearitySpec& spec, std::span<const double> xi,
                        std::span<const double> eta) {
  const auto fx = spec.flux(xi);
  const auto fe = spec.flux(eta);
  double s = 0;
  for (size_t i = 0; i < xi.size(); ++i) s += (fx[i] - fe[i]) * (xi[i] - eta[i]);
  return s;
}

// distance from the segment eta + s (xi - eta), s in [0,1], to the origin
double segment_distance_to_origin(std::span<const double> xi,
                                  std::span<const double> eta) {
  double dd = 0, de = 0, ee = 0;
  for (size_t i = 0; i < xi.size(); ++i) {
    const double d = xi[i] - eta[i];
    dd += d * d;
    de += d * eta[i];
    ee += eta[i] * eta[i];
  }
  if (dd == 0.0) return std::sqrt(ee);
  const double s = std::clamp(-de / dd, 0.0, 1.0);
  return std::sqrt(std::max(ee + 2 * s * de + s * s * dd, 0.0));
}

} // namespace

MonotonicityCheck check_monotonicity_lower_bound(const NonlinearitySpec& spec,
                                                 std::span<const double> xi,
                                                 std::span<const double> eta) {
  MonotonicityCheck out;
  out.lhs = monotonicity_lhs(spec, xi, eta);
  double dd = 0;
  for (size_t i = 0; i < xi.size(); ++i) {
    const double d = xi[i] - eta[i];
    dd += d * d;
  }
  if (spec.monotonicity() == Monotonicity::NonDecreasing) {
    const double rx = std::max(norm2(xi), 1e-300);
    const double re = std::max(norm2(eta), 1e-300);
    out.rhs = (spec.a(rx) + spec.a(re)) * dd / 3.0;
    return out;
  }
  const double scale = std::max(norm2(xi), norm2(eta));
  if (spec.lower_index() < 0.0 &&
      segment_distance_to_origin(xi, eta) < 1e-9 * std::max(scale, 1e-300)) {
    out.skipped = true;
    return out;
  }
  std::vector<double> p(xi.size());
  const double seg = integrate(
      [&](double s) {
        for (size_t i = 0; i < xi.size(); ++i)
          p[i] = eta[i] + s * (xi[i] - eta[i]);
        return spec.a(norm2(p));
      },
      0.0, 1.0, 1e-10);
  out.rhs = (1.0 + std::min(spec.lower_index(), 0.0)) * dd * seg;
  return out;
}

double hessian_core_form(double index_lower, std::span<const double> V,
                         std::span<const double> omega) {
  const double w = norm2(omega);
  if (std::abs(w - 1.0) > 1e-12)
    throw std::domain_error("hessian_core_form: omega must be a unit vector");
  double v2 = 0;
  for (double x : V) v2 += x * x;
  const double d = dot(V, omega);
  return v2 + index_lower * d * d;
}

double monotonicity_gap(const NonlinearitySpec& spec, double t, double tau,
                        int sample_count) {
  if (!(t > 0.0) || !(tau > 0.0) || t > 2.0 * tau + 1e-15 * tau)
    throw std::domain_error("monotonicity_gap: empty constraint set");
  if (sample_count < 1)
    throw std::domain_error("monotonicity_gap: sample_count must be positive");

  double best = kInf;
  auto consider = [&](double x1, double y1, double x2, double y2) {
    const double xi[2] = {x1, y1}, eta[2] = {x2, y2};
    const double dx = x1 - x2, dy = y1 - y2;
    if (dx * dx + dy * dy < t * t * (1.0 - 1e-12)) return;
    best = std::min(best, monotonicity_lhs(spec, xi, eta));
  };

  // rotation invariance: xi on the positive x-axis WLOG
  RSeq3 seq;
  const int interior = sample_count / 2;
  for (int i = 0; i < interior; ++i) {
    seq.next();
    const double r1 = tau * seq.x, r2 = tau * seq.y, c = 2.0 * seq.z - 1.0;
    const double d2 = r1 * r1 + r2 * r2 - 2.0 * r1 * r2 * c;
    if (d2 < t * t) continue;
    const double phi = std::acos(std::clamp(c, -1.0, 1.0));
    consider(r1, 0.0, r2 * std::cos(phi), r2 * std::sin(phi));
  }
  // boundary family |xi - eta| = t
  for (int i = interior; i < sample_count; ++i) {
    seq.next();
    const double r1 = tau * seq.x;
    const double alpha = 3.141592653589793 * seq.y;
    const double ex = r1 - t * std::cos(alpha), ey = -t * std::sin(alpha);
    if (ex * ex + ey * ey > tau * tau) continue;
    consider(r1, 0.0, ex, ey);
  }
  // explicit corner configurations
  if (t / 2.0 <= tau) consider(t / 2.0, 0.0, -t / 2.0, 0.0);
  consider(tau, 0.0, tau - t, 0.0);
  consider(tau, 0.0, -tau, 0.0);
  {
    const double c = 1.0 - t * t / (2.0 * tau * tau);
    if (c >= -1.0 && c <= 1.0) {
      const double phi = std::acos(c);
      consider(tau, 0.0, tau * std::cos(phi), tau * std::sin(phi));
    }
  }
  return best;
}

} // namespace uhlab

#include "uhlab/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "uhlab/nonlinearity.hpp"
#include "uhlab/rearrangement.hpp"

namespace uhlab {
namespace {

// splitmix64. Every (seed, check, sample index) triple owns an independent
// stream, so results do not depend on evaluation order.
struct Rng {
  uint64_t state;
  explicit Rng(uint64_t s) : state(s) {}
  uint64_t next() {
    state += 0x9e3779b97f4a7c15ull;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  double uniform() { return double(next() >> 11) * 0x1.0p-53; } // [0, 1)
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  double log_uniform(double a, double b) {
    return std::exp(uniform(std::log(a), std::log(b)));
  }
  int pick(int n) { return int(next() % uint64_t(n)); }
};

uint64_t stream_seed(uint64_t seed, const std::string& tag, int sample) {
  uint64_t h = 14695981039346656037ull ^ seed;
  for (unsigned char c : tag) {
    h ^= c;
    h *= 1099511628211ull;
  }
  h ^= uint64_t(sample) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

// Scale-free violation of "lhs <= rhs"; positive means violated.
double viol(double lhs, double rhs) {
  return (lhs - rhs) / (1.0 + std::fabs(lhs) + std::fabs(rhs));
}

double rel_diff(double got, double want) {
  return std::fabs(got - want) / std::max(std::fabs(want), 1e-300);
}

enum class SpecPool {
  Any,                // power / 1+t^q / rational, full index range
  NonDecreasing,      // pools with a' >= 0 only
  SingularDecreasing, // power p < 2 (a singular at 0, decreasing)
  PowerOnly,          // closed-form scale only
};

NonlinearitySpec random_spec(Rng& rng, SpecPool pool) {
  if (pool == SpecPool::PowerOnly)
    return NonlinearitySpec::power(rng.uniform(1.2, 4.5));
  if (pool == SpecPool::SingularDecreasing)
    return NonlinearitySpec::power(rng.uniform(1.2, 1.95));
  switch (rng.pick(3)) {
  case 0: {
    const double lo = pool == SpecPool::NonDecreasing ? 2.0 : 1.2;
    return NonlinearitySpec::power(rng.uniform(lo, 4.5));
  }
  case 1: {
    // a = 1 + t^q: indices exactly {0, q}
    const double q = rng.uniform(0.3, 2.0);
    return NonlinearitySpec::custom(
        [q](double t) { return 1.0 + std::pow(t, q); },
        [q](double t) { return q * std::pow(t, q - 1.0); }, "one-plus-power",
        IndexPair{0.0, q});
  }
  default:
    // a = (1 + 2t^2)/(1 + t^2): rises from 1 to 2; t a'/a peaks at
    // t^2 = 1/sqrt(2) with value 6 - 4 sqrt(2)
    return NonlinearitySpec::custom(
        [](double t) {
          const double s = t * t;
          return (1.0 + 2.0 * s) / (1.0 + s);
        },
        [](double t) {
          const double d = 1.0 + t * t;
          return 2.0 * t / (d * d);
        },
        "rational", IndexPair{0.0, 6.0 - 4.0 * std::sqrt(2.0)});
  }
}

std::vector<double> random_direction(Rng& rng, int d) {
  std::vector<double> v(d);
  double n2 = 0.0;
  do {
    n2 = 0.0;
    for (int k = 0; k < d; ++k) {
      v[k] = rng.uniform(-1.0, 1.0);
      n2 += v[k] * v[k];
    }
  } while (n2 < 1e-4);
  const double inv = 1.0 / std::sqrt(n2);
  for (double& x : v) x *= inv;
  return v;
}

std::vector<double> random_vector(Rng& rng, int d, double lo, double hi) {
  std::vector<double> v = random_direction(rng, d);
  const double r = rng.log_uniform(lo, hi);
  for (double& x : v) x *= r;
  return v;
}

double dot(const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s += x[k] * y[k];
  return s;
}

double norm(const std::vector<double>& x) { return std::sqrt(dot(x, x)); }

class SuiteRunner {
public:
  SuiteRunner(CheckSummary& out, std::string suite, uint64_t seed, int samples)
      : out_(&out), suite_(std::move(suite)), seed_(seed), samples_(samples) {}

  // body(rng) returns a violation; above threshold (or non-finite) = failure.
  template <class F> void add(const char* name, double threshold, F&& body) {
    CheckLine line;
    line.suite = suite_;
    line.name = name;
    line.samples = samples_;
    line.threshold = threshold;
    const std::string tag = suite_ + '/' + name;
    double worst = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples_; ++i) {
      Rng rng(stream_seed(seed_, tag, i));
      double v;
      try {
        v = body(rng);
      } catch (const std::exception&) {
        v = std::numeric_limits<double>::infinity();
      }
      if (std::isnan(v)) v = std::numeric_limits<double>::infinity();
      if (!(v <= threshold)) ++line.failures;
      worst = std::max(worst, v);
    }
    line.worst = worst;
    out_->lines.push_back(std::move(line));
  }

private:
  CheckSummary* out_;
  std::string suite_;
  uint64_t seed_;
  int samples_;
};

// Two-sided comparisons of a, B, B~, H, F against the index envelope. The
// power scale attains equality in every one of them, so thresholds sit just
// above closed-form rounding; quadrature-backed conjugates get 1e-8.
void run_derived(CheckSummary& out, uint64_t seed, int samples) {
  SuiteRunner s(out, "derived", seed, samples);

  // a(1) min(t^i, t^s) <= a(t) <= a(1) max(t^i, t^s)
  s.add("coefficient-envelope", 1e-9, [](Rng& rng) {
    const NonlinearitySpec spec = random_spec(rng, SpecPool::Any);
    const double t = rng.log_uniform(1e-3, 1e3);
    const double a1 = spec.a(1.0);
    const double ti = std::pow(t, spec.lower_index());
    const double tu = std::pow(t, spec.upper_index());
    const double at = spec.a(t);
    return std::max(viol(a1 * std::min(ti, tu), at),
                    viol(at, a1 * std::max(ti, tu)));
  });

  // B~(b(t)) = t b(t) - B(t). Custom scales run the conjugate through
  // quadrature over a bisection inverse, so keep their arguments where the
  // 1e-10 integration budget is attainable.
  s.add("conjugate-identity", 1e-8, [](Rng& rng) {
    const NonlinearitySpec spec = random_spec(rng, SpecPool::Any);
    const double t = rng.log_uniform(1e-2, spec.is_power() ? 1e2 : 2.0);
    const double bt = spec.b(t);
    const double lhs = spec.young_conjugate(bt);
    const double rhs = t * bt - spec.B(t);
    return std::fabs(lhs - rhs) / (1.0 + std::fabs(lhs) + std::fabs(rhs));
  });

  // (1+i) B(t) <= B~(b(t)) <= (1+s) B(t)
  s.add("conjugate-bounds", 1e-8, [](Rng& rng) {
    const NonlinearitySpec spec = random_spec(rng, SpecPool::Any);
    const double t = rng.log_uniform(1e-2, spec.is_power() ? 1e2 : 2.0);
    const double Bt = spec.B(t);
    const double conj = spec.young_conjugate(spec.b(t));
    return std::max(viol((1.0 + spec.lower_index()) * Bt, conj),
                    viol(conj, (1.0 + spec.upper_index()) * Bt));
  });

  // (2+i) B(t) <= t b(t) <= (2+s) B(t)
  s.add("product-bounds", 1e-9, [](Rng& rng) {
    const NonlinearitySpec spec = random_spec(rng, SpecPool::Any);
    const double t = rng.log_uniform(1e-3, 1e3);
    const double Bt = spec.B(t);
    const double tb = t * spec.b(t);
    return std::max(viol((2.0 + spec.lower_index()) * Bt, tb),
                    viol(tb, (2.0 + spec.upper_index()) * Bt));
  });

  // (3+2i) F(t) <= t b(t)^2 <= (3+2s) F(t)
  s.add("square-product-bounds", 1e-9, [](Rng& rng) {
    const NonlinearitySpec spec = random_spec(rng, SpecPool::Any);
    const double t = rng.log_uniform(1e-3, 1e3);
    const double Ft = spec.F(t);
    const double bt = spec.b(t);
    const double tb2 = t * bt * bt;
    return std::max(viol((3.0 + 2.0 * spec.lower_index()) * Ft, tb2),
                    viol(tb2, (3.0 + 2.0 * spec.upper_index()) * Ft));
  });

  // 2 (1+i) H(t) <= b(t)^2 <= 2 (1+s) H(t)
  s.add("energy-density-bounds", 1e-9, [](Rng& rng) {
    const NonlinearitySpec spec = random_spec(rng, SpecPool::Any);
    const double t = rng.log_uniform(1e-3, 1e3);
    const double Ht = spec.H(t);
    const double b2 = spec.b(t) * spec.b(t);
    return std::max(viol(2.0 * (1.0 + spec.lower_index()) * Ht, b2),
                    viol(b2, 2.0 * (1.0 + spec.upper_index()) * Ht));
  });
}

void run_young(CheckSummary& out, uint64_t seed, int samples) {
  SuiteRunner s(out, "young", seed, samples);

  // x y <= B(x) + B~(y); every other sample takes y = b(x), the equality case.
  s.add("pairing-inequality", 1e-8, [](Rng& rng) {
    const NonlinearitySpec spec = random_spec(rng, SpecPool::Any);
    const double hi = spec.is_power() ? 1e2 : 2.0;
    const double x = rng.log_uniform(1e-2, hi);
    const double y =
        spec.b(rng.pick(2) == 0 ? x : rng.log_uniform(1e-2, hi));
    return viol(x * y, spec.B(x) + spec.young_conjugate(y));
  });

  // x <= B^{-1}(x) B~^{-1}(x) <= 2x, with equality at 2x for the quadratic.
  s.add("inverse-product", 1e-9, [](Rng& rng) {
    const NonlinearitySpec spec = random_spec(rng, SpecPool::PowerOnly);
    const double x = rng.log_uniform(1e-3, 1e3);
    const double prod = spec.B_inverse(x) * spec.young_conjugate_inverse(x);
    return std::max(viol(x, prod), viol(prod, 2.0 * x));
  });

  // B(2t) <= 2^{2+s} B(t); equality throughout the power scale.
  s.add("doubling", 1e-9, [](Rng& rng) {
    const NonlinearitySpec spec = random_spec(rng, SpecPool::Any);
    const double t = rng.log_uniform(1e-3, 5e2);
    return viol(spec.B(2.0 * t),
                std::pow(2.0, 2.0 + spec.upper_index()) * spec.B(t));
  });
}

void run_elliptic(CheckSummary& out, uint64_t seed, int samples) {
  SuiteRunner s(out, "elliptic", seed, samples);

  // min(1, 1+i) a(|xi|) |eta|^2 <= Q(xi, eta) <= max(1, 1+s) a(|xi|) |eta|^2,
  // probed with parallel (equality for powers) and orthogonal pairs too.
  s.add("form-bounds", 1e-9, [](Rng& rng) {
    const NonlinearitySpec spec = random_spec(rng, SpecPool::Any);
    const int d = 2 + rng.pick(2);
    const std::vector<double> xi = random_vector(rng, d, 0.3, 3.0);
    std::vector<double> eta;
    const int mode = rng.pick(4);
    if (mode == 0) {
      eta = xi;
      const double c = rng.log_uniform(0.3, 3.0) / norm(xi);
      for (double& x : eta) x *= c;
    } else if (mode == 1) {
      do {
        eta = random_vector(rng, d, 0.3, 3.0);
        const double c = dot(eta, xi) / dot(xi, xi);
        for (int k = 0; k < d; ++k) eta[k] -= c * xi[k];
      } while (norm(eta) < 1e-3);
    } else {
      eta = random_vector(rng, d, 0.3, 3.0);
    }
    const double af = spec.a(norm(xi));
    const double e2 = dot(eta, eta);
    const double q = spec.flux_jacobian_form(xi, eta);
    return std::max(
        viol(std::min(1.0, 1.0 + spec.lower_index()) * af * e2, q),
        viol(q, std::max(1.0, 1.0 + spec.upper_index()) * af * e2));
  });

  // Q(xi, eta) against a central difference of e -> a(|xi + e eta|)(xi + e
  // eta) . eta.
  s.add("form-fd", 1e-6, [](Rng& rng) {
    const NonlinearitySpec spec = random_spec(rng, SpecPool::Any);
    const int d = 2 + rng.pick(2);
    const std::vector<double> xi = random_vector(rng, d, 0.3, 3.0);
    const std::vector<double> eta = random_vector(rng, d, 0.3, 3.0);
    const double q = spec.flux_jacobian_form(xi, eta);
    const double delta = 6e-6 * norm(xi) / norm(eta);
    std::vector<double> plus(d), minus(d);
    for (int k = 0; k < d; ++k) {
      plus[k] = xi[k] + delta * eta[k];
      minus[k] = xi[k] - delta * eta[k];
    }
    const std::vector<double> fp = spec.flux(plus);
    const std::vector<double> fm = spec.flux(minus);
    double qfd = 0.0;
    for (int k = 0; k < d; ++k) qfd += (fp[k] - fm[k]) * eta[k];
    qfd /= 2.0 * delta;
    return std::fabs(q - qfd) / std::max(std::fabs(q), 1e-12);
  });

  // (a(|xi|) + a(|eta|)) |xi - eta|^2 / 3 <= (flux(xi) - flux(eta)).(xi -
  // eta) for non-decreasing coefficients; near-parallel close pairs included.
  s.add("monotone-sum", 1e-9, [](Rng& rng) {
    const NonlinearitySpec spec = random_spec(rng, SpecPool::NonDecreasing);
    const int d = 2 + rng.pick(2);
    const std::vector<double> xi = random_vector(rng, d, 0.05, 3.0);
    std::vector<double> eta;
    if (rng.pick(4) == 0) {
      eta = xi;
      const double c = 1.0 + 0.01 * rng.uniform(-1.0, 1.0);
      for (double& x : eta) x *= c;
    } else {
      eta = random_vector(rng, d, 0.05, 3.0);
    }
    const MonotonicityCheck mc = check_monotonicity_lower_bound(spec, xi, eta);
    return mc.skipped ? 0.0 : viol(mc.rhs, mc.lhs);
  });

  // Segment-integral lower bound for singular decreasing coefficients
  // (power p < 2): (1 + i) |xi-eta|^2 int_0^1 a(|eta + s(xi-eta)|) ds.
  s.add("segment-lower", 1e-8, [](Rng& rng) {
    const NonlinearitySpec spec =
        random_spec(rng, SpecPool::SingularDecreasing);
    const int d = 2 + rng.pick(2);
    const std::vector<double> xi = random_vector(rng, d, 0.05, 3.0);
    const std::vector<double> eta = random_vector(rng, d, 0.05, 3.0);
    const MonotonicityCheck mc = check_monotonicity_lower_bound(spec, xi, eta);
    return mc.skipped ? 0.0 : viol(mc.rhs, mc.lhs);
  });

  // |V|^2 + i (V.omega)^2 >= (1 + min(i,0)) |V|^2; V parallel to omega is the
  // equality case for i < 0.
  s.add("core-pointwise", 1e-9, [](Rng& rng) {
    const NonlinearitySpec spec = random_spec(rng, SpecPool::Any);
    const int d = 2 + rng.pick(2);
    const std::vector<double> omega = random_direction(rng, d);
    std::vector<double> V = random_vector(rng, d, 0.1, 3.0);
    if (rng.pick(4) == 0) {
      const double m = norm(V);
      V = omega;
      for (double& x : V) x *= m;
    }
    const double i = spec.lower_index();
    const double v2 = dot(V, V);
    return viol((1.0 + std::min(i, 0.0)) * v2, hessian_core_form(i, V, omega));
  });
}

void run_approx(CheckSummary& out, uint64_t seed, int samples) {
  SuiteRunner s(out, "approx", seed, samples);
  static constexpr double kEps[3] = {1e-1, 1e-2, 1e-3};

  // eps <= a_eps(t) <= 1/eps
  s.add("range-envelope", 1e-9, [](Rng& rng) {
    const NonlinearitySpec spec = random_spec(rng, SpecPool::Any);
    const double t = rng.log_uniform(1e-3, 1e3);
    double worst = -std::numeric_limits<double>::infinity();
    for (double eps : kEps) {
      const RegularizedSpec reg(spec, eps);
      const double ae = reg.a(t);
      worst = std::max({worst, viol(eps, ae), viol(ae, 1.0 / eps)});
    }
    return worst;
  });

  // min(i, 0) <= t a_eps'(t)/a_eps(t) <= max(s, 0)
  s.add("index-window", 1e-9, [](Rng& rng) {
    const NonlinearitySpec spec = random_spec(rng, SpecPool::Any);
    const double t = rng.log_uniform(1e-3, 1e3);
    double worst = -std::numeric_limits<double>::infinity();
    for (double eps : kEps) {
      const RegularizedSpec reg(spec, eps);
      const double theta = t * reg.a_prime(t) / reg.a(t);
      worst = std::max({worst, viol(reg.lower_index(), theta),
                        viol(theta, reg.upper_index())});
    }
    return worst;
  });

  // a_eps' against a central difference, relative to the natural derivative
  // scale a_eps/t (a_eps' vanishes identically for the quadratic).
  s.add("derivative-fd", 1e-6, [](Rng& rng) {
    const NonlinearitySpec spec = random_spec(rng, SpecPool::Any);
    const double t = rng.log_uniform(1e-3, 1e3);
    double worst = -std::numeric_limits<double>::infinity();
    for (double eps : kEps) {
      const RegularizedSpec reg(spec, eps);
      const double dv = reg.a_prime(t);
      const double h = 6e-6 * t;
      const double fd = (reg.a(t + h) - reg.a(t - h)) / (2.0 * h);
      const double scale = std::fabs(dv) + reg.a(t) / t;
      worst = std::max(worst, std::fabs(dv - fd) / scale);
    }
    return worst;
  });
}

MeasuredField random_field(Rng& rng, int max_cells = 30) {
  const int m = 3 + rng.pick(max_cells - 2);
  MeasuredField f;
  f.values.resize(m);
  f.measures.resize(m);
  for (int i = 0; i < m; ++i) {
    f.values[i] = rng.uniform(-3.0, 3.0);
    f.measures[i] = rng.log_uniform(0.1, 10.0);
  }
  return f;
}

void run_rearrangement(CheckSummary& out, uint64_t seed, int samples) {
  SuiteRunner s(out, "rearrangement", seed, samples);

  // Indicator of a set E: ||1_E||_{q,sigma} = (q/sigma)^{1/sigma} |E|^{1/q},
  // with the sup form every fifth sample (sigma = inf).
  s.add("indicator-lorentz", 1e-12, [](Rng& rng) {
    const int m = 3 + rng.pick(28);
    MeasuredField f;
    f.values.assign(m, 0.0);
    f.measures.resize(m);
    for (int i = 0; i < m; ++i) f.measures[i] = rng.log_uniform(0.1, 10.0);
    double e_measure = 0.0;
    for (int i = 0; i < m; ++i) {
      if (rng.uniform() < 0.4) {
        f.values[i] = 1.0;
        e_measure += f.measures[i];
      }
    }
    if (e_measure == 0.0) {
      f.values[0] = 1.0;
      e_measure = f.measures[0];
    }
    const double q = rng.uniform(1.0, 8.0);
    const bool sup_form = rng.pick(5) == 0;
    const double sigma =
        sup_form ? std::numeric_limits<double>::infinity() : rng.uniform(1.0, 8.0);
    const double want = sup_form
                            ? std::pow(e_measure, 1.0 / q)
                            : std::pow(q / sigma, 1.0 / sigma) *
                                  std::pow(e_measure, 1.0 / q);
    return rel_diff(lorentz_norm(f, q, sigma), want);
  });

  // int |v w| dm <= int_0^T v* w* ds; w = |v| (every fourth sample) attains
  // equality.
  s.add("hardy-littlewood", 1e-12, [](Rng& rng) {
    const MeasuredField v = random_field(rng);
    MeasuredField w = v;
    if (rng.pick(4) == 0) {
      for (double& x : w.values) x = std::fabs(x);
    } else {
      for (double& x : w.values) x = rng.uniform(-3.0, 3.0);
    }
    const auto [lhs, rhs] = hardy_littlewood_pairing(v, w);
    return viol(lhs, rhs);
  });

  // ||v||_{q,q} equals the plain L^q norm.
  s.add("lq-diagonal", 1e-12, [](Rng& rng) {
    const MeasuredField f = random_field(rng);
    const double q = rng.uniform(1.0, 8.0);
    double sum = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i)
      sum += std::pow(std::fabs(f.values[i]), q) * f.measures[i];
    return rel_diff(lorentz_norm(f, q, q), std::pow(sum, 1.0 / q));
  });

  // v*(s) <= v**(s) = (1/s) int_0^s v*
  s.add("double-star-dominates", 1e-12, [](Rng& rng) {
    const MeasuredField f = random_field(rng);
    const RearrangementProfile p = profile(f);
    const double sarg = rng.log_uniform(1e-3, 1.0) * p.total;
    return viol(p.decreasing_rearrangement(sarg), p.double_star(sarg));
  });

  // ||c v||_B = c ||v||_B (Luxemburg norms come from a bisection with
  // relative tolerance 1e-10, hence the looser threshold).
  s.add("luxemburg-homogeneity", 1e-8, [](Rng& rng) {
    const NonlinearitySpec spec = random_spec(rng, SpecPool::PowerOnly);
    const MeasuredField f = random_field(rng);
    const double c = rng.log_uniform(0.1, 10.0);
    MeasuredField g = f;
    for (double& x : g.values) x *= c;
    const auto young = [&spec](double t) { return spec.B(t); };
    const double n1 = luxemburg_norm(f, young);
    const double n2 = luxemburg_norm(g, young);
    if (n1 == 0.0) return n2 == 0.0 ? 0.0 : 1.0;
    return rel_diff(n2 / c, n1);
  });
}

void run_suite(CheckSummary& out, const std::string& suite, uint64_t seed,
               int samples) {
  if (suite == "derived") {
    run_derived(out, seed, samples);
  } else if (suite == "young") {
    run_young(out, seed, samples);
  } else if (suite == "elliptic") {
    run_elliptic(out, seed, samples);
  } else if (suite == "approx") {
    run_approx(out, seed, samples);
  } else if (suite == "rearrangement") {
    run_rearrangement(out, seed, samples);
  } else {
    throw std::invalid_argument(
        "unknown check suite '" + suite +
        "' (known: derived, young, elliptic, approx, rearrangement, all)");
  }
}

} // namespace

int CheckSummary::total_failures() const {
  int n = 0;
  for (const CheckLine& line : lines) n += line.failures;
  return n;
}

int CheckSummary::total_samples() const {
  int n = 0;
  for (const CheckLine& line : lines) n += line.samples;
  return n;
}

std::vector<std::string> check_suites() {
  return {"derived", "young", "elliptic", "approx", "rearrangement"};
}

CheckSummary run_checks(const std::string& suite, uint64_t seed, int samples) {
  if (samples < 1)
    throw std::invalid_argument("run_checks: samples must be >= 1");
  CheckSummary out;
  if (suite == "all") {
    for (const std::string& name : check_suites())
      run_suite(out, name, seed, samples);
  } else {
    run_suite(out, suite, seed, samples);
  }
  return out;
}

} // namespace uhlab

#include "uhlab/rearrangement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace uhlab {

double MeasuredField::total_measure() const {
  double s = 0;
  for (double m : measures) s += m;
  return s;
}

void MeasuredField::validate() const {
  if (values.size() != measures.size())
    throw std::invalid_argument("measured field: values/measures size mismatch");
  if (values.empty())
    throw std::invalid_argument("measured field: empty");
  for (double m : measures)
    if (!(m > 0.0) || !std::isfinite(m))
      throw std::domain_error("measured field: measures must be positive and finite");
  for (double v : values)
    if (!std::isfinite(v))
      throw std::domain_error("measured field: values must be finite");
}

RearrangementProfile profile(const MeasuredField& f) {
  f.validate();
  const size_t n = f.values.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t i, size_t j) {
    return std::abs(f.values[i]) > std::abs(f.values[j]);
  });
  RearrangementProfile p;
  p.total = f.total_measure();
  double cum = 0;
  for (size_t k = 0; k < n; ++k) {
    const double level = std::abs(f.values[order[k]]);
    if (level == 0.0) break; // zero tail carries no mass in v*
    cum += f.measures[order[k]];
    if (!p.levels.empty() && p.levels.back() == level)
      p.breakpoints.back() = cum; // merge ties
    else {
      p.levels.push_back(level);
      p.breakpoints.push_back(cum);
    }
  }
  return p;
}

double RearrangementProfile::decreasing_rearrangement(double s) const {
  if (s < 0.0) throw std::domain_error("decreasing_rearrangement: s must be >= 0");
  // right-continuous step function: value levels[j] on [S_{j-1}, S_j)
  const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), s);
  if (it == breakpoints.end()) return 0.0;
  return levels[size_t(it - breakpoints.begin())];
}

double RearrangementProfile::double_star(double s) const {
  if (!(s > 0.0)) throw std::domain_error("double_star: s must be > 0");
  double integral = 0, prev = 0;
  for (size_t j = 0; j < levels.size(); ++j) {
    const double hi = std::min(breakpoints[j], s);
    if (hi <= prev) break;
    integral += levels[j] * (hi - prev);
    prev = hi;
  }
  return integral / s;
}

double RearrangementProfile::distribution(double t) const {
  if (t < 0.0) throw std::domain_error("distribution: t must be >= 0");
  // largest breakpoint whose level exceeds t
  double mu = 0;
  for (size_t j = 0; j < levels.size() && levels[j] > t; ++j)
    mu = breakpoints[j];
  return mu;
}

double distribution_function(const MeasuredField& f, double t) {
  if (t < 0.0) throw std::domain_error("distribution_function: t must be >= 0");
  f.validate();
  double mu = 0;
  for (size_t i = 0; i < f.values.size(); ++i)
    if (std::abs(f.values[i]) > t) mu += f.measures[i];
  return mu;
}

double lorentz_norm(const RearrangementProfile& p, double q, double sigma) {
  if (!(q >= 1.0) || !std::isfinite(q))
    throw std::domain_error("lorentz_norm: q must lie in [1, inf)");
  if (!(sigma >= 1.0)) throw std::domain_error("lorentz_norm: sigma must be >= 1");
  if (p.levels.empty()) return 0.0;
  if (std::isinf(sigma)) {
    double best = 0;
    for (size_t j = 0; j < p.levels.size(); ++j)
      best = std::max(best, p.levels[j] * std::pow(p.breakpoints[j], 1.0 / q));
    return best;
  }
  const double e = sigma / q;
  double sum = 0, prev = 0;
  for (size_t j = 0; j < p.levels.size(); ++j) {
    sum += std::pow(p.levels[j], sigma)
           * (std::pow(p.breakpoints[j], e) - std::pow(prev, e)) / e;
    prev = p.breakpoints[j];
  }
  return std::pow(sum, 1.0 / sigma);
}

double lorentz_norm(const MeasuredField& f, double q, double sigma) {
  return lorentz_norm(profile(f), q, sigma);
}

double l_n1_norm(const MeasuredField& f, int n) {
  if (n < 2) throw std::domain_error("l_n1_norm: n must be >= 2");
  return lorentz_norm(f, double(n), 1.0);
}

double luxemburg_norm(const MeasuredField& f,
                      const std::function<double(double)>& B, double rel_tol) {
  f.validate();
  double vmax = 0;
  for (double v : f.values) vmax = std::max(vmax, std::abs(v));
  if (vmax == 0.0) return 0.0;
  auto modular = [&](double lam) {
    double s = 0;
    for (size_t i = 0; i < f.values.size(); ++i) {
      const double v = std::abs(f.values[i]);
      if (v == 0.0) continue;
      s += B(v / lam) * f.measures[i];
      if (!(s < std::numeric_limits<double>::infinity())) return s;
    }
    return s;
  };
  double hi = vmax;
  int guard = 0;
  while (modular(hi) > 1.0) {
    hi *= 2.0;
    if (++guard > 2400)
      throw std::runtime_error("luxemburg_norm: no upper bracket");
  }
  double lo = hi * 0.5;
  guard = 0;
  while (modular(lo) <= 1.0) {
    hi = lo;
    lo *= 0.5;
    if (++guard > 2400) return 0.0; // modular <= 1 for every lambda
  }
  for (int it = 0; it < 200 && hi - lo > rel_tol * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (modular(mid) <= 1.0 ? hi : lo) = mid;
  }
  return hi; // smallest bracketed lambda with modular <= 1
}

std::pair<double, double> hardy_littlewood_pairing(const MeasuredField& v,
                                                   const MeasuredField& w) {
  v.validate();
  w.validate();
  if (v.measures.size() != w.measures.size())
    throw std::invalid_argument("hardy_littlewood_pairing: layout size mismatch");
  for (size_t i = 0; i < v.measures.size(); ++i)
    if (v.measures[i] != w.measures[i])
      throw std::invalid_argument("hardy_littlewood_pairing: measures differ");
  double lhs = 0;
  for (size_t i = 0; i < v.values.size(); ++i)
    lhs += std::abs(v.values[i] * w.values[i]) * v.measures[i];

  // int v* w*: walk the merged breakpoints of the two step functions
  const auto pv = profile(v), pw = profile(w);
  double rhs = 0, prev = 0;
  size_t i = 0, j = 0;
  while (i < pv.levels.size() && j < pw.levels.size()) {
    const double next = std::min(pv.breakpoints[i], pw.breakpoints[j]);
    rhs += pv.levels[i] * pw.levels[j] * (next - prev);
    prev = next;
    if (pv.breakpoints[i] == next) ++i;
    if (pw.breakpoints[j] == next) ++j;
  }
  return {lhs, rhs};
}

} // namespace uhlab

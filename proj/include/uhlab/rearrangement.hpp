#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace uhlab {

// A scalar field taking finitely many values on disjoint sets of known
// positive measure (cellwise-constant fields in practice). Every
// rearrangement quantity below is an exact stepwise formula; no quadrature.
struct MeasuredField {
  std::vector<double> values;   // signed; rearrangements use |values|
  std::vector<double> measures; // strictly positive, same length
  double total_measure() const;
  void validate() const; // throws std::invalid_argument / std::domain_error
};

// |v| sorted into strictly decreasing levels with cumulative breakpoints:
// v*(s) = levels[j] on [breakpoints[j-1], breakpoints[j]).
struct RearrangementProfile {
  std::vector<double> levels;      // L0 > L1 > ... > 0 (zero level dropped)
  std::vector<double> breakpoints; // 0 < S0 < S1 < ... <= total
  double total = 0;                // measure of the whole domain

  double decreasing_rearrangement(double s) const; // v*(s), s >= 0
  double double_star(double s) const;              // (1/s) int_0^s v*, s > 0
  double distribution(double t) const;             // |{ |v| > t }|, t >= 0
};

RearrangementProfile profile(const MeasuredField& f);

// measure of {|v| > t}
double distribution_function(const MeasuredField& f, double t);

// || s^{1/q - 1/sigma} v*(s) ||_{L^sigma(0, total)}; sigma may be +inf
// (then sup_j breakpoint^{1/q} * level). Exact stepwise evaluation.
double lorentz_norm(const RearrangementProfile& p, double q, double sigma);
double lorentz_norm(const MeasuredField& f, double q, double sigma);

// Lorentz L^{n,1} norm, the data norm of the gradient bound
double l_n1_norm(const MeasuredField& f, int n);

// Luxemburg norm inf{ lambda : sum B(|v_i|/lambda) m_i <= 1 } by bisection
// (relative tolerance rel_tol); 0 for the zero field. B must be a Young
// function (increasing, B(0) = 0).
double luxemburg_norm(const MeasuredField& f,
                      const std::function<double(double)>& B,
                      double rel_tol = 1e-10);

// (int |v w| dm, int_0^total v* w* ds) — the Hardy-Littlewood pair.
// Fields must share the measure layout (same sizes, identical measures).
std::pair<double, double> hardy_littlewood_pairing(const MeasuredField& v,
                                                   const MeasuredField& w);

} // namespace uhlab

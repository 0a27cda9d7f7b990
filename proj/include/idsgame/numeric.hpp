#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "idsgame/errors.hpp"

namespace idsgame {

// Golden-section search for the minimizer of a unimodal function on [lo, hi].
// Converges to an absolute bracket width of tol_abs.
template <typename F>
double golden_section_minimize(F&& f, double lo, double hi, double tol_abs = 1e-10) {
  if (!(lo <= hi)) throw std::invalid_argument("golden_section_minimize: empty interval");
  constexpr double inv_phi = 0.6180339887498949;  // 1/phi
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol_abs) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

// Bisection for a root of f on [lo, hi], assuming f(lo) >= 0 >= f(hi).
// Shrinks the bracket until hi - lo <= rel_tol * max(1, |hi|).
template <typename F>
double bisect_root_decreasing(F&& f, double lo, double hi, double rel_tol = 1e-12,
                              int max_iter = 200) {
  for (int i = 0; i < max_iter && (hi - lo) > rel_tol * std::max(1.0, std::abs(hi)); ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // bracket exhausted at double precision
    if (f(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

inline std::vector<double> log_spaced(double lo, double hi, std::size_t n) {
  if (n < 2 || !(lo > 0.0) || !(hi > lo))
    throw std::invalid_argument("log_spaced: need n >= 2 and 0 < lo < hi");
  std::vector<double> out(n);
  const double llo = std::log(lo), lhi = std::log(hi);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = std::exp(llo + (lhi - llo) * static_cast<double>(i) / static_cast<double>(n - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

// Central finite difference with a step relative to |x|.
template <typename F>
double central_difference(F&& f, double x, double rel_step = 1e-6) {
  const double h = rel_step * std::max(std::abs(x), 1e-300);
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace idsgame

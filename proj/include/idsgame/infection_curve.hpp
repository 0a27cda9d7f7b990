#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "idsgame/errors.hpp"

namespace idsgame {

/// Probability that an agent investing `a` in security is infected by a
/// single attack. Valid curves are continuous, nonincreasing and convex with
/// values in [0, 1]; the parametric families are strictly decreasing and
/// strictly convex. Tabulated curves interpolate knots with a monotone
/// piecewise-cubic and are validated by dense sampling; weakly monotone
/// (flat) data is accepted but reported as degenerate, since a constant
/// curve admits no interior best response.
class InfectionCurve {
 public:
  enum class Family { power, exponential, tabulated };

  /// p(a) = (epsilon / (a + epsilon))^gamma
  static InfectionCurve power(double epsilon, double gamma) {
    if (!(epsilon > 0.0) || !(gamma > 0.0))
      throw std::invalid_argument("infection curve: power parameters must be positive");
    InfectionCurve c;
    c.impl_ = Power{epsilon, gamma};
    return c;
  }

  /// p(a) = exp(-xi * a)
  static InfectionCurve exponential(double xi) {
    if (!(xi > 0.0)) throw std::invalid_argument("infection curve: xi must be positive");
    InfectionCurve c;
    c.impl_ = Exponential{xi};
    return c;
  }

  /// Monotone convex interpolant through (investment, probability) knots.
  /// Rejects knot sets whose interpolant fails the monotonicity/convexity
  /// sampling check or leaves [0, 1].
  static InfectionCurve tabulated(std::vector<double> invest, std::vector<double> prob) {
    InfectionCurve c;
    c.impl_ = Tabulated::build(std::move(invest), std::move(prob));
    return c;
  }

  Family family() const {
    if (std::holds_alternative<Power>(impl_)) return Family::power;
    if (std::holds_alternative<Exponential>(impl_)) return Family::exponential;
    return Family::tabulated;
  }

  double operator()(double a) const { return value(a); }

  double value(double a) const {
    if (const auto* p = std::get_if<Power>(&impl_))
      return std::pow(p->epsilon / (a + p->epsilon), p->gamma);
    if (const auto* e = std::get_if<Exponential>(&impl_)) return std::exp(-e->xi * a);
    return std::get<Tabulated>(impl_).value(a);
  }

  double derivative(double a) const {
    if (const auto* p = std::get_if<Power>(&impl_))
      return -p->gamma / (a + p->epsilon) * value(a);
    if (const auto* e = std::get_if<Exponential>(&impl_)) return -e->xi * value(a);
    return std::get<Tabulated>(impl_).derivative(a);
  }

  /// True when the curve is flat over [lo, hi], i.e. no investment response.
  bool degenerate_on(double lo, double hi) const {
    return value(lo) - value(hi) <= 1e-15;
  }

  /// True when the curve is defined (not merely clamped) on [lo, hi].
  bool covers(double lo, double hi) const {
    if (const auto* t = std::get_if<Tabulated>(&impl_))
      return lo >= t->x.front() && hi <= t->x.back();
    return lo >= 0.0 && hi >= lo;
  }

  // Family parameters (throw if queried on the wrong family).
  double power_epsilon() const { return std::get<Power>(impl_).epsilon; }
  double power_gamma() const { return std::get<Power>(impl_).gamma; }
  double exponential_xi() const { return std::get<Exponential>(impl_).xi; }

 private:
  struct Power {
    double epsilon, gamma;
  };
  struct Exponential {
    double xi;
  };

  // Monotone piecewise-cubic Hermite (Fritsch-Carlson limited slopes).
  struct Tabulated {
    std::vector<double> x, y, m;

    static Tabulated build(std::vector<double> invest, std::vector<double> prob) {
      if (invest.size() != prob.size() || invest.size() < 2)
        throw std::invalid_argument("infection curve: need >= 2 matching knots");
      for (std::size_t i = 0; i < invest.size(); ++i) {
        if (!std::isfinite(invest[i]) || !std::isfinite(prob[i]))
          throw std::invalid_argument("infection curve: non-finite knot");
        if (i > 0 && !(invest[i] > invest[i - 1]))
          throw std::invalid_argument("infection curve: knot abscissae must increase");
        if (prob[i] < 0.0 || prob[i] > 1.0)
          throw std::invalid_argument("infection curve: probabilities must lie in [0,1]");
      }
      Tabulated t;
      t.x = std::move(invest);
      t.y = std::move(prob);
      t.init_slopes();
      t.validate();
      return t;
    }

    void init_slopes() {
      const std::size_t n = x.size();
      std::vector<double> delta(n - 1);
      for (std::size_t i = 0; i + 1 < n; ++i) delta[i] = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
      m.assign(n, 0.0);
      for (std::size_t i = 1; i + 1 < n; ++i) {
        if (delta[i - 1] * delta[i] <= 0.0)
          m[i] = 0.0;
        else
          m[i] = 0.5 * (delta[i - 1] + delta[i]);
      }
      // Three-point endpoint slopes keep boundary segments convex for convex data.
      m[0] = (n > 2) ? 2.0 * delta[0] - m[1] : delta[0];
      m[n - 1] = (n > 2) ? 2.0 * delta[n - 2] - m[n - 2] : delta[n - 2];
      // Fritsch-Carlson limiter keeps the interpolant monotone per segment.
      for (std::size_t i = 0; i + 1 < n; ++i) {
        if (delta[i] == 0.0) {
          m[i] = m[i + 1] = 0.0;
          continue;
        }
        double alpha = m[i] / delta[i];
        double beta = m[i + 1] / delta[i];
        if (alpha < 0.0) {
          m[i] = 0.0;
          alpha = 0.0;
        }
        if (beta < 0.0) {
          m[i + 1] = 0.0;
          beta = 0.0;
        }
        const double s = alpha * alpha + beta * beta;
        if (s > 9.0) {
          const double tau = 3.0 / std::sqrt(s);
          m[i] = tau * alpha * delta[i];
          m[i + 1] = tau * beta * delta[i];
        }
      }
    }

    // Clamped evaluation: outside the knot range the curve continues flat.
    double value(double a) const {
      if (a <= x.front()) return y.front();
      if (a >= x.back()) return y.back();
      const std::size_t i = segment(a);
      const double h = x[i + 1] - x[i];
      const double t = (a - x[i]) / h;
      const double t2 = t * t, t3 = t2 * t;
      return (2 * t3 - 3 * t2 + 1) * y[i] + (t3 - 2 * t2 + t) * h * m[i] +
             (-2 * t3 + 3 * t2) * y[i + 1] + (t3 - t2) * h * m[i + 1];
    }

    double derivative(double a) const {
      if (a <= x.front()) return m.front();
      if (a >= x.back()) return m.back();
      const std::size_t i = segment(a);
      const double h = x[i + 1] - x[i];
      const double t = (a - x[i]) / h;
      const double t2 = t * t;
      return ((6 * t2 - 6 * t) * y[i] + (3 * t2 - 4 * t + 1) * h * m[i] +
              (-6 * t2 + 6 * t) * y[i + 1] + (3 * t2 - 2 * t) * h * m[i + 1]) /
             h;
    }

    std::size_t segment(double a) const {
      const auto it = std::upper_bound(x.begin(), x.end(), a);
      const std::size_t i = static_cast<std::size_t>(it - x.begin());
      return std::min(i - 1, x.size() - 2);
    }

    // Sample 1000 points: require nonincreasing values, nonnegative second
    // differences, and range within [0, 1].
    void validate() const {
      constexpr std::size_t kSamples = 1000;
      const double lo = x.front(), hi = x.back();
      std::vector<double> v(kSamples);
      for (std::size_t k = 0; k < kSamples; ++k)
        v[k] = value(lo + (hi - lo) * static_cast<double>(k) / (kSamples - 1));
      constexpr double tol = 1e-10;
      for (std::size_t k = 0; k < kSamples; ++k) {
        if (v[k] < -tol || v[k] > 1.0 + tol)
          throw std::invalid_argument("infection curve: interpolant leaves [0,1]");
        if (k > 0 && v[k] > v[k - 1] + tol)
          throw std::invalid_argument("infection curve: interpolant is not nonincreasing");
        if (k > 1 && (v[k] - 2.0 * v[k - 1] + v[k - 2]) < -tol)
          throw std::invalid_argument("infection curve: interpolant is not convex");
      }
    }
  };

  InfectionCurve() = default;
  std::variant<Power, Exponential, Tabulated> impl_;
};

}  // namespace idsgame

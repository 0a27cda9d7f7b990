#pragma once

#include <cmath>
#include <variant>

#include "idsgame/errors.hpp"

namespace idsgame {

/// Strictly increasing map from aggregate neighbor vulnerability to the
/// average risk exposure. Linear K*z or power K*z^eta.
class ExposureResponse {
 public:
  static ExposureResponse linear(double k) {
    if (!(k > 0.0)) throw std::invalid_argument("exposure response: K must be positive");
    ExposureResponse t;
    t.impl_ = Linear{k};
    return t;
  }

  static ExposureResponse power(double k, double eta) {
    if (!(k > 0.0) || !(eta > 0.0))
      throw std::invalid_argument("exposure response: K and eta must be positive");
    ExposureResponse t;
    t.impl_ = Power{k, eta};
    return t;
  }

  bool is_linear() const { return std::holds_alternative<Linear>(impl_); }
  double scale() const {
    if (const auto* l = std::get_if<Linear>(&impl_)) return l->k;
    return std::get<Power>(impl_).k;
  }
  double exponent() const {
    if (std::holds_alternative<Linear>(impl_)) return 1.0;
    return std::get<Power>(impl_).eta;
  }

  double value(double z) const {
    if (!(z >= 0.0)) throw std::invalid_argument("exposure response: argument must be >= 0");
    if (const auto* l = std::get_if<Linear>(&impl_)) return l->k * z;
    const auto& p = std::get<Power>(impl_);
    return p.k * std::pow(z, p.eta);
  }

  double derivative(double z) const {
    if (!(z > 0.0)) throw std::invalid_argument("exposure response: derivative needs z > 0");
    if (const auto* l = std::get_if<Linear>(&impl_)) return l->k;
    const auto& p = std::get<Power>(impl_);
    return p.k * p.eta * std::pow(z, p.eta - 1.0);
  }

  /// Same response rescaled to a new leading coefficient.
  ExposureResponse with_scale(double k) const {
    return is_linear() ? linear(k) : power(k, exponent());
  }

 private:
  struct Linear {
    double k;
  };
  struct Power {
    double k, eta;
  };
  ExposureResponse() = default;
  std::variant<Linear, Power> impl_;
};

}  // namespace idsgame

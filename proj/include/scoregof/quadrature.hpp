#pragma once

// Fixed quadrature rules used for the moment integrals behind projections
// and drift predictions: 64-point Gauss-Hermite in the probabilists'
// normalization (weights sum to one, expectations under the standard
// normal) and 64-point Gauss-Legendre on [0,1].

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace scoregof {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

namespace detail {

// Physicists' Gauss-Hermite rule (weight e^{-x^2}) by Newton iteration on
// the orthonormal recurrence; nodes accurate to ~1e-14 for n <= 128.
inline QuadratureRule gauss_hermite_physicists(std::size_t n) {
  constexpr double kPiQuarterInv = 0.75112554446494248286;  // pi^{-1/4}
  QuadratureRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  const std::size_t half = (n + 1) / 2;
  double z = 0.0;
  for (std::size_t i = 0; i < half; ++i) {
    if (i == 0) {
      z = std::sqrt(double(2 * n + 1)) - 1.85575 * std::pow(double(2 * n + 1), -1.0 / 6.0);
    } else if (i == 1) {
      z -= 1.14 * std::pow(double(n), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * rule.nodes[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * rule.nodes[1];
    } else {
      z = 2.0 * z - rule.nodes[i - 2];
    }
    double pp = 0.0;
    for (int iter = 0; iter < 200; ++iter) {
      double p1 = kPiQuarterInv;
      double p2 = 0.0;
      for (std::size_t j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / double(j)) * p2 - std::sqrt(double(j - 1) / double(j)) * p3;
      }
      pp = std::sqrt(2.0 * double(n)) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15) break;
    }
    rule.nodes[i] = z;
    rule.nodes[n - 1 - i] = -z;
    rule.weights[i] = 2.0 / (pp * pp);
    rule.weights[n - 1 - i] = rule.weights[i];
  }
  return rule;
}

inline QuadratureRule gauss_legendre_unit(std::size_t n) {
  QuadratureRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    double z = std::cos(M_PI * (double(i) + 0.75) / (double(n) + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 200; ++iter) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * double(j) + 1.0) * z * p2 - double(j) * p3) / double(j + 1);
      }
      pp = double(n) * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15) break;
    }
    // Map from [-1,1] to [0,1].
    rule.nodes[i] = 0.5 * (1.0 - z);
    rule.nodes[n - 1 - i] = 0.5 * (1.0 + z);
    rule.weights[i] = 1.0 / ((1.0 - z * z) * pp * pp);
    rule.weights[n - 1 - i] = rule.weights[i];
  }
  return rule;
}

}  // namespace detail

// 64-point rule with nodes/weights set up for expectations under the
// standard normal: E[f(Z)] ~= sum w_k f(z_k), weights summing to one.
inline const QuadratureRule& hermite64() {
  static const QuadratureRule rule = [] {
    QuadratureRule r = detail::gauss_hermite_physicists(64);
    const double inv_sqrt_pi = 1.0 / std::sqrt(M_PI);
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
      r.nodes[i] *= std::sqrt(2.0);
      r.weights[i] *= inv_sqrt_pi;
    }
    return r;
  }();
  return rule;
}

// 64-point Gauss-Legendre rule on [0,1].
inline const QuadratureRule& legendre01_64() {
  static const QuadratureRule rule = detail::gauss_legendre_unit(64);
  return rule;
}

template <typename F>
double normal_expectation(F&& f) {
  const QuadratureRule& r = hermite64();
  double acc = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    acc += r.weights[i] * f(r.nodes[i]);
  }
  return acc;
}

template <typename F>
double unit_integral(F&& f) {
  const QuadratureRule& r = legendre01_64();
  double acc = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    acc += r.weights[i] * f(r.nodes[i]);
  }
  return acc;
}

// Tensor rule on the unit square, 64x64 points.
template <typename F>
double unit_square_integral(F&& f) {
  const QuadratureRule& r = legendre01_64();
  double acc = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    double inner = 0.0;
    for (std::size_t j = 0; j < r.nodes.size(); ++j) {
      inner += r.weights[j] * f(r.nodes[i], r.nodes[j]);
    }
    acc += r.weights[i] * inner;
  }
  return acc;
}

}  // namespace scoregof

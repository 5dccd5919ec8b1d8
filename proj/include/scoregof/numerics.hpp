#pragma once

// Scalar primitives shared by every statistic in the library: standard
// normal pdf/cdf/quantile, normalized Hermite polynomials, the Haar system
// on [0,1], empirical cdf evaluation and midranks.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace scoregof {

inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;
inline constexpr double kInvSqrt2 = 0.70710678118654752440;

struct NormalEval {
  double pdf;
  double cdf;
};

inline double std_normal_pdf(double x) {
  return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

// Φ via erfc; absolute error stays below 1e-15 over the whole line.
inline double std_normal_cdf(double x) {
  return 0.5 * std::erfc(-x * kInvSqrt2);
}

inline NormalEval std_normal(double x) {
  if (!std::isfinite(x)) {
    throw std::domain_error("std_normal: non-finite argument");
  }
  return {std_normal_pdf(x), std_normal_cdf(x)};
}

namespace detail {

// Acklam's rational approximation to the standard normal quantile,
// accurate to about 1.15e-9 relative before refinement.
inline double acklam_quantile(double p) {
  static constexpr double a[6] = {
      -3.969683028665376e+01, 2.209460984245205e+02,  -2.759285104469687e+02,
      1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[5] = {
      -5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
      6.680131188771972e+01,  -1.328068155288572e+01};
  static constexpr double c[6] = {
      -7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
      -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                  2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double plow = 0.02425;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - plow) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace detail

// Φ^{-1}. Rational initial guess refined with one guarded Halley step;
// the composition Φ(Φ^{-1}(p)) is then exact to ~1e-15 away from the
// extreme tails. p in the open interval (0,1).
inline double std_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("std_normal_quantile: p must lie strictly in (0,1)");
  }
  double x = detail::acklam_quantile(p);
  const double pdf = std_normal_pdf(x);
  if (pdf > 1e-280) {
    const double err = std_normal_cdf(x) - p;
    const double u = err / pdf;
    x -= u / (1.0 + 0.5 * x * u);
  }
  return x;
}

// Probabilists' Hermite polynomial He_j divided by sqrt(j!), so the family
// is orthonormal under the standard normal weight. Supported for j <= 20.
inline double hermite_normalized(int j, double x) {
  if (j < 0 || j > 20) {
    throw std::domain_error("hermite_normalized: order must lie in [0, 20]");
  }
  if (j == 0) return 1.0;
  // Recurrence in the normalized basis:
  //   h_{k+1}(x) = (x h_k(x) - sqrt(k) h_{k-1}(x)) / sqrt(k+1)
  double hm = 1.0;
  double h = x;
  for (int k = 1; k < j; ++k) {
    const double next = (x * h - std::sqrt(double(k)) * hm) / std::sqrt(double(k + 1));
    hm = h;
    h = next;
  }
  return h;
}

// Index into the Haar system on [0,1], written lexicographically with the
// constant function 1 at the head, then scale 0 (the mother wavelet),
// scale 1, and so on; `translate` runs from 1 to 2^scale within a scale.
struct WaveletIndex {
  int scale = 0;
  int translate = 1;
  bool head = false;

  static WaveletIndex constant() { return WaveletIndex{0, 1, true}; }
  static WaveletIndex wavelet(int scale, int translate) {
    if (scale < 0 || translate < 1 || translate > (1 << scale)) {
      throw std::domain_error("WaveletIndex: translate must lie in [1, 2^scale]");
    }
    return WaveletIndex{scale, translate, false};
  }
  bool operator==(const WaveletIndex& o) const {
    return head == o.head && (head || (scale == o.scale && translate == o.translate));
  }
};

// Haar evaluation at t in [0,1]. Supports are half-open, so the value is
// one of {-2^{scale/2}, 0, +2^{scale/2}} (the head is identically 1).
inline double haar_eval(const WaveletIndex& w, double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw std::domain_error("haar_eval: t must lie in [0,1]");
  }
  if (w.head) return 1.0;
  const double cells = double(std::int64_t(1) << w.scale);
  const double x = cells * t - double(w.translate - 1);  // position inside the cell
  if (x < 0.0 || x >= 1.0) return 0.0;
  const double amp = std::sqrt(cells);
  return x < 0.5 ? amp : -amp;
}

// Right-continuous empirical cdf: (#{x_i <= t}) / n over a sorted table.
inline double ecdf_eval_sorted(const std::vector<double>& sorted_values, double t) {
  if (sorted_values.empty()) {
    throw std::domain_error("ecdf_eval: empty sample");
  }
  const auto it = std::upper_bound(sorted_values.begin(), sorted_values.end(), t);
  return double(it - sorted_values.begin()) / double(sorted_values.size());
}

inline double ecdf_eval(std::vector<double> values, double t) {
  std::sort(values.begin(), values.end());
  return ecdf_eval_sorted(values, t);
}

// Ranks 1..n with ties replaced by the average rank of their block.
inline std::vector<double> midranks(const std::vector<double>& values) {
  const std::size_t n = values.size();
  if (n == 0) {
    throw std::domain_error("midranks: empty input");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && values[order[j]] == values[order[i]]) ++j;
    const double avg = 0.5 * double(i + 1 + j);  // mean of ranks i+1 .. j
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = avg;
    i = j;
  }
  return ranks;
}

// Number of observations that share their value with at least one other.
inline std::size_t tied_count(const std::vector<double>& sorted_values) {
  std::size_t ties = 0;
  std::size_t i = 0;
  const std::size_t n = sorted_values.size();
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && sorted_values[j] == sorted_values[i]) ++j;
    if (j - i > 1) ties += j - i;
    i = j;
  }
  return ties;
}

}  // namespace scoregof

#pragma once

// Observation container. A sample is univariate or bivariate, validated
// finite and non-empty at construction, with sorted copies and midranks
// cached because every statistic in the library consumes them.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "scoregof/numerics.hpp"

namespace scoregof {

enum class SampleKind { univariate, bivariate };

class Sample {
 public:
  static Sample univariate(std::vector<double> x) {
    Sample s;
    s.kind_ = SampleKind::univariate;
    validate("sample", x);
    s.first_ = std::move(x);
    s.sorted_first_ = s.first_;
    std::sort(s.sorted_first_.begin(), s.sorted_first_.end());
    s.ties_first_ = tied_count(s.sorted_first_);
    return s;
  }

  static Sample bivariate(std::vector<double> u, std::vector<double> v) {
    if (u.size() != v.size()) {
      throw std::domain_error("Sample: coordinate lengths differ");
    }
    Sample s;
    s.kind_ = SampleKind::bivariate;
    validate("first coordinate", u);
    validate("second coordinate", v);
    s.first_ = std::move(u);
    s.second_ = std::move(v);
    s.sorted_first_ = s.first_;
    s.sorted_second_ = s.second_;
    std::sort(s.sorted_first_.begin(), s.sorted_first_.end());
    std::sort(s.sorted_second_.begin(), s.sorted_second_.end());
    s.midranks_first_ = midranks(s.first_);
    s.midranks_second_ = midranks(s.second_);
    s.ties_first_ = tied_count(s.sorted_first_);
    s.ties_second_ = tied_count(s.sorted_second_);
    return s;
  }

  SampleKind kind() const { return kind_; }
  std::size_t size() const { return first_.size(); }

  const std::vector<double>& x() const { return first_; }
  const std::vector<double>& u() const { return first_; }
  const std::vector<double>& v() const { return second_; }

  const std::vector<double>& sorted_x() const { return sorted_first_; }
  const std::vector<double>& sorted_u() const { return sorted_first_; }
  const std::vector<double>& sorted_v() const { return sorted_second_; }

  const std::vector<double>& midranks_u() const { return midranks_first_; }
  const std::vector<double>& midranks_v() const { return midranks_second_; }

  std::size_t ties_u() const { return ties_first_; }
  std::size_t ties_v() const { return ties_second_; }

  double ecdf_x(double t) const { return ecdf_eval_sorted(sorted_first_, t); }
  double ecdf_u(double t) const { return ecdf_eval_sorted(sorted_first_, t); }
  double ecdf_v(double t) const { return ecdf_eval_sorted(sorted_second_, t); }

  Sample subset(const std::vector<std::size_t>& indices) const {
    std::vector<double> a;
    a.reserve(indices.size());
    for (const std::size_t i : indices) a.push_back(first_[i]);
    if (kind_ == SampleKind::univariate) return univariate(std::move(a));
    std::vector<double> b;
    b.reserve(indices.size());
    for (const std::size_t i : indices) b.push_back(second_[i]);
    return bivariate(std::move(a), std::move(b));
  }

 private:
  Sample() = default;

  static void validate(const char* what, const std::vector<double>& values) {
    if (values.empty()) {
      throw std::domain_error(std::string("Sample: empty ") + what);
    }
    for (const double v : values) {
      if (!std::isfinite(v)) {
        throw std::domain_error(std::string("Sample: non-finite value in ") + what);
      }
    }
  }

  SampleKind kind_ = SampleKind::univariate;
  std::vector<double> first_;
  std::vector<double> second_;
  std::vector<double> sorted_first_;
  std::vector<double> sorted_second_;
  std::vector<double> midranks_first_;
  std::vector<double> midranks_second_;
  std::size_t ties_first_ = 0;
  std::size_t ties_second_ = 0;
};

inline double sample_mean(const std::vector<double>& x) {
  double s = 0.0;
  for (const double v : x) s += v;
  return s / double(x.size());
}

// Variance with the maximum-likelihood denominator n.
inline double sample_variance_mle(const std::vector<double>& x, double mean) {
  double s = 0.0;
  for (const double v : x) s += (v - mean) * (v - mean);
  return s / double(x.size());
}

}  // namespace scoregof

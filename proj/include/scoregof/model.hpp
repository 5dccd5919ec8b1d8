#pragma once

// Null-model layer: fit the null parameter, draw synthetic samples from the
// fitted null, and project direction functions onto the orthocomplement of
// the null tangent space. Four null hypotheses are supported:
//
//   - simple nulls (a fully specified continuous cdf: uniform(0,1) or
//     standard normal); nothing is estimated, projection is centering;
//   - the Gaussian location-scale family, fitted by maximum likelihood
//     (variance with denominator n, so the likelihood equations hold
//     exactly for the plugged-in scores);
//   - independence of a bivariate pair, fitted by the product of the
//     empirical marginals;
//   - a Gaussian copula with fixed correlation rho0, marginals fitted
//     empirically. Direction evaluation is rank-based, so synthetic draws
//     use uniform marginals.

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "scoregof/linalg.hpp"
#include "scoregof/numerics.hpp"
#include "scoregof/quadrature.hpp"
#include "scoregof/rng.hpp"
#include "scoregof/sample.hpp"

namespace scoregof {

struct degenerate_fit_error : std::runtime_error {
  explicit degenerate_fit_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ill_posed_projection_error : std::runtime_error {
  explicit ill_posed_projection_error(const std::string& msg) : std::runtime_error(msg) {}
};

enum class NullKind {
  simple_uniform,
  simple_normal,
  gaussian,
  independence,
  gaussian_copula,
};

struct NullSpec {
  NullKind kind = NullKind::gaussian;
  double rho0 = 0.0;  // gaussian_copula only

  static NullSpec simple_uniform() { return {NullKind::simple_uniform, 0.0}; }
  static NullSpec simple_normal() { return {NullKind::simple_normal, 0.0}; }
  static NullSpec gaussian() { return {NullKind::gaussian, 0.0}; }
  static NullSpec independence() { return {NullKind::independence, 0.0}; }
  static NullSpec gaussian_copula(double rho0) {
    if (!(rho0 > -1.0 && rho0 < 1.0)) {
      throw std::domain_error("NullSpec: copula correlation must lie strictly in (-1,1)");
    }
    return {NullKind::gaussian_copula, rho0};
  }

  bool univariate() const {
    return kind == NullKind::simple_uniform || kind == NullKind::simple_normal ||
           kind == NullKind::gaussian;
  }
};

inline const char* null_kind_name(NullKind k) {
  switch (k) {
    case NullKind::simple_uniform: return "uniform";
    case NullKind::simple_normal: return "normal";
    case NullKind::gaussian: return "gaussian";
    case NullKind::independence: return "independence";
    case NullKind::gaussian_copula: return "copula";
  }
  return "?";
}

// One marginal distribution: either an empirical table of atoms (nondecreasing,
// cdf ending at 1) or the analytic uniform cdf on [0,1], which is what the
// oracle fits of simulation studies carry.
class Marginal {
 public:
  static Marginal empirical(std::vector<double> sorted_atoms) {
    Marginal m;
    m.uniform_ = false;
    m.atoms_ = std::move(sorted_atoms);
    return m;
  }
  static Marginal uniform01() {
    Marginal m;
    m.uniform_ = true;
    return m;
  }

  bool is_uniform() const { return uniform_; }
  const std::vector<double>& atoms() const { return atoms_; }

  double cdf(double x) const {
    if (uniform_) return std::min(1.0, std::max(0.0, x));
    return ecdf_eval_sorted(atoms_, x);
  }

  // Midrank of x within the atom table (ties averaged); the map
  // midrank/(n+1) keeps normal-score transforms finite. For the uniform
  // marginal the probability transform is the identity.
  double normal_score_u(double x) const {
    if (uniform_) return std::min(1.0 - 1e-15, std::max(1e-15, x));
    const double below = double(std::lower_bound(atoms_.begin(), atoms_.end(), x) - atoms_.begin());
    const double equal = double(std::upper_bound(atoms_.begin(), atoms_.end(), x) - atoms_.begin()) - below;
    const double midrank = below + 0.5 * (equal + 1.0);
    return midrank / double(atoms_.size() + 1);
  }

  // Integral of f against this marginal: an exact finite sum for empirical
  // tables, 64-point Gauss-Legendre for the uniform case.
  double integrate(const std::function<double(double)>& f) const {
    if (uniform_) return unit_integral(f);
    double acc = 0.0;
    for (const double a : atoms_) acc += f(a);
    return acc / double(atoms_.size());
  }

 private:
  bool uniform_ = false;
  std::vector<double> atoms_;
};

class FittedNull {
 public:
  NullKind kind() const { return spec_.kind; }
  const NullSpec& spec() const { return spec_; }

  double mu() const { return mu_; }
  double sigma() const { return sigma_; }

  // Gaussian fits map observations to (x - mu)/sigma; other univariate
  // nulls evaluate directions at the raw observation.
  double standardize(double x) const {
    return spec_.kind == NullKind::gaussian ? (x - mu_) / sigma_ : x;
  }

  // Null cdf in the coordinate directions are evaluated in: the uniform cdf
  // for the simple uniform null, Phi for the simple normal null and for the
  // Gaussian fit (standardized coordinates).
  double base_cdf(double t) const {
    switch (spec_.kind) {
      case NullKind::simple_uniform:
        return std::min(1.0, std::max(0.0, t));
      case NullKind::simple_normal:
      case NullKind::gaussian:
        return std_normal_cdf(t);
      default:
        throw std::domain_error("base_cdf: univariate nulls only");
    }
  }

  const Marginal& margin_u() const { return margin_u_; }
  const Marginal& margin_v() const { return margin_v_; }

  static FittedNull simple(NullSpec spec) {
    FittedNull f;
    f.spec_ = spec;
    return f;
  }
  static FittedNull gaussian(double mu, double sigma) {
    if (!(sigma > 0.0)) throw degenerate_fit_error("gaussian fit: sigma must be positive");
    FittedNull f;
    f.spec_ = NullSpec::gaussian();
    f.mu_ = mu;
    f.sigma_ = sigma;
    return f;
  }
  static FittedNull independence(Marginal mu_u, Marginal mu_v) {
    FittedNull f;
    f.spec_ = NullSpec::independence();
    f.margin_u_ = std::move(mu_u);
    f.margin_v_ = std::move(mu_v);
    return f;
  }
  static FittedNull copula(double rho0, Marginal mu_u, Marginal mu_v) {
    FittedNull f;
    f.spec_ = NullSpec::gaussian_copula(rho0);
    f.margin_u_ = std::move(mu_u);
    f.margin_v_ = std::move(mu_v);
    return f;
  }

 private:
  FittedNull() = default;

  NullSpec spec_{NullKind::simple_uniform, 0.0};
  double mu_ = 0.0;
  double sigma_ = 1.0;
  Marginal margin_u_ = Marginal::uniform01();
  Marginal margin_v_ = Marginal::uniform01();
};

inline FittedNull fit_null(const NullSpec& spec, const Sample& sample) {
  const bool want_univariate = spec.univariate();
  const bool have_univariate = sample.kind() == SampleKind::univariate;
  if (want_univariate != have_univariate) {
    throw std::domain_error(std::string("fit_null: sample kind does not match null '") +
                            null_kind_name(spec.kind) + "'");
  }
  switch (spec.kind) {
    case NullKind::simple_uniform:
    case NullKind::simple_normal:
      return FittedNull::simple(spec);
    case NullKind::gaussian: {
      if (sample.size() < 2) {
        throw degenerate_fit_error("fit_null: gaussian fit needs n >= 2");
      }
      const double mu = sample_mean(sample.x());
      const double var = sample_variance_mle(sample.x(), mu);
      if (!(var > 0.0)) {
        throw degenerate_fit_error("fit_null: degenerate sigma-hat (constant sample)");
      }
      return FittedNull::gaussian(mu, std::sqrt(var));
    }
    case NullKind::independence:
      return FittedNull::independence(Marginal::empirical(sample.sorted_u()),
                                      Marginal::empirical(sample.sorted_v()));
    case NullKind::gaussian_copula:
      return FittedNull::copula(spec.rho0, Marginal::empirical(sample.sorted_u()),
                                Marginal::empirical(sample.sorted_v()));
  }
  throw std::logic_error("fit_null: unreachable");
}

// Oracle fits carry a fully known null parameter instead of an estimate;
// simulation checks project at these.
inline FittedNull oracle_gaussian(double mu, double sigma) {
  return FittedNull::gaussian(mu, sigma);
}
inline FittedNull oracle_independence_uniform() {
  return FittedNull::independence(Marginal::uniform01(), Marginal::uniform01());
}
inline FittedNull oracle_copula_uniform(double rho0) {
  return FittedNull::copula(rho0, Marginal::uniform01(), Marginal::uniform01());
}

// Synthetic data from the fitted null. Bivariate nulls draw with uniform
// marginals: every direction family on them is rank-based, so the law of
// any statistic is unchanged by the choice of continuous marginals.
inline Sample sample_null(const FittedNull& fit, std::size_t n, SeedStream& rng) {
  if (n < 1) throw std::domain_error("sample_null: n must be at least 1");
  switch (fit.kind()) {
    case NullKind::simple_uniform: {
      std::vector<double> x(n);
      for (double& v : x) v = rng.uniform01();
      return Sample::univariate(std::move(x));
    }
    case NullKind::simple_normal: {
      std::vector<double> x(n);
      for (double& v : x) v = rng.normal();
      return Sample::univariate(std::move(x));
    }
    case NullKind::gaussian: {
      std::vector<double> x(n);
      for (double& v : x) v = fit.mu() + fit.sigma() * rng.normal();
      return Sample::univariate(std::move(x));
    }
    case NullKind::independence: {
      std::vector<double> u(n), v(n);
      for (std::size_t i = 0; i < n; ++i) {
        u[i] = rng.uniform01();
        v[i] = rng.uniform01();
      }
      return Sample::bivariate(std::move(u), std::move(v));
    }
    case NullKind::gaussian_copula: {
      std::vector<double> u(n), v(n);
      for (std::size_t i = 0; i < n; ++i) {
        const auto [z1, z2] = rng.correlated_normal_pair(fit.spec().rho0);
        u[i] = std_normal_cdf(z1);
        v[i] = std_normal_cdf(z2);
      }
      return Sample::bivariate(std::move(u), std::move(v));
    }
  }
  throw std::logic_error("sample_null: unreachable");
}

struct ProjectionReport {
  std::vector<double> coefficients;  // solves fisher_info * c = E[h * score]
  Matrix fisher_info;
};

struct UniProjection {
  // Residual h - Ph - Pi(h) in the coordinates directions are evaluated in
  // (standardized for the Gaussian fit, raw for simple nulls).
  std::function<double(double)> residual;
  std::optional<ProjectionReport> report;
};

struct BiProjection {
  std::function<double(double, double)> residual;
};

// Moments of a direction against the Gaussian score basis {z, z^2 - 1}:
// E[h], E[h z], E[h (z^2-1)] under the standard normal. Closed forms for
// the direction families live next to the families; this struct lets them
// bypass quadrature.
struct GaussianMoments {
  double mean_h = 0.0;
  double mean_hz = 0.0;
  double mean_hz2m1 = 0.0;
};

namespace detail {

inline GaussianMoments gaussian_moments_by_quadrature(const std::function<double(double)>& h) {
  GaussianMoments m;
  m.mean_h = normal_expectation(h);
  m.mean_hz = normal_expectation([&](double z) { return h(z) * z; });
  m.mean_hz2m1 = normal_expectation([&](double z) { return h(z) * (z * z - 1.0); });
  return m;
}

inline const Matrix& gaussian_score_gram() {
  // Gram matrix of the score basis under the standard normal, computed by
  // the same rule as the cross moments so the normal equations are
  // internally consistent.
  static const Matrix info = [] {
    Matrix m(2, 2);
    m.at(0, 0) = normal_expectation([](double z) { return z * z; });
    m.at(0, 1) = normal_expectation([](double z) { return z * (z * z - 1.0); });
    m.at(1, 0) = m.at(0, 1);
    m.at(1, 1) = normal_expectation([](double z) {
      const double w = z * z - 1.0;
      return w * w;
    });
    return m;
  }();
  return info;
}

inline UniProjection project_gaussian(const std::function<double(double)>& h,
                                      const GaussianMoments& m) {
  const Matrix& info = gaussian_score_gram();
  Matrix lower;
  if (!cholesky_factor(info, lower)) {
    throw ill_posed_projection_error("project: singular information matrix");
  }
  const std::vector<double> c = cholesky_solve(lower, {m.mean_hz, m.mean_hz2m1});
  UniProjection out;
  const double mean_h = m.mean_h;
  const double c1 = c[0];
  const double c2 = c[1];
  out.residual = [h, mean_h, c1, c2](double z) {
    return h(z) - mean_h - c1 * z - c2 * (z * z - 1.0);
  };
  out.report = ProjectionReport{{c1, c2}, info};
  return out;
}

}  // namespace detail

// Projection for univariate nulls. Simple nulls have an empty tangent
// space, so the residual is plain centering and no report is produced.
// The Gaussian null removes the location and scale score components.
inline UniProjection project(const FittedNull& fit, const std::function<double(double)>& h) {
  switch (fit.kind()) {
    case NullKind::simple_uniform: {
      const double mean_h = unit_integral(h);
      return {[h, mean_h](double x) { return h(x) - mean_h; }, std::nullopt};
    }
    case NullKind::simple_normal: {
      const double mean_h = normal_expectation(h);
      return {[h, mean_h](double x) { return h(x) - mean_h; }, std::nullopt};
    }
    case NullKind::gaussian:
      return detail::project_gaussian(h, detail::gaussian_moments_by_quadrature(h));
    default:
      throw std::domain_error("project: univariate overload used with a bivariate null");
  }
}

inline UniProjection project(const FittedNull& fit, const std::function<double(double)>& h,
                             const GaussianMoments& moments) {
  if (fit.kind() != NullKind::gaussian && fit.kind() != NullKind::simple_normal) {
    throw std::domain_error("project: closed moments apply to normal-base nulls");
  }
  if (fit.kind() == NullKind::simple_normal) {
    const double mean_h = moments.mean_h;
    return {[h, mean_h](double x) { return h(x) - mean_h; }, std::nullopt};
  }
  return detail::project_gaussian(h, moments);
}

// Projection for the independence null (and the rank-reduced copula null):
// the residual of the centered direction is
//   h(x,y) - int h(x,v) dF_V(v) - int h(u,y) dF_U(u) + iint h dF_U dF_V,
// with marginal integrals taken against the fitted marginals, exactly for
// empirical tables.
inline BiProjection project(const FittedNull& fit, const std::function<double(double, double)>& h) {
  if (fit.kind() != NullKind::independence && fit.kind() != NullKind::gaussian_copula) {
    throw std::domain_error("project: bivariate overload needs an independence or copula null");
  }
  const double grand = fit.margin_u().integrate([&](double x) {
    return fit.margin_v().integrate([&](double y) { return h(x, y); });
  });
  BiProjection out;
  out.residual = [h, grand, fit](double x, double y) {
    const double row = fit.margin_v().integrate([&](double vv) { return h(x, vv); });
    const double col = fit.margin_u().integrate([&](double uu) { return h(uu, y); });
    return h(x, y) - row - col + grand;
  };
  return out;
}

}  // namespace scoregof

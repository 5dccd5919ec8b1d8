#pragma once

// Direction families: finite indexed sets {h_gamma} with per-direction
// weights. Univariate families evaluate at the standardized observation
// under the Gaussian null (raw under simple nulls); bivariate families are
// rank-based, composed with the fitted marginal cdfs.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "scoregof/model.hpp"
#include "scoregof/numerics.hpp"
#include "scoregof/sample.hpp"

namespace scoregof {

enum class FamilyKind {
  indicator_halfline,
  indicator_quadrant,
  exp_mixture,
  hermite_set,
  haar_weighted,
  tensor_haar_weighted,
  rank_indicator,
  normal_scores,
};

inline const char* family_kind_name(FamilyKind k) {
  switch (k) {
    case FamilyKind::indicator_halfline: return "indicator-halfline";
    case FamilyKind::indicator_quadrant: return "indicator-quadrant";
    case FamilyKind::exp_mixture: return "exp-mixture";
    case FamilyKind::hermite_set: return "hermite-set";
    case FamilyKind::haar_weighted: return "haar-weighted";
    case FamilyKind::tensor_haar_weighted: return "tensor-haar-weighted";
    case FamilyKind::rank_indicator: return "rank-indicator";
    case FamilyKind::normal_scores: return "normal-scores";
  }
  return "?";
}

// One half-line indicator 1(x <= at) (or the open version 1(x < at), used
// so that suprema over step functions are attained on a finite grid).
struct IndicatorPoint {
  double at = 0.0;
  bool open = false;
};

struct QuadrantPoint {
  double u = 0.0;
  double v = 0.0;
};

// Tensor product of two Haar indices, same scale in both coordinates.
struct TensorHaarIndex {
  WaveletIndex a;
  WaveletIndex b;
};

using GridPoint =
    std::variant<double, int, IndicatorPoint, QuadrantPoint, WaveletIndex, TensorHaarIndex>;

namespace detail {

inline bool grid_point_less(const GridPoint& lhs, const GridPoint& rhs) {
  if (lhs.index() != rhs.index()) return lhs.index() < rhs.index();
  struct Key {
    double a = 0, b = 0, c = 0, d = 0;
  };
  auto key = [](const GridPoint& g) -> Key {
    switch (g.index()) {
      case 0: return {std::get<double>(g)};
      case 1: return {double(std::get<int>(g))};
      case 2: {
        const auto& p = std::get<IndicatorPoint>(g);
        return {p.at, p.open ? 0.0 : 1.0};
      }
      case 3: {
        const auto& p = std::get<QuadrantPoint>(g);
        return {p.u, p.v};
      }
      case 4: {
        const auto& w = std::get<WaveletIndex>(g);
        return {w.head ? -1.0 : double(w.scale), double(w.translate)};
      }
      default: {
        const auto& t = std::get<TensorHaarIndex>(g);
        return {t.a.head ? -1.0 : double(t.a.scale), double(t.a.translate),
                t.b.head ? -1.0 : double(t.b.scale), double(t.b.translate)};
      }
    }
  };
  const Key x = key(lhs);
  const Key y = key(rhs);
  if (x.a != y.a) return x.a < y.a;
  if (x.b != y.b) return x.b < y.b;
  if (x.c != y.c) return x.c < y.c;
  return x.d < y.d;
}

inline bool grid_point_equal(const GridPoint& lhs, const GridPoint& rhs) {
  return !grid_point_less(lhs, rhs) && !grid_point_less(rhs, lhs);
}

}  // namespace detail

struct WeightScheme {
  enum class Kind { uniform, geometric, explicit_values, diag_quadratic };
  Kind kind = Kind::uniform;
  double rho = 0.2;
  std::vector<double> values;
  Matrix sigma0;  // diag_quadratic only

  static WeightScheme uniform() { return {}; }
  static WeightScheme geometric(double rho) {
    if (!(rho > 0.0 && rho < 0.25)) {
      throw std::domain_error("WeightScheme: geometric ratio must lie in (0, 1/4)");
    }
    WeightScheme w;
    w.kind = Kind::geometric;
    w.rho = rho;
    return w;
  }
  static WeightScheme explicit_values(std::vector<double> v) {
    WeightScheme w;
    w.kind = Kind::explicit_values;
    w.values = std::move(v);
    return w;
  }
  static WeightScheme diag_quadratic(std::vector<double> lambda, Matrix sigma0) {
    if (!is_positive_definite(sigma0)) {
      throw std::domain_error("WeightScheme: Sigma0 must be symmetric positive definite");
    }
    WeightScheme w;
    w.kind = Kind::diag_quadratic;
    w.values = std::move(lambda);
    w.sigma0 = std::move(sigma0);
    return w;
  }
};

class DirectionFamily {
 public:
  FamilyKind kind = FamilyKind::indicator_halfline;
  std::vector<GridPoint> grid;
  std::vector<double> weights;
  // Indicator families may defer their grid to the sample's own points,
  // where the supremum over step functions is attained.
  bool adaptive_grid = false;
  // exp-mixture bookkeeping (compactness bound on the lambda grid).
  double lambda_max = 3.0;
  double lambda_step = 0.05;

  std::size_t size() const { return grid.size(); }

  static DirectionFamily indicator_halfline() {
    DirectionFamily f;
    f.kind = FamilyKind::indicator_halfline;
    f.adaptive_grid = true;
    return f;
  }

  static DirectionFamily indicator_halfline(const std::vector<double>& points) {
    DirectionFamily f;
    f.kind = FamilyKind::indicator_halfline;
    for (const double p : points) f.grid.emplace_back(IndicatorPoint{p, false});
    f.finish_uniform_weights();
    return f;
  }

  static DirectionFamily indicator_quadrant() {
    DirectionFamily f;
    f.kind = FamilyKind::indicator_quadrant;
    f.adaptive_grid = true;
    return f;
  }

  static DirectionFamily indicator_quadrant(const std::vector<QuadrantPoint>& corners) {
    DirectionFamily f;
    f.kind = FamilyKind::indicator_quadrant;
    for (const auto& c : corners) f.grid.emplace_back(c);
    f.finish_uniform_weights();
    return f;
  }

  static DirectionFamily exp_mixture(double lambda_max = 3.0, double step = 0.05) {
    if (!(lambda_max > 0.0) || !(step > 0.0)) {
      throw std::domain_error("exp_mixture: lambda_max and step must be positive");
    }
    DirectionFamily f;
    f.kind = FamilyKind::exp_mixture;
    f.lambda_max = lambda_max;
    f.lambda_step = step;
    const int half = int(std::floor(lambda_max / step + 1e-9));
    for (int k = -half; k <= half; ++k) f.grid.emplace_back(double(k) * step);
    f.finish_uniform_weights();
    return f;
  }

  static DirectionFamily exp_mixture_grid(std::vector<double> lambdas, double lambda_max = 3.0) {
    DirectionFamily f;
    f.kind = FamilyKind::exp_mixture;
    f.lambda_max = lambda_max;
    for (const double l : lambdas) {
      if (std::abs(l) > lambda_max) {
        throw std::domain_error("exp_mixture: lambda beyond the compactness bound");
      }
      f.grid.emplace_back(l);
    }
    f.finish_uniform_weights();
    return f;
  }

  static DirectionFamily hermite_set(const std::vector<int>& indices,
                                     std::vector<double> weights = {}) {
    DirectionFamily f;
    f.kind = FamilyKind::hermite_set;
    for (const int j : indices) {
      if (j < 3 || j > 20) {
        throw std::domain_error("hermite_set: indices must lie in {3..20}");
      }
      f.grid.emplace_back(j);
    }
    if (weights.empty()) {
      f.finish_uniform_weights();
    } else {
      f.weights = std::move(weights);
      f.validate();
    }
    return f;
  }

  // Lexicographic Haar family: the constant head, then scales 0..max_scale;
  // scale i receives weight rho^i under the geometric scheme.
  static DirectionFamily haar_weighted(int max_scale = 6,
                                       WeightScheme scheme = WeightScheme::geometric(0.2)) {
    if (max_scale < 0 || max_scale > 12) {
      throw std::domain_error("haar_weighted: max_scale must lie in [0, 12]");
    }
    DirectionFamily f;
    f.kind = FamilyKind::haar_weighted;
    f.grid.emplace_back(WaveletIndex::constant());
    std::vector<double> w{1.0};
    for (int i = 0; i <= max_scale; ++i) {
      const double scale_weight =
          scheme.kind == WeightScheme::Kind::geometric ? std::pow(scheme.rho, i) : 1.0;
      for (int j = 1; j <= (1 << i); ++j) {
        f.grid.emplace_back(WaveletIndex::wavelet(i, j));
        w.push_back(scale_weight);
      }
    }
    if (scheme.kind == WeightScheme::Kind::explicit_values) {
      if (scheme.values.size() != f.grid.size()) {
        throw std::domain_error("haar_weighted: explicit weight length mismatch");
      }
      w = scheme.values;
    }
    f.weights = std::move(w);
    f.validate();
    return f;
  }

  static DirectionFamily tensor_haar_weighted(int max_scale = 3,
                                              WeightScheme scheme = WeightScheme::geometric(0.2)) {
    if (max_scale < 0 || max_scale > 6) {
      throw std::domain_error("tensor_haar_weighted: max_scale must lie in [0, 6]");
    }
    DirectionFamily f;
    f.kind = FamilyKind::tensor_haar_weighted;
    std::vector<double> w;
    for (int i = 0; i <= max_scale; ++i) {
      const double scale_weight =
          scheme.kind == WeightScheme::Kind::geometric ? std::pow(scheme.rho, i) : 1.0;
      for (int j1 = 1; j1 <= (1 << i); ++j1) {
        for (int j2 = 1; j2 <= (1 << i); ++j2) {
          f.grid.emplace_back(
              TensorHaarIndex{WaveletIndex::wavelet(i, j1), WaveletIndex::wavelet(i, j2)});
          w.push_back(scale_weight);
        }
      }
    }
    f.weights = std::move(w);
    f.validate();
    return f;
  }

  static DirectionFamily rank_indicator(std::vector<QuadrantPoint> grid01 = {}) {
    DirectionFamily f;
    f.kind = FamilyKind::rank_indicator;
    if (grid01.empty()) {
      for (int a = 1; a <= 9; ++a) {
        for (int b = 1; b <= 9; ++b) {
          grid01.push_back({0.1 * a, 0.1 * b});
        }
      }
    }
    for (const auto& g : grid01) {
      if (!(g.u > 0.0 && g.u <= 1.0 && g.v > 0.0 && g.v <= 1.0)) {
        throw std::domain_error("rank_indicator: grid points must lie in (0,1]^2");
      }
      f.grid.emplace_back(g);
    }
    f.finish_uniform_weights();
    return f;
  }

  static DirectionFamily normal_scores() {
    DirectionFamily f;
    f.kind = FamilyKind::normal_scores;
    f.grid.emplace_back(0);
    f.finish_uniform_weights();
    return f;
  }

  bool univariate() const {
    return kind == FamilyKind::indicator_halfline || kind == FamilyKind::exp_mixture ||
           kind == FamilyKind::hermite_set || kind == FamilyKind::haar_weighted;
  }

  void validate() const {
    if (!adaptive_grid && grid.empty()) {
      throw std::domain_error("DirectionFamily: empty grid");
    }
    if (!adaptive_grid && weights.size() != grid.size()) {
      throw std::domain_error("DirectionFamily: weights and grid lengths differ");
    }
    for (const double w : weights) {
      if (!(w > 0.0)) throw std::domain_error("DirectionFamily: weights must be positive");
    }
    std::vector<GridPoint> sorted = grid;
    std::sort(sorted.begin(), sorted.end(), detail::grid_point_less);
    for (std::size_t i = 1; i < sorted.size(); ++i) {
      if (detail::grid_point_equal(sorted[i - 1], sorted[i])) {
        throw std::domain_error("DirectionFamily: duplicate grid point");
      }
    }
  }

 private:
  void finish_uniform_weights() {
    weights.assign(grid.size(), 1.0);
    validate();
  }
};

// Pin an adaptive indicator grid to the sample: one open and one closed
// half-line per distinct transformed observation (both one-sided limits of
// the empirical process), or the full coordinate lattice for quadrants.
inline DirectionFamily materialize(const DirectionFamily& fam, const Sample& sample,
                                   const FittedNull& fit) {
  if (!fam.adaptive_grid) return fam;
  DirectionFamily out = fam;
  out.adaptive_grid = false;
  out.grid.clear();
  if (fam.kind == FamilyKind::indicator_halfline) {
    std::vector<double> pts;
    pts.reserve(sample.size());
    for (const double x : sample.sorted_x()) pts.push_back(fit.standardize(x));
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    for (const double t : pts) {
      out.grid.emplace_back(IndicatorPoint{t, true});
      out.grid.emplace_back(IndicatorPoint{t, false});
    }
  } else if (fam.kind == FamilyKind::indicator_quadrant) {
    if (sample.size() > 500) {
      throw std::domain_error(
          "indicator_quadrant: adaptive lattice capped at n = 500; pass an explicit grid");
    }
    std::vector<double> us = sample.sorted_u();
    std::vector<double> vs = sample.sorted_v();
    us.erase(std::unique(us.begin(), us.end()), us.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    for (const double a : us) {
      for (const double b : vs) {
        out.grid.emplace_back(QuadrantPoint{a, b});
      }
    }
  } else {
    throw std::logic_error("materialize: unexpected adaptive family");
  }
  out.weights.assign(out.grid.size(), 1.0);
  out.validate();
  return out;
}

namespace detail {

inline void require_normal_base(const FittedNull& fit, const char* what) {
  if (fit.kind() != NullKind::gaussian && fit.kind() != NullKind::simple_normal) {
    throw std::domain_error(std::string(what) + ": needs a normal-base null");
  }
}

inline double eval_univariate(FamilyKind kind, const GridPoint& g, double x,
                              const FittedNull& fit) {
  switch (kind) {
    case FamilyKind::indicator_halfline: {
      const auto& p = std::get<IndicatorPoint>(g);
      const double z = fit.standardize(x);
      const double ind = (p.open ? z < p.at : z <= p.at) ? 1.0 : 0.0;
      return ind - fit.base_cdf(p.at);
    }
    case FamilyKind::exp_mixture: {
      require_normal_base(fit, "exp-mixture");
      const double lambda = std::get<double>(g);
      const double z = fit.standardize(x);
      return std::exp(lambda * z - 0.5 * lambda * lambda) - 1.0;
    }
    case FamilyKind::hermite_set: {
      require_normal_base(fit, "hermite-set");
      return hermite_normalized(std::get<int>(g), fit.standardize(x));
    }
    case FamilyKind::haar_weighted: {
      const auto& w = std::get<WaveletIndex>(g);
      return haar_eval(w, fit.base_cdf(fit.standardize(x)));
    }
    default:
      throw std::domain_error("eval_direction: univariate observation for a bivariate family");
  }
}

inline double eval_bivariate(FamilyKind kind, const GridPoint& g, double u, double v,
                             const FittedNull& fit) {
  switch (kind) {
    case FamilyKind::indicator_quadrant: {
      const auto& q = std::get<QuadrantPoint>(g);
      return (u <= q.u && v <= q.v) ? 1.0 : 0.0;
    }
    case FamilyKind::rank_indicator: {
      const auto& q = std::get<QuadrantPoint>(g);
      return (fit.margin_u().cdf(u) <= q.u + 1e-12 && fit.margin_v().cdf(v) <= q.v + 1e-12)
                 ? 1.0
                 : 0.0;
    }
    case FamilyKind::tensor_haar_weighted: {
      const auto& t = std::get<TensorHaarIndex>(g);
      return haar_eval(t.a, fit.margin_u().cdf(u)) * haar_eval(t.b, fit.margin_v().cdf(v));
    }
    case FamilyKind::normal_scores: {
      return std_normal_quantile(fit.margin_u().normal_score_u(u)) *
             std_normal_quantile(fit.margin_v().normal_score_u(v));
    }
    default:
      throw std::domain_error("eval_direction: bivariate observation for a univariate family");
  }
}

}  // namespace detail

inline void require_grid_member(const DirectionFamily& fam, const GridPoint& g) {
  for (const auto& p : fam.grid) {
    if (detail::grid_point_equal(p, g)) return;
  }
  throw std::domain_error("eval_direction: index not in the family grid");
}

inline double eval_direction(const DirectionFamily& fam, const GridPoint& g, double x,
                             const FittedNull& fit) {
  require_grid_member(fam, g);
  return detail::eval_univariate(fam.kind, g, x, fit);
}

inline double eval_direction(const DirectionFamily& fam, const GridPoint& g, double u, double v,
                             const FittedNull& fit) {
  require_grid_member(fam, g);
  return detail::eval_bivariate(fam.kind, g, u, v, fit);
}

// E_{P-hat}[h_gamma] in closed or finite-sum form, used by the
// efficient-estimate score process. Centered families return zero.
inline double direction_null_mean(FamilyKind kind, const GridPoint& g, const FittedNull& fit) {
  switch (kind) {
    case FamilyKind::indicator_halfline:
    case FamilyKind::exp_mixture:
    case FamilyKind::hermite_set:
      return 0.0;
    case FamilyKind::haar_weighted:
      return std::get<WaveletIndex>(g).head ? 1.0 : 0.0;
    case FamilyKind::indicator_quadrant: {
      const auto& q = std::get<QuadrantPoint>(g);
      return fit.margin_u().cdf(q.u) * fit.margin_v().cdf(q.v);
    }
    case FamilyKind::rank_indicator: {
      const auto& q = std::get<QuadrantPoint>(g);
      auto prob_mass_le = [](const Marginal& m, double gamma) {
        if (m.is_uniform()) return std::min(1.0, std::max(0.0, gamma));
        // fraction of atoms whose own ecdf value is <= gamma (tie blocks
        // share the ecdf value of their last member)
        const auto& a = m.atoms();
        const std::size_t n = a.size();
        std::size_t count = 0;
        std::size_t i = 0;
        while (i < n) {
          std::size_t j = i + 1;
          while (j < n && a[j] == a[i]) ++j;
          if (double(j) / double(n) <= gamma + 1e-12) count = j;
          i = j;
        }
        return double(count) / double(n);
      };
      return prob_mass_le(fit.margin_u(), q.u) * prob_mass_le(fit.margin_v(), q.v);
    }
    case FamilyKind::tensor_haar_weighted: {
      const auto& t = std::get<TensorHaarIndex>(g);
      const double mu = fit.margin_u().is_uniform()
                            ? (t.a.head ? 1.0 : 0.0)
                            : fit.margin_u().integrate([&](double x) {
                                return haar_eval(t.a, fit.margin_u().cdf(x));
                              });
      const double mv = fit.margin_v().is_uniform()
                            ? (t.b.head ? 1.0 : 0.0)
                            : fit.margin_v().integrate([&](double y) {
                                return haar_eval(t.b, fit.margin_v().cdf(y));
                              });
      return mu * mv;
    }
    case FamilyKind::normal_scores: {
      const double mu = fit.margin_u().is_uniform()
                            ? 0.0
                            : fit.margin_u().integrate([&](double x) {
                                return std_normal_quantile(fit.margin_u().normal_score_u(x));
                              });
      const double mv = fit.margin_v().is_uniform()
                            ? 0.0
                            : fit.margin_v().integrate([&](double y) {
                                return std_normal_quantile(fit.margin_v().normal_score_u(y));
                              });
      return mu * mv;
    }
  }
  throw std::logic_error("direction_null_mean: unreachable");
}

// Closed-form moments against the Gaussian score basis. Only quadrature-free
// for the families whose integrals have exact expressions (indicators,
// Hermite, Haar); the exp-mixture moments are exact by the normal mgf.
inline GaussianMoments direction_gaussian_moments(FamilyKind kind, const GridPoint& g) {
  switch (kind) {
    case FamilyKind::indicator_halfline: {
      const double at = std::get<IndicatorPoint>(g).at;
      const double pdf = std_normal_pdf(at);
      return {0.0, -pdf, -at * pdf};
    }
    case FamilyKind::exp_mixture: {
      const double lambda = std::get<double>(g);
      return {0.0, lambda, lambda * lambda};
    }
    case FamilyKind::hermite_set: {
      const int j = std::get<int>(g);
      return {0.0, j == 1 ? 1.0 : 0.0, j == 2 ? std::sqrt(2.0) : 0.0};
    }
    case FamilyKind::haar_weighted: {
      const auto& w = std::get<WaveletIndex>(g);
      if (w.head) return {1.0, 0.0, 0.0};
      const double amp = std::sqrt(double(std::int64_t(1) << w.scale));
      const double a = double(w.translate - 1) / double(std::int64_t(1) << w.scale);
      const double b = double(w.translate) / double(std::int64_t(1) << w.scale);
      const double m = 0.5 * (a + b);
      auto pdf_at_quantile = [](double u) {
        if (u <= 0.0 || u >= 1.0) return 0.0;
        return std_normal_pdf(std_normal_quantile(u));
      };
      auto g_anti = [](double u) {
        if (u <= 0.0 || u >= 1.0) return 0.0;
        const double z = std_normal_quantile(u);
        return -z * std_normal_pdf(z);
      };
      const double hz = amp * (pdf_at_quantile(a) - 2.0 * pdf_at_quantile(m) + pdf_at_quantile(b));
      const double hz2 = amp * (2.0 * g_anti(m) - g_anti(a) - g_anti(b));
      return {0.0, hz, hz2};
    }
    default:
      throw std::domain_error("direction_gaussian_moments: univariate families only");
  }
}

}  // namespace scoregof

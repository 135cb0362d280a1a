#pragma once

#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "dimred/core.hpp"

// (Trimmed) moment, co-moment and energy-statistic estimators. These double as
// projection indices for ppdire and as dependence measures for sudire.

namespace dimred::dicomo {

enum class MomentKind { var, cov, skew, kurt, coskew, cokurt, corr, continuum, capi };
enum class CenterKind { mean, median };

struct MomentSpec {
  MomentKind kind = MomentKind::var;
  CenterKind center = CenterKind::mean;
  double trim_alpha = 0.0;  // fraction of extreme contributions dropped, [0, 0.5)
  int option = 1;           // power placement for coskew (1..2) / cokurt (1..3)
  double continuum_alpha = 1.0;
  Vector capi_weights;      // length 6; empty selects (1,0,0,0,0,0)
  bool sample_correction = false;  // opt-in m/(m-1) factor for var/cov
};

namespace detail {

inline void validate_trim(double alpha) {
  if (!(alpha >= 0.0 && alpha < 0.5))
    throw invalid_spec("trim_alpha must lie in [0, 0.5)");
}

inline double center_value(const Eigen::Ref<const Vector>& x, CenterKind center) {
  return center == CenterKind::mean ? x.mean() : median_of(x);
}

// Centered values with the floor(alpha*n) smallest and largest removed.
inline std::vector<double> trimmed_centered(const Eigen::Ref<const Vector>& x,
                                            CenterKind center, double alpha) {
  validate_trim(alpha);
  const Index n = x.size();
  const double c = center_value(x, center);
  std::vector<double> d(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) d[static_cast<std::size_t>(i)] = x[i] - c;
  std::sort(d.begin(), d.end());
  const auto k = static_cast<std::size_t>(alpha * static_cast<double>(n));
  if (d.size() < 2 * k + 2)
    throw data_error("moment: too few observations after trimming");
  return {d.begin() + static_cast<std::ptrdiff_t>(k),
          d.end() - static_cast<std::ptrdiff_t>(k)};
}

inline double power_mean(const std::vector<double>& d, int r) {
  double s = 0.0;
  for (double v : d) {
    double t = v;
    for (int q = 1; q < r; ++q) t *= v;
    s += t;
  }
  return s / static_cast<double>(d.size());
}

// Case indices kept for a co-moment: drop the floor(alpha*n) cases with the
// largest |centered cross-product|, stable in the original order.
inline std::vector<Index> comoment_kept(const Vector& prod, double alpha) {
  validate_trim(alpha);
  const Index n = prod.size();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return std::abs(prod[a]) < std::abs(prod[b]);
  });
  const auto k = static_cast<std::size_t>(alpha * static_cast<double>(n));
  if (order.size() < k + 2)
    throw data_error("comoment: too few observations after trimming");
  order.resize(order.size() - k);
  std::sort(order.begin(), order.end());
  return order;
}

inline void powers_for(MomentKind kind, int option, int* a, int* b) {
  switch (kind) {
    case MomentKind::cov:
    case MomentKind::corr:
      *a = 1; *b = 1;
      return;
    case MomentKind::coskew:
      if (option == 1) { *a = 2; *b = 1; return; }
      if (option == 2) { *a = 1; *b = 2; return; }
      throw invalid_spec("coskew: option must be 1 or 2");
    case MomentKind::cokurt:
      if (option == 1) { *a = 3; *b = 1; return; }
      if (option == 2) { *a = 2; *b = 2; return; }
      if (option == 3) { *a = 1; *b = 3; return; }
      throw invalid_spec("cokurt: option must be 1, 2 or 3");
    default:
      throw invalid_spec("comoment: kind is not a co-moment");
  }
}

struct ComomentParts {
  double raw;  // trimmed mean of dx^a dy^b
  double sx;   // sqrt of trimmed second moment of x over the same kept cases
  double sy;
};

inline ComomentParts comoment_parts(const Eigen::Ref<const Vector>& x,
                                    const Eigen::Ref<const Vector>& y, int a, int b,
                                    CenterKind center, double alpha) {
  if (x.size() != y.size()) throw data_error("comoment: length mismatch");
  if (x.size() < 2) throw data_error("comoment: need at least 2 observations");
  const double cx = center_value(x, center);
  const double cy = center_value(y, center);
  const Index n = x.size();
  Vector prod(n);
  for (Index i = 0; i < n; ++i) {
    double t = 1.0;
    for (int q = 0; q < a; ++q) t *= x[i] - cx;
    for (int q = 0; q < b; ++q) t *= y[i] - cy;
    prod[i] = t;
  }
  const std::vector<Index> kept = comoment_kept(prod, alpha);
  ComomentParts parts{0.0, 0.0, 0.0};
  double sxx = 0.0, syy = 0.0;
  for (Index i : kept) {
    parts.raw += prod[i];
    sxx += (x[i] - cx) * (x[i] - cx);
    syy += (y[i] - cy) * (y[i] - cy);
  }
  const double m = static_cast<double>(kept.size());
  parts.raw /= m;
  parts.sx = std::sqrt(sxx / m);
  parts.sy = std::sqrt(syy / m);
  return parts;
}

inline double standardized_comoment(const Eigen::Ref<const Vector>& x,
                                    const Eigen::Ref<const Vector>& y, int a, int b,
                                    CenterKind center, double alpha) {
  const ComomentParts parts = comoment_parts(x, y, a, b, center, alpha);
  if (parts.sx == 0.0 || parts.sy == 0.0)
    throw data_error("comoment: degenerate scale in standardization");
  double denom = 1.0;
  for (int q = 0; q < a; ++q) denom *= parts.sx;
  for (int q = 0; q < b; ++q) denom *= parts.sy;
  return parts.raw / denom;
}

}  // namespace detail

// Trimmed central moment of a single variable. skew and kurt are standardized
// by the trimmed scale of the same kept set; kurt is not excess-corrected.
inline double moment(const Eigen::Ref<const Vector>& x, const MomentSpec& spec) {
  if (x.size() < 2) throw data_error("moment: need at least 2 observations");
  check_finite(x, "moment");
  const std::vector<double> d = detail::trimmed_centered(x, spec.center, spec.trim_alpha);
  switch (spec.kind) {
    case MomentKind::var: {
      double v = detail::power_mean(d, 2);
      if (spec.sample_correction)
        v *= static_cast<double>(d.size()) / static_cast<double>(d.size() - 1);
      return v;
    }
    case MomentKind::skew: {
      const double m2 = detail::power_mean(d, 2);
      if (m2 == 0.0) throw data_error("moment: zero scale in skewness");
      return detail::power_mean(d, 3) / std::pow(m2, 1.5);
    }
    case MomentKind::kurt: {
      const double m2 = detail::power_mean(d, 2);
      if (m2 == 0.0) throw data_error("moment: zero scale in kurtosis");
      return detail::power_mean(d, 4) / (m2 * m2);
    }
    default:
      throw invalid_spec("moment: kind is not a univariate moment");
  }
}

// Trimmed co-moment of two variables. Trimming drops the cases carrying the
// largest absolute centered cross-products. corr is the standardized cov.
inline double comoment(const Eigen::Ref<const Vector>& x,
                       const Eigen::Ref<const Vector>& y, const MomentSpec& spec) {
  check_finite(x, "comoment");
  check_finite(y, "comoment");
  if (spec.kind == MomentKind::corr)
    return detail::standardized_comoment(x, y, 1, 1, spec.center, spec.trim_alpha);
  int a = 0, b = 0;
  detail::powers_for(spec.kind, spec.option, &a, &b);
  const detail::ComomentParts parts =
      detail::comoment_parts(x, y, a, b, spec.center, spec.trim_alpha);
  double value = parts.raw;
  if (spec.kind == MomentKind::cov && spec.sample_correction) {
    // kept-set size is recomputed from the trim fraction
    const auto n = static_cast<double>(x.size());
    const double m = n - std::floor(spec.trim_alpha * n);
    value *= m / (m - 1.0);
  }
  return value;
}

// Continuum association: cov^2(t, y) * var(t)^(alpha - 1). Reduces to squared
// covariance at alpha = 1 and approaches the variance criterion as alpha grows.
inline double continuum(const Eigen::Ref<const Vector>& t,
                        const Eigen::Ref<const Vector>& y, double alpha,
                        CenterKind center = CenterKind::mean, double trim_alpha = 0.0) {
  if (!(alpha >= 1.0)) throw invalid_spec("continuum: alpha must be >= 1");
  MomentSpec cov_spec;
  cov_spec.kind = MomentKind::cov;
  cov_spec.center = center;
  cov_spec.trim_alpha = trim_alpha;
  const double c = comoment(t, y, cov_spec);
  MomentSpec var_spec;
  var_spec.kind = MomentKind::var;
  var_spec.center = center;
  var_spec.trim_alpha = trim_alpha;
  const double v = moment(t, var_spec);
  return c * c * std::pow(v, alpha - 1.0);
}

// Co-moment analysis projection index: weighted combination of the basis
// (corr^2, coskew1*, coskew2*, cokurt1*, cokurt2* - 1, cokurt3*) of
// standardized co-moments. The (2,2) term is taken in excess form so that
// independent data score zero.
inline double capi(const Eigen::Ref<const Vector>& t, const Eigen::Ref<const Vector>& y,
                   const Eigen::Ref<const Vector>& weights,
                   CenterKind center = CenterKind::mean, double trim_alpha = 0.0) {
  if (weights.size() != 6)
    throw invalid_spec("capi: weight vector must have length 6");
  check_finite(t, "capi");
  check_finite(y, "capi");
  double basis[6];
  const double corr = detail::standardized_comoment(t, y, 1, 1, center, trim_alpha);
  basis[0] = corr * corr;
  basis[1] = detail::standardized_comoment(t, y, 2, 1, center, trim_alpha);
  basis[2] = detail::standardized_comoment(t, y, 1, 2, center, trim_alpha);
  basis[3] = detail::standardized_comoment(t, y, 3, 1, center, trim_alpha);
  basis[4] = detail::standardized_comoment(t, y, 2, 2, center, trim_alpha) - 1.0;
  basis[5] = detail::standardized_comoment(t, y, 1, 3, center, trim_alpha);
  double v = 0.0;
  for (int i = 0; i < 6; ++i) v += weights[i] * basis[i];
  return v;
}

// ---------------------------------------------------------------------------
// Energy statistics (V-statistic form).

namespace detail {

inline Matrix pairwise_euclidean(const Eigen::Ref<const Matrix>& x) {
  const Index n = x.rows();
  Matrix d(n, n);
  for (Index i = 0; i < n; ++i) {
    d(i, i) = 0.0;
    for (Index j = i + 1; j < n; ++j) {
      const double v = (x.row(i) - x.row(j)).norm();
      d(i, j) = v;
      d(j, i) = v;
    }
  }
  return d;
}

inline Matrix half_squared_differences(const Eigen::Ref<const Vector>& y) {
  const Index n = y.size();
  Matrix d(n, n);
  for (Index i = 0; i < n; ++i) {
    d(i, i) = 0.0;
    for (Index j = i + 1; j < n; ++j) {
      const double r = y[i] - y[j];
      d(i, j) = 0.5 * r * r;
      d(j, i) = d(i, j);
    }
  }
  return d;
}

inline void double_center(Matrix& d) {
  const Vector row_means = d.rowwise().mean();
  const Vector col_means = d.colwise().mean().transpose();
  const double grand = d.mean();
  d.colwise() -= row_means;
  d.rowwise() -= col_means.transpose();
  d.array() += grand;
}

inline double vstat_inner(const Matrix& a, const Matrix& b) {
  const auto n = static_cast<double>(a.rows());
  return (a.array() * b.array()).sum() / (n * n);
}

}  // namespace detail

// Double-centered pairwise Euclidean distance matrix (the A of the V-statistic).
inline Matrix centered_distances(const Eigen::Ref<const Matrix>& x) {
  Matrix d = detail::pairwise_euclidean(x);
  detail::double_center(d);
  return d;
}

// Double-centered half-squared-difference matrix for the response side of the
// martingale difference divergence.
inline Matrix centered_half_squared(const Eigen::Ref<const Vector>& y) {
  Matrix d = detail::half_squared_differences(y);
  detail::double_center(d);
  return d;
}

inline double dcov_sq(const Eigen::Ref<const Matrix>& x, const Eigen::Ref<const Matrix>& y) {
  if (x.rows() != y.rows()) throw data_error("dcov: row count mismatch");
  if (x.rows() < 2) throw data_error("dcov: need at least 2 observations");
  check_finite(x, "dcov");
  check_finite(y, "dcov");
  return detail::vstat_inner(centered_distances(x), centered_distances(y));
}

inline double dcov(const Eigen::Ref<const Matrix>& x, const Eigen::Ref<const Matrix>& y) {
  return std::sqrt(std::max(0.0, dcov_sq(x, y)));
}

inline double dvar(const Eigen::Ref<const Matrix>& x) { return dcov(x, x); }

inline double dcor(const Eigen::Ref<const Matrix>& x, const Eigen::Ref<const Matrix>& y) {
  const double vxy = dcov_sq(x, y);
  const double vxx = dcov_sq(x, x);
  const double vyy = dcov_sq(y, y);
  const double denom = std::sqrt(vxx * vyy);
  if (denom <= 0.0) return 0.0;
  return std::sqrt(std::max(0.0, vxy) / denom);
}

// Martingale difference divergence (squared): Euclidean distances on the X
// side, half squared differences on the y side.
inline double mdd_sq(const Eigen::Ref<const Vector>& y, const Eigen::Ref<const Matrix>& x) {
  if (x.rows() != y.size()) throw data_error("mdd: row count mismatch");
  if (x.rows() < 2) throw data_error("mdd: need at least 2 observations");
  check_finite(x, "mdd");
  check_finite(y, "mdd");
  return detail::vstat_inner(centered_distances(x), centered_half_squared(y));
}

inline double mdd(const Eigen::Ref<const Vector>& y, const Eigen::Ref<const Matrix>& x) {
  return std::sqrt(std::max(0.0, mdd_sq(y, x)));
}

inline double mdcorr(const Eigen::Ref<const Vector>& y, const Eigen::Ref<const Matrix>& x) {
  const Matrix a = centered_distances(x);
  const Matrix b = centered_half_squared(y);
  const double num = detail::vstat_inner(a, b);
  const double denom = std::sqrt(detail::vstat_inner(a, a) * detail::vstat_inner(b, b));
  if (denom <= 0.0) return 0.0;
  return std::sqrt(std::max(0.0, num) / denom);
}

// ---------------------------------------------------------------------------
// Projection-index adapter. Signed statistics are squared so the index is
// orientation-free; var, kurt, continuum and capi are used as they stand.
using IndexFn = std::function<double(const Vector& t, const Vector& y)>;

inline IndexFn make_projection_index(const MomentSpec& spec) {
  detail::validate_trim(spec.trim_alpha);
  switch (spec.kind) {
    case MomentKind::var:
    case MomentKind::kurt:
      return [spec](const Vector& t, const Vector&) { return moment(t, spec); };
    case MomentKind::skew:
      return [spec](const Vector& t, const Vector&) {
        const double s = moment(t, spec);
        return s * s;
      };
    case MomentKind::cov:
    case MomentKind::corr:
    case MomentKind::coskew:
    case MomentKind::cokurt:
      return [spec](const Vector& t, const Vector& y) {
        const double c = comoment(t, y, spec);
        return c * c;
      };
    case MomentKind::continuum:
      return [spec](const Vector& t, const Vector& y) {
        return continuum(t, y, spec.continuum_alpha, spec.center, spec.trim_alpha);
      };
    case MomentKind::capi: {
      Vector w = spec.capi_weights;
      if (w.size() == 0) {
        w = Vector::Zero(6);
        w[0] = 1.0;
      }
      return [spec, w](const Vector& t, const Vector& y) {
        return capi(t, y, w, spec.center, spec.trim_alpha);
      };
    }
  }
  throw invalid_spec("make_projection_index: unknown moment kind");
}

}  // namespace dimred::dicomo

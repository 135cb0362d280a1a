#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dimred/core.hpp"

// Classical and robust column standardization plus (generalized) spatial-sign
// transforms.

namespace dimred::preprocess {

enum class CenterMethod { mean, colmedian, spatial_median, kstep_lts, none };
enum class ScaleMethod { stddev, mad, tau, none };

struct ScalerSpec {
  CenterMethod center = CenterMethod::mean;
  ScaleMethod scale = ScaleMethod::stddev;
  // Opt-in 1/(n-1) denominator for stddev; the default is the population form
  // for consistency with the moment estimators.
  bool sample_variance = false;
};

struct FittedScaler {
  Vector mu;     // length p, data units
  Vector sigma;  // length p, strictly positive (all ones when scale = none)
};

namespace detail {

// Weiszfeld iteration for the spatial (L1) median. Terms whose distance to the
// current iterate vanishes are skipped.
inline Vector spatial_median(const Eigen::Ref<const Matrix>& x, double tol = 1e-9,
                             int max_iter = 1000) {
  const Index n = x.rows();
  const Index p = x.cols();
  Vector m(p);
  for (Index j = 0; j < p; ++j) m[j] = median_of(x.col(j));
  const double data_scale = std::max(1.0, x.cwiseAbs().maxCoeff());
  const double coincide = 1e-12 * data_scale;

  for (int it = 0; it < max_iter; ++it) {
    Vector num = Vector::Zero(p);
    double den = 0.0;
    for (Index i = 0; i < n; ++i) {
      const double d = (x.row(i).transpose() - m).norm();
      if (d <= coincide) continue;
      num += x.row(i).transpose() / d;
      den += 1.0 / d;
    }
    if (den == 0.0) break;  // all points coincide with the iterate
    const Vector next = num / den;
    const double step = (next - m).norm();
    m = next;
    if (step <= tol) break;
  }
  return m;
}

// k-step least trimmed squares center: start from the column-wise median and
// repeatedly recenter on the mean of the h points closest to the current
// center, h = ceil((n+p+1)/2) capped at n.
inline Vector kstep_lts_center(const Eigen::Ref<const Matrix>& x, int k = 3) {
  const Index n = x.rows();
  const Index p = x.cols();
  const Index h = std::min<Index>(n, (n + p + 2) / 2);
  Vector c(p);
  for (Index j = 0; j < p; ++j) c[j] = median_of(x.col(j));

  std::vector<Index> order(static_cast<std::size_t>(n));
  for (int step = 0; step < k; ++step) {
    Vector d2(n);
    for (Index i = 0; i < n; ++i) d2[i] = (x.row(i).transpose() - c).squaredNorm();
    for (Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&](Index a, Index b) {
      return d2[a] != d2[b] ? d2[a] < d2[b] : a < b;
    });
    Vector mean = Vector::Zero(p);
    for (Index r = 0; r < h; ++r) mean += x.row(order[static_cast<std::size_t>(r)]).transpose();
    c = mean / static_cast<double>(h);
  }
  return c;
}

// Maronna-Zamar tau scale: MAD start, one bisquare-weighted location step
// (c1 = 4.5), then a truncated second moment (c2 = 3.0), consistency corrected
// for the normal.
inline constexpr double kTauLocationCut = 4.5;
inline constexpr double kTauScaleCut = 3.0;
// E[min(Z^2, c^2)] for Z ~ N(0,1) at c = 3.
inline constexpr double kTauConsistency = 0.9950072780344536;

inline double tau_scale(const Eigen::Ref<const Vector>& x) {
  const Index n = x.size();
  const double med = median_of(x);
  const double s0 = mad_of(x);
  if (s0 <= 0.0) return 0.0;

  double wsum = 0.0, wxsum = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double u = (x[i] - med) / s0;
    const double a = std::abs(u) / kTauLocationCut;
    if (a < 1.0) {
      const double w = (1.0 - a * a) * (1.0 - a * a);
      wsum += w;
      wxsum += w * x[i];
    }
  }
  const double mu = wsum > 0.0 ? wxsum / wsum : med;

  double rho_sum = 0.0;
  const double c2sq = kTauScaleCut * kTauScaleCut;
  for (Index i = 0; i < n; ++i) {
    const double u = (x[i] - mu) / s0;
    rho_sum += std::min(u * u, c2sq);
  }
  return s0 * std::sqrt(rho_sum / (static_cast<double>(n) * kTauConsistency));
}

}  // namespace detail

// Column-wise location estimate of the rows of x.
inline Vector locate(const Eigen::Ref<const Matrix>& x, CenterMethod method) {
  if (x.rows() < 1 || x.cols() < 1) throw data_error("locate: empty matrix");
  check_finite(x, "locate");
  switch (method) {
    case CenterMethod::none:
      return Vector::Zero(x.cols());
    case CenterMethod::mean:
      return x.colwise().mean().transpose();
    case CenterMethod::colmedian: {
      Vector m(x.cols());
      for (Index j = 0; j < x.cols(); ++j) m[j] = median_of(x.col(j));
      return m;
    }
    case CenterMethod::spatial_median:
      return detail::spatial_median(x);
    case CenterMethod::kstep_lts:
      return detail::kstep_lts_center(x);
  }
  throw invalid_spec("locate: unknown center method");
}

// Scale estimate of a single column. Throws degenerate_column_error with
// column = -1 when the sample has zero scale; fit_scaler rethrows with the
// actual column index.
inline double scale_est(const Eigen::Ref<const Vector>& x, ScaleMethod method,
                        bool sample_variance = false) {
  if (x.size() < 2) throw data_error("scale_est: need at least 2 observations");
  check_finite(x, "scale_est");
  double s = 0.0;
  switch (method) {
    case ScaleMethod::none:
      return 1.0;
    case ScaleMethod::stddev: {
      const double mean = x.mean();
      const double denom = sample_variance ? static_cast<double>(x.size() - 1)
                                           : static_cast<double>(x.size());
      s = std::sqrt((x.array() - mean).square().sum() / denom);
      break;
    }
    case ScaleMethod::mad:
      s = mad_of(x);
      break;
    case ScaleMethod::tau:
      s = detail::tau_scale(x);
      break;
  }
  if (!(s > 0.0)) throw degenerate_column_error("scale_est: zero scale", -1);
  return s;
}

inline FittedScaler fit_scaler(const Eigen::Ref<const Matrix>& x, const ScalerSpec& spec) {
  if (x.rows() < 1 || x.cols() < 1) throw data_error("fit_scaler: empty matrix");
  check_finite(x, "fit_scaler");
  FittedScaler f;
  f.mu = locate(x, spec.center);
  f.sigma = Vector::Ones(x.cols());
  if (spec.scale != ScaleMethod::none) {
    for (Index j = 0; j < x.cols(); ++j) {
      try {
        f.sigma[j] = scale_est(x.col(j), spec.scale, spec.sample_variance);
      } catch (const degenerate_column_error&) {
        throw degenerate_column_error(
            "fit_scaler: column " + std::to_string(j) + " has zero scale", j);
      }
    }
  }
  return f;
}

inline Matrix transform(const FittedScaler& f, const Eigen::Ref<const Matrix>& x) {
  if (x.cols() != f.mu.size())
    throw data_error("transform: column count mismatch with fitted scaler");
  return (x.rowwise() - f.mu.transpose()).array().rowwise() /
         f.sigma.transpose().array();
}

inline Matrix inverse_transform(const FittedScaler& f, const Eigen::Ref<const Matrix>& z) {
  if (z.cols() != f.mu.size())
    throw data_error("inverse_transform: column count mismatch with fitted scaler");
  return (z.array().rowwise() * f.sigma.transpose().array()).matrix().rowwise() +
         f.mu.transpose();
}

// ---------------------------------------------------------------------------
// Generalized spatial signs: u = (x - mu) * xi(||x - mu||).

enum class RadialFn { ss, quadratic_radial, ball, shell, winsor, lr };

struct SignSpec {
  RadialFn fn = RadialFn::ss;
  // Cutoff radii in data units. Unset cutoffs default to the 0.95 (r1) and
  // 0.99 (r2) empirical quantiles of the centered-row norms.
  std::optional<double> r1;
  std::optional<double> r2;
  ScalerSpec centering{CenterMethod::spatial_median, ScaleMethod::none};
};

struct FittedSignTransform {
  RadialFn fn = RadialFn::ss;
  Vector mu;
  double r1 = 0.0;
  double r2 = 0.0;
};

namespace detail {

inline bool needs_two_cutoffs(RadialFn fn) {
  return fn == RadialFn::shell || fn == RadialFn::lr;
}

inline double radial_weight(RadialFn fn, double t, double r1, double r2) {
  switch (fn) {
    case RadialFn::ss:
      return 1.0 / t;
    case RadialFn::quadratic_radial:
      return std::min(1.0, (r1 * r1) / (t * t));
    case RadialFn::ball:
      return t <= r1 ? 1.0 : 0.0;
    case RadialFn::winsor:
      return std::min(1.0, r1 / t);
    case RadialFn::shell:
      if (t <= r1) return 1.0;
      return t <= r2 ? r1 / t : 0.0;
    case RadialFn::lr:
      if (t <= r1) return 1.0;
      return t <= r2 ? (r2 - t) / (r2 - r1) : 0.0;
  }
  throw invalid_spec("radial_weight: unknown radial function");
}

}  // namespace detail

inline FittedSignTransform fit_sign_transform(const Eigen::Ref<const Matrix>& x,
                                              const SignSpec& spec) {
  check_finite(x, "fit_sign_transform");
  if (spec.r2 && !detail::needs_two_cutoffs(spec.fn))
    throw invalid_spec("sign transform: this radial function takes at most one cutoff");
  if ((spec.r1 && *spec.r1 < 0.0) || (spec.r2 && *spec.r2 < 0.0))
    throw invalid_spec("sign transform: cutoffs must be nonnegative");

  FittedSignTransform f;
  f.fn = spec.fn;
  f.mu = locate(x, spec.centering.center);

  std::vector<double> norms(static_cast<std::size_t>(x.rows()));
  for (Index i = 0; i < x.rows(); ++i)
    norms[static_cast<std::size_t>(i)] = (x.row(i).transpose() - f.mu).norm();
  f.r1 = spec.r1 ? *spec.r1 : quantile_of(norms, 0.95);
  f.r2 = spec.r2 ? *spec.r2 : quantile_of(norms, 0.99);
  if (detail::needs_two_cutoffs(spec.fn) && !(f.r1 < f.r2))
    throw invalid_spec("sign transform: shell/lr require cutoffs r1 < r2");
  return f;
}

inline Matrix apply_sign_transform(const FittedSignTransform& f,
                                   const Eigen::Ref<const Matrix>& x) {
  if (x.cols() != f.mu.size())
    throw data_error("apply_sign_transform: column count mismatch");
  check_finite(x, "apply_sign_transform");
  Matrix u(x.rows(), x.cols());
  for (Index i = 0; i < x.rows(); ++i) {
    const Vector c = x.row(i).transpose() - f.mu;
    const double t = c.norm();
    if (t == 0.0) {
      u.row(i).setZero();  // rows exactly at the center map to zero
    } else {
      u.row(i) = (c * detail::radial_weight(f.fn, t, f.r1, f.r2)).transpose();
    }
  }
  return u;
}

inline Matrix gen_spatial_sign(const Eigen::Ref<const Matrix>& x, const SignSpec& spec) {
  return apply_sign_transform(fit_sign_transform(x, spec), x);
}

}  // namespace dimred::preprocess
